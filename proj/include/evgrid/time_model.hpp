#pragma once
// Discretized horizon, per-slot vectors and per-EV rate bounds.
//
// Wall-clock instants are minutes since local midnight (double). The horizon
// is a single day; slot k covers [start + k*dt, start + (k+1)*dt).

#include <cstdint>
#include <vector>

namespace evgrid {

using SlotVector = std::vector<double>;

struct TimeGrid {
    double horizon_start_min = 0.0;  // minutes since midnight
    int slot_count = 0;              // T
    int slot_minutes = 0;            // dt in minutes

    TimeGrid() = default;
    TimeGrid(double start_min, int slots, int minutes_per_slot);

    double dt_hours() const { return slot_minutes / 60.0; }
    double horizon_end_min() const {
        return horizon_start_min + static_cast<double>(slot_count) * slot_minutes;
    }

    // start + (k + 1/2)*dt; throws std::out_of_range outside [0, T)
    double slot_midpoint(int k) const;
};

struct RateBounds {
    SlotVector lower;                 // kW, <= 0 where available, 0 elsewhere
    SlotVector upper;                 // kW, >= 0 where available, 0 elsewhere
    std::vector<std::uint8_t> available;

    int available_count() const;
    // window-capacity limits in kWh
    double min_energy_kwh(double dt_hours) const;
    double max_energy_kwh(double dt_hours) const;
};

// Availability by slot-midpoint membership in [window_start, window_end).
// p_max must be >= 0 and d_max <= 0 (charging positive, V2G negative).
RateBounds build_bounds(const TimeGrid& grid, double window_start_min,
                        double window_end_min, double p_max_kw, double d_max_kw);

}  // namespace evgrid
