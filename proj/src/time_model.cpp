#include "evgrid/time_model.hpp"

#include <cmath>
#include <stdexcept>

#include "evgrid/errors.hpp"

namespace evgrid {

TimeGrid::TimeGrid(double start_min, int slots, int minutes_per_slot)
    : horizon_start_min(start_min),
      slot_count(slots),
      slot_minutes(minutes_per_slot) {
    if (slots < 1 || minutes_per_slot < 1)
        throw InvalidInput("TimeGrid requires slot_count >= 1 and slot_minutes >= 1");
    if (!std::isfinite(start_min))
        throw InvalidInput("TimeGrid horizon start must be finite");
}

double TimeGrid::slot_midpoint(int k) const {
    if (k < 0 || k >= slot_count)
        throw std::out_of_range("slot index " + std::to_string(k) +
                                " outside [0, " + std::to_string(slot_count) + ")");
    return horizon_start_min + (k + 0.5) * slot_minutes;
}

int RateBounds::available_count() const {
    int n = 0;
    for (auto a : available) n += a ? 1 : 0;
    return n;
}

double RateBounds::min_energy_kwh(double dt_hours) const {
    double s = 0.0;
    for (double v : lower) s += v;
    return s * dt_hours;
}

double RateBounds::max_energy_kwh(double dt_hours) const {
    double s = 0.0;
    for (double v : upper) s += v;
    return s * dt_hours;
}

RateBounds build_bounds(const TimeGrid& grid, double window_start_min,
                        double window_end_min, double p_max_kw, double d_max_kw) {
    if (!(p_max_kw >= 0.0) || !std::isfinite(p_max_kw))
        throw InvalidInput("p_max must be finite and >= 0");
    if (!(d_max_kw <= 0.0) || !std::isfinite(d_max_kw))
        throw InvalidInput("d_max must be finite and <= 0");

    const int t = grid.slot_count;
    RateBounds b;
    b.lower.assign(t, 0.0);
    b.upper.assign(t, 0.0);
    b.available.assign(t, 0);
    for (int k = 0; k < t; ++k) {
        double mid = grid.slot_midpoint(k);
        if (mid >= window_start_min && mid < window_end_min) {
            b.available[k] = 1;
            b.lower[k] = d_max_kw;
            b.upper[k] = p_max_kw;
        }
    }
    return b;
}

}  // namespace evgrid
