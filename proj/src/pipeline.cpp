#include "evgrid/pipeline.hpp"

#include <unordered_map>

#include "evgrid/data_io.hpp"

namespace evgrid {

AssembledFleet assemble_agents(const std::vector<io::FleetEntry>& fleet,
                               const std::vector<BehaviorForecast>& forecasts,
                               const TimeGrid& grid) {
    std::unordered_map<std::string, const BehaviorForecast*> by_user;
    for (const auto& f : forecasts) by_user[f.user_id] = &f;

    AssembledFleet out;
    for (const auto& e : fleet) {
        auto it = by_user.find(e.user_id);
        if (it == by_user.end()) {
            out.warnings.push_back(e.evse_id + ": no forecast for user " +
                                   e.user_id + ", excluded");
            continue;
        }
        const BehaviorForecast& f = *it->second;
        if (!f.valid()) {
            out.warnings.push_back(e.evse_id + ": invalid forecast window for " +
                                   e.user_id + ", excluded");
            continue;
        }
        EvseAgentState a;
        a.evse_id = e.evse_id;
        a.user_id = e.user_id;
        a.lag = e.lag;
        a.bounds = build_bounds(grid, f.t_start_pred_min, f.t_end_pred_min,
                                e.p_max_kw, e.d_max_kw);
        ClampedDemand d = clamp_demand(f, a.bounds, grid.dt_hours());
        if (d.excluded) {
            out.warnings.push_back(e.evse_id +
                                   ": predicted window covers no slot, excluded");
            continue;
        }
        if (d.clamped)
            out.warnings.push_back(e.evse_id + ": demand " +
                                   io::format_double(f.energy_pred_kwh) +
                                   " kWh clamped to " +
                                   io::format_double(d.energy_kwh) + " kWh");
        a.energy_kwh = d.energy_kwh;
        out.agents.push_back(std::move(a));
    }
    return out;
}

}  // namespace evgrid
