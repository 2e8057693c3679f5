#pragma once
// Glue between the file surfaces and the scheduling loop: pair fleet entries
// with forecasts, build rate bounds, clamp demand and collect exclusions.

#include "evgrid/coordinator.hpp"
#include "evgrid/data_io.hpp"

namespace evgrid {

struct AssembledFleet {
    std::vector<EvseAgentState> agents;
    std::vector<std::string> warnings;  // exclusions and demand clamps
};

AssembledFleet assemble_agents(const std::vector<io::FleetEntry>& fleet,
                               const std::vector<BehaviorForecast>& forecasts,
                               const TimeGrid& grid);

}  // namespace evgrid
