#pragma once
// Seeded synthetic instances: a baseload with one peak and one valley plus a
// session-history corpus with daytime per-user patterns. Stand-in for
// proprietary production data; byte-identical for a given seed.

#include <cstdint>

#include "evgrid/data_io.hpp"
#include "evgrid/time_model.hpp"

namespace evgrid::synth {

struct SynthSpec {
    std::uint64_t seed = 1;
    int n_users = 30;
    int t_slots = 60;
    int slot_minutes = 12;
    double horizon_start_min = 7 * 60.0;  // 07:00
    double base_kw = 95.0;
    double peak_kw = 140.0;
    double valley_kw = 60.0;
    int sessions_per_user = 20;
};

struct SynthInstance {
    TimeGrid grid;
    SlotVector baseload;
    std::vector<io::RawSession> sessions;
    std::vector<io::FleetEntry> fleet;
};

SynthInstance generate(const SynthSpec& spec);

}  // namespace evgrid::synth
