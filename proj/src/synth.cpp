#include "evgrid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "evgrid/errors.hpp"

namespace evgrid::synth {

namespace {

// Distribution helpers built directly on the engine's bit stream.
// std::*_distribution output is implementation-defined; these are not.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

double gaussian(std::mt19937_64& rng, double mean, double stddev) {
    // Box-Muller, one variate per call
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 < 1e-300) u1 = 1e-300;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
}

std::string iso_timestamp(int year, int month, int day, int minutes_of_day) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:00", year, month,
                  day, minutes_of_day / 60, minutes_of_day % 60);
    return buf;
}

}  // namespace

SynthInstance generate(const SynthSpec& spec) {
    if (spec.n_users < 1) throw InvalidInput("n_users must be >= 1");
    if (spec.t_slots < 1) throw InvalidInput("t_slots must be >= 1");
    if (spec.sessions_per_user < 1)
        throw InvalidInput("sessions_per_user must be >= 1");

    SynthInstance inst;
    inst.grid = TimeGrid(spec.horizon_start_min, spec.t_slots, spec.slot_minutes);

    std::mt19937_64 rng(spec.seed);

    // baseload: smooth base with a morning-side peak bump and an afternoon
    // valley dip, plus mild noise
    const double t = spec.t_slots;
    const double peak_center = 0.37 * t, peak_width = 0.09 * t;
    const double valley_center = 0.69 * t, valley_width = 0.13 * t;
    inst.baseload.resize(spec.t_slots);
    for (int k = 0; k < spec.t_slots; ++k) {
        double zp = (k - peak_center) / peak_width;
        double zv = (k - valley_center) / valley_width;
        double b = spec.base_kw +
                   (spec.peak_kw - spec.base_kw) * std::exp(-zp * zp) +
                   (spec.valley_kw - spec.base_kw) * std::exp(-zv * zv);
        inst.baseload[k] = std::max(0.0, b + gaussian(rng, 0.0, 1.0));
    }

    // per-user routine: daytime window with jitter, near-linear energy use
    const double charge_rates[] = {3.3, 6.6, 9.9};
    for (int u = 0; u < spec.n_users; ++u) {
        char uid[16], eid[16];
        std::snprintf(uid, sizeof uid, "user-%03d", u + 1);
        std::snprintf(eid, sizeof eid, "evse-%03d", u + 1);

        double typical_start = 8 * 60.0 + uniform(rng, -60.0, 90.0);
        double typical_end = 16 * 60.0 + 30.0 + uniform(rng, -60.0, 90.0);
        double theta = uniform(rng, 0.6, 1.5);  // kWh per stay-hour

        int year = 2016, month = 8, day = 1;  // weekday sequence, Mon Aug 1
        for (int s = 0; s < spec.sessions_per_user; ++s) {
            double start = typical_start + gaussian(rng, 0.0, 20.0);
            double end = typical_end + gaussian(rng, 0.0, 30.0);
            start = std::clamp(start, 1.0, 22 * 60.0);
            end = std::clamp(end, start + 60.0, 23 * 60.0 + 59.0);
            double duration_h = (end - start) / 60.0;
            double energy =
                std::max(0.0, theta * duration_h * (1.0 + gaussian(rng, 0.0, 0.05)));
            int sm = static_cast<int>(start + 0.5);
            int em = static_cast<int>(end + 0.5);
            if (em <= sm) em = sm + 1;
            inst.sessions.push_back(io::RawSession{
                uid, iso_timestamp(year, month, day, sm),
                iso_timestamp(year, month, day, em), energy});
            // advance to next weekday
            ++day;
            if ((day - 1) % 7 >= 5) day += 2;
            if (day > 28) {
                day = 1;
                ++month;
            }
        }

        io::FleetEntry e;
        e.evse_id = eid;
        e.user_id = uid;
        e.p_max_kw = charge_rates[rng() % 3];
        e.d_max_kw = -e.p_max_kw;
        e.lag = 0;
        inst.fleet.push_back(e);
    }
    return inst;
}

}  // namespace evgrid::synth
