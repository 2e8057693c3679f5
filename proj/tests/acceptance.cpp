// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.
//
// usage: acceptance <path-to-evgrid-cli> <work-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "evgrid/behavior.hpp"
#include "evgrid/coordinator.hpp"
#include "evgrid/data_io.hpp"
#include "evgrid/local_solver.hpp"
#include "evgrid/pipeline.hpp"
#include "evgrid/synth.hpp"
#include "oracles.hpp"

using namespace evgrid;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok,
            const std::string& detail = "") {
    std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct Instance {
    TimeGrid grid{0.0, 1, 1};
    SlotVector baseload;
    std::vector<EvseAgentState> agents;
};

// full pipeline on the seeded synthetic corpus: sessions -> forecasts ->
// bounds/demand -> agents
Instance paper_scale_instance(std::uint64_t seed) {
    synth::SynthSpec spec;
    spec.seed = seed;
    auto gen = synth::generate(spec);

    std::map<std::string, std::vector<SessionRecord>> by_user;
    for (const auto& raw : gen.sessions) {
        auto start = io::parse_instant(raw.start_iso, "synth", 0);
        auto end = io::parse_instant(raw.end_iso, "synth", 0);
        by_user[raw.user_id].push_back(
            SessionRecord{raw.user_id, start.minutes, end.minutes, raw.energy_kwh});
    }
    std::vector<BehaviorForecast> forecasts;
    for (const auto& [user, sessions] : by_user)
        forecasts.push_back(forecast_user(sessions));

    auto assembled = assemble_agents(gen.fleet, forecasts, gen.grid);
    return Instance{gen.grid, gen.baseload, std::move(assembled.agents)};
}

RateBounds random_bounds(std::mt19937_64& rng, std::size_t t, double width) {
    RateBounds b;
    b.lower.resize(t);
    b.upper.resize(t);
    b.available.assign(t, 1);
    for (std::size_t i = 0; i < t; ++i) {
        b.lower[i] = -width * (0.2 + 0.8 * u01(rng));
        b.upper[i] = width * (0.2 + 0.8 * u01(rng));
    }
    return b;
}

void criterion_1_centralized_equivalence() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    bool ok = true;
    std::string detail;
    for (int inst = 0; inst < 20 && ok; ++inst) {
        std::size_t t = 2 + rng() % 7;   // 2..8 slots
        std::size_t n = 1 + rng() % 3;   // 1..3 agents
        double dt = rng() % 2 ? 1.0 : 0.5;
        TimeGrid grid(0.0, static_cast<int>(t), static_cast<int>(dt * 60));
        SlotVector baseload(t);
        for (auto& b : baseload) b = 10.0 + 50.0 * u01(rng);

        std::vector<EvseAgentState> agents;
        std::vector<oracle::OracleAgent> oracle_agents;
        for (std::size_t a = 0; a < n; ++a) {
            EvseAgentState s;
            s.evse_id = "e" + std::to_string(a);
            s.bounds = random_bounds(rng, t, 1.0 + 4.0 * u01(rng));
            s.energy_kwh = 0.8 * s.bounds.max_energy_kwh(dt) * u01(rng);
            oracle_agents.push_back({s.bounds, s.energy_kwh});
            agents.push_back(std::move(s));
        }

        RunConfig cfg;
        cfg.epsilon = 1e-8;
        cfg.max_iters = 100000;
        auto result = run(baseload, agents, grid, cfg);
        double dist_obj = flatness_objective(baseload, result.profiles);

        auto opt = oracle::centralized_optimum(baseload, oracle_agents, dt, 20000);
        double oracle_obj = oracle::flatness_of(baseload, opt);

        if (!result.converged ||
            std::fabs(dist_obj - oracle_obj) > 1e-3 * oracle_obj) {
            ok = false;
            detail = "instance " + std::to_string(inst) + ": distributed " +
                     std::to_string(dist_obj) + " vs oracle " +
                     std::to_string(oracle_obj);
        }
    }
    double secs = elapsed_s(t0);
    if (secs >= 10.0) {
        ok = false;
        detail += " runtime " + std::to_string(secs) + "s >= 10s";
    }
    report(1, "converged objective matches centralized oracle within 0.1%", ok,
           detail);
}

void criterion_2_local_solver_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(7);
    bool ok = true;
    std::string detail;
    for (int rep = 0; rep < 50 && ok; ++rep) {
        std::size_t t = 2 + rep % 3;  // 2..4 slots
        double width = t == 4 ? 0.6 : 1.2;
        LocalProblem p;
        p.dt_hours = rng() % 2 ? 1.0 : 0.5;
        p.bounds = random_bounds(rng, t, width);
        p.control.resize(t);
        p.prev_profile.resize(t);
        for (std::size_t i = 0; i < t; ++i) {
            p.control[i] = -1.0 + 2.0 * u01(rng);
            p.prev_profile[i] =
                p.bounds.lower[i] + (p.bounds.upper[i] - p.bounds.lower[i]) * u01(rng);
        }
        double e_min = p.bounds.min_energy_kwh(p.dt_hours);
        double e_max = p.bounds.max_energy_kwh(p.dt_hours);
        p.energy_kwh = e_min + (e_max - e_min) * u01(rng);

        auto sol = local_solve(p);
        double oracle_min = oracle::grid_search_min(p, 0.01);
        if (sol.objective > oracle_min + 1e-3) {
            ok = false;
            detail = "objective " + std::to_string(sol.objective) +
                     " above grid minimum " + std::to_string(oracle_min);
            break;
        }
        for (std::size_t i = 0; i < t; ++i) {
            if (sol.profile[i] > p.bounds.lower[i] + 1e-9 &&
                sol.profile[i] < p.bounds.upper[i] - 1e-9) {
                double stationary =
                    p.prev_profile[i] - p.control[i] + sol.multiplier * p.dt_hours;
                if (std::fabs(sol.profile[i] - stationary) > 1e-8) {
                    ok = false;
                    detail = "KKT interior residual too large";
                }
            }
        }
    }
    double secs = elapsed_s(t0);
    if (secs >= 30.0) {
        ok = false;
        detail += " runtime " + std::to_string(secs) + "s >= 30s";
    }
    report(2, "local solutions beat the 0.01-kW grid oracle with clean KKT", ok,
           detail);
}

void criterion_3_constraint_suite() {
    bool ok = true;
    std::string detail;
    auto check_run = [&](Instance inst, RunConfig cfg) {
        double dt = inst.grid.dt_hours();
        double expected_total = 0.0;
        for (const auto& a : inst.agents) expected_total += a.energy_kwh;
        auto observer = [&](int, const std::vector<EvseAgentState>& agents) {
            double delivered = 0.0;
            for (const auto& a : agents) {
                double e = 0.0;
                for (std::size_t t = 0; t < a.published_profile.size(); ++t) {
                    double p = a.published_profile[t];
                    if (p < a.bounds.lower[t] || p > a.bounds.upper[t]) {
                        ok = false;
                        detail = a.evse_id + ": published profile out of bounds";
                    }
                    e += p * dt;
                }
                if (std::fabs(e - a.energy_kwh) >
                    1e-9 * std::max(1.0, a.energy_kwh)) {
                    ok = false;
                    detail = a.evse_id + ": published energy " + std::to_string(e) +
                             " != " + std::to_string(a.energy_kwh);
                }
                delivered += e;
            }
            if (std::fabs(delivered - expected_total) > 1e-6) {
                ok = false;
                detail = "total delivered " + std::to_string(delivered) +
                         " != " + std::to_string(expected_total);
            }
        };
        run(inst.baseload, inst.agents, inst.grid, cfg, observer);
    };

    check_run(paper_scale_instance(1), RunConfig{});
    RunConfig async;
    async.u = 3;
    async.v = 2;
    async.max_iters = 400;
    check_run(paper_scale_instance(2), async);
    report(3, "bounds exact and energy equalities hold at every publication", ok,
           detail);
}

void criterion_4_paper_scale_convergence(const Instance& inst,
                                         ScheduleResult& out_sync) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;  // defaults: lambda 2, epsilon 1e-3, u = v = 1
    out_sync = run(inst.baseload, inst.agents, inst.grid, cfg);
    double secs = elapsed_s(t0);
    bool ok = out_sync.converged && out_sync.iterations <= 200 && secs < 5.0;
    report(4, "30-EV / 60-slot instance converges within 200 iterations", ok,
           "iterations = " + std::to_string(out_sync.iterations) + ", " +
               std::to_string(secs) + "s");
}

void criterion_5_peak_shaving(const Instance& inst, const ScheduleResult& sync) {
    // aggregate simultaneous charging capacity at the busiest slot
    double fleet_capacity = 0.0;
    SlotVector per_slot(inst.baseload.size(), 0.0);
    for (const auto& a : inst.agents)
        for (std::size_t t = 0; t < per_slot.size(); ++t)
            per_slot[t] += a.bounds.upper[t];
    for (double v : per_slot) fleet_capacity = std::max(fleet_capacity, v);

    const Metrics& m = sync.metrics;
    bool capacity_ok = fleet_capacity >= 0.3 * m.peak_before_kw;
    bool ok = capacity_ok && m.peak_after_kw < m.peak_before_kw &&
              m.variance_after <= 0.5 * m.variance_before;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "peak %.1f -> %.1f kW (%.1f%% reduction; reference figure 35%%), "
                  "variance %.1f -> %.1f",
                  m.peak_before_kw, m.peak_after_kw, 100.0 * m.peak_reduction,
                  m.variance_before, m.variance_after);
    report(5, "peak shaved and variance at least halved", ok, detail);
}

void criterion_6_asynchrony(const Instance& base, const ScheduleResult& sync) {
    Instance inst = base;
    for (std::size_t i = 0; i < inst.agents.size(); ++i)
        inst.agents[i].lag = static_cast<int>(i % 3);  // lags 0..2
    RunConfig cfg;
    cfg.u = 3;
    cfg.v = 2;
    cfg.max_iters = 1000;
    auto result = run(inst.baseload, inst.agents, inst.grid, cfg);

    bool trace_ok = true;
    for (const auto& tr : result.trace)
        if (tr.control_delta.has_value() != tr.signal_updated ||
            tr.signal_updated != (tr.iteration % 3 == 0))
            trace_ok = false;

    double sync_obj = flatness_objective(inst.baseload, sync.profiles);
    double async_obj = flatness_objective(inst.baseload, result.profiles);
    bool ok = result.converged && trace_ok &&
              std::fabs(async_obj - sync_obj) <= 5e-3 * sync_obj;
    report(6, "delayed updates (u=3, v=2, lag<=2) converge to the same objective",
           ok,
           "sync " + std::to_string(sync_obj) + " vs async " +
               std::to_string(async_obj) + ", iterations = " +
               std::to_string(result.iterations));
}

void criterion_7_predictor_exactness() {
    bool ok = true;
    std::string detail;

    auto session = [](double start, double end, double e) {
        return SessionRecord{"u", start, end, e};
    };
    // worked examples, exact
    std::vector<SessionRecord> a{session(0, 60, 2), session(0, 120, 4),
                                 session(0, 180, 6)};
    std::vector<SessionRecord> b{session(0, 120, 5)};
    std::vector<SessionRecord> c{session(0, 60, 3), session(0, 180, 5)};
    if (fit_energy_model(a) != 2.0 || fit_energy_model(b) != 2.5 ||
        fit_energy_model(c) != 1.8) {
        ok = false;
        detail = "worked regression examples not reproduced exactly";
    }

    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 100 && ok; ++rep) {
        std::size_t m = 1 + rng() % 40;
        std::vector<SessionRecord> s;
        for (std::size_t i = 0; i < m; ++i) {
            double start = 200.0 + 500.0 * u01(rng);
            double dur = 15.0 + 700.0 * u01(rng);
            s.push_back(session(start, start + dur, 50.0 * u01(rng)));
        }
        // explicit [X^T X]^-1 X^T y, written independently of the library
        double xtx = 0.0;
        for (const auto& r : s) {
            double d = (r.end_min - r.start_min) / 60.0;
            xtx += d * d;
        }
        double matrix_theta = 0.0;
        for (const auto& r : s) {
            double d = (r.end_min - r.start_min) / 60.0;
            matrix_theta += (1.0 / xtx) * d * r.energy_kwh;
        }
        double lib_theta = fit_energy_model(s);
        if (std::fabs(lib_theta - matrix_theta) >
            1e-12 * std::max(1.0, std::fabs(matrix_theta))) {
            ok = false;
            detail = "matrix and ratio forms disagree beyond 1e-12";
        }
    }
    report(7, "regression forms agree to 1e-12 and worked examples are exact", ok,
           detail);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_8_determinism(const std::string& cli, const fs::path& work) {
    auto sh = [&](const std::string& args) {
        std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    fs::path inst = work / "instance";
    bool ok = sh("synth --seed 1 --out " + inst.string()) == 0;
    ok = ok && sh("predict --sessions " + (inst / "sessions.csv").string() +
                  " --out " + (inst / "forecasts.csv").string()) == 0;
    std::string common = "schedule --baseload " + (inst / "baseload.csv").string() +
                         " --forecasts " + (inst / "forecasts.csv").string() +
                         " --fleet " + (inst / "fleet.toml").string() +
                         " --config " + (inst / "config.toml").string();
    ok = ok && sh(common + " --out " + (work / "run1").string()) == 0;
    ok = ok && sh(common + " --out " + (work / "run2").string()) == 0;

    std::string detail;
    if (ok) {
        for (const char* name : {"schedule.csv", "trace.csv", "report.txt"}) {
            if (slurp(work / "run1" / name) != slurp(work / "run2" / name)) {
                ok = false;
                detail = std::string(name) + " differs between runs";
            }
        }
    } else {
        detail = "CLI pipeline failed";
    }
    report(8, "repeated cmd_schedule runs produce byte-identical artifacts", ok,
           detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <evgrid-cli> <work-dir>\n");
        return 2;
    }
    fs::path work(argv[2]);
    fs::remove_all(work);
    fs::create_directories(work);

    criterion_1_centralized_equivalence();
    criterion_2_local_solver_oracle();
    criterion_3_constraint_suite();

    Instance inst = paper_scale_instance(1);
    ScheduleResult sync;
    criterion_4_paper_scale_convergence(inst, sync);
    criterion_5_peak_shaving(inst, sync);
    criterion_6_asynchrony(inst, sync);
    criterion_7_predictor_exactness();
    criterion_8_determinism(argv[1], work);

    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
