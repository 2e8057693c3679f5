// evgrid: synthesize instances, predict charging behavior, run the
// distributed scheduler and report the resulting load metrics.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "evgrid/behavior.hpp"
#include "evgrid/coordinator.hpp"
#include "evgrid/data_io.hpp"
#include "evgrid/errors.hpp"
#include "evgrid/pipeline.hpp"
#include "evgrid/synth.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitIo = 66;
constexpr int kExitNotConverged = 3;

namespace fs = std::filesystem;
using namespace evgrid;

int cmd_synth(const synth::SynthSpec& spec, const std::string& out_dir) {
    auto inst = synth::generate(spec);
    fs::create_directories(out_dir);
    io::write_baseload((fs::path(out_dir) / "baseload.csv").string(), inst.baseload);
    io::write_sessions((fs::path(out_dir) / "sessions.csv").string(), inst.sessions);
    io::write_fleet((fs::path(out_dir) / "fleet.toml").string(), inst.fleet);
    io::SimConfig cfg;
    cfg.grid = inst.grid;
    io::write_config((fs::path(out_dir) / "config.toml").string(), cfg);
    std::cout << "wrote baseload.csv, sessions.csv, fleet.toml, config.toml to "
              << out_dir << "\n";
    return 0;
}

int cmd_predict(const std::string& sessions_path, const std::string& out_path,
                bool weekdays_only) {
    auto read = io::read_sessions(sessions_path, weekdays_only);
    std::map<std::string, std::vector<SessionRecord>> by_user;
    for (auto& r : read.records) by_user[r.user_id].push_back(r);

    std::vector<BehaviorForecast> forecasts;
    std::vector<std::string> warnings;
    if (read.dropped_midnight > 0)
        warnings.push_back(std::to_string(read.dropped_midnight) +
                           " session(s) spanning midnight dropped");
    if (read.dropped_weekend > 0)
        warnings.push_back(std::to_string(read.dropped_weekend) +
                           " weekend session(s) filtered");
    for (const auto& [user, sessions] : by_user) {
        try {
            BehaviorForecast f = forecast_user(sessions);
            if (!f.valid()) {
                warnings.push_back(user + ": predicted window is empty, forecast invalid");
                continue;
            }
            forecasts.push_back(std::move(f));
        } catch (const Error& e) {
            warnings.push_back(user + ": " + e.what());
        }
    }
    io::write_forecasts(out_path, forecasts, warnings);
    std::cout << "wrote " << forecasts.size() << " forecast(s) to " << out_path << "\n";
    if (by_user.empty()) std::cout << "note: sessions file contained no usable sessions\n";
    for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int cmd_schedule(const std::string& baseload_path, const std::string& forecasts_path,
                 const std::string& fleet_path, const std::string& config_path,
                 const std::string& out_dir) {
    io::SimConfig cfg = io::read_config(config_path);
    SlotVector baseload = io::read_baseload(baseload_path, cfg.grid.slot_count);
    auto forecasts = io::read_forecasts(forecasts_path);
    auto fleet = io::read_fleet(fleet_path);

    AssembledFleet assembled = assemble_agents(fleet, forecasts, cfg.grid);
    if (assembled.agents.empty())
        throw InvalidInput("no schedulable EVs after exclusions");

    ScheduleResult result = run(baseload, assembled.agents, cfg.grid, cfg.run);
    io::write_artifacts(result, baseload, cfg.grid, cfg.run, assembled.warnings,
                        out_dir);
    for (const auto& w : assembled.warnings) std::cout << "warning: " << w << "\n";
    std::cout << (result.converged ? "converged" : "did not converge") << " after "
              << result.iterations << " iteration(s)\n";
    return result.converged ? 0 : kExitNotConverged;
}

int cmd_report(const std::string& dir) {
    fs::path base(dir);
    auto report_path = (base / "report.txt").string();
    auto trace_path = (base / "trace.csv").string();
    if (!fs::exists(report_path) || !fs::exists(trace_path))
        throw IoError("no run artifacts in " + dir +
                      " (expected report.txt and trace.csv; run 'evgrid schedule' first)");
    auto report = io::read_report(report_path);
    auto trace = io::read_trace(trace_path);

    double peak_before = io::parse_double(report.at("peak_before_kw"), report_path, 0);
    double peak_after = io::parse_double(report.at("peak_after_kw"), report_path, 0);
    double reduction_pct =
        peak_before != 0.0 ? (peak_before - peak_after) / peak_before * 100.0 : 0.0;

    std::printf("converged        = %s\n", report.at("converged").c_str());
    std::printf("iterations       = %s\n", report.at("iterations").c_str());
    std::printf("peak_before_kw   = %.3f\n", peak_before);
    std::printf("peak_after_kw    = %.3f\n", peak_after);
    std::printf("peak_reduction   = %.1f%%\n", reduction_pct);
    std::printf("variance_before  = %s\n", report.at("variance_before").c_str());
    std::printf("variance_after   = %s\n", report.at("variance_after").c_str());

    SlotVector total = io::parse_series(report.at("total_kw"), report_path);
    std::printf("\n# total load profile\nslot,total_kw\n");
    for (std::size_t k = 0; k < total.size(); ++k)
        std::printf("%zu,%s\n", k, io::format_double(total[k]).c_str());

    std::printf("\n# control signal deltas\niteration,control_delta\n");
    for (const auto& tr : trace)
        if (tr.control_delta)
            std::printf("%d,%s\n", tr.iteration,
                        io::format_double(*tr.control_delta).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed bi-directional EV charging scheduler"};
    app.require_subcommand(1);

    synth::SynthSpec spec;
    std::string synth_out = "instance";
    std::string start_hhmm = "07:00";
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic instance");
    synth_cmd->add_option("--seed", spec.seed, "RNG seed");
    synth_cmd->add_option("--users", spec.n_users, "number of EV users")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--slots", spec.t_slots, "time slots in the horizon")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--slot-minutes", spec.slot_minutes, "slot length, minutes")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--start", start_hhmm, "horizon start, HH:MM");
    synth_cmd->add_option("--base-kw", spec.base_kw, "baseload plateau, kW");
    synth_cmd->add_option("--peak-kw", spec.peak_kw, "baseload peak, kW");
    synth_cmd->add_option("--valley-kw", spec.valley_kw, "baseload valley, kW");
    synth_cmd->add_option("--sessions-per-user", spec.sessions_per_user,
                          "history depth per user")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--out", synth_out, "output directory");

    std::string sessions_path, forecasts_out = "forecasts.csv";
    bool weekdays_only = false;
    auto* predict_cmd = app.add_subcommand("predict", "forecast charging behavior");
    predict_cmd->add_option("--sessions", sessions_path, "session history CSV")
        ->required();
    predict_cmd->add_option("--out", forecasts_out, "forecast CSV to write");
    predict_cmd->add_flag("--weekdays-only", weekdays_only,
                          "ignore weekend sessions");

    std::string baseload_path, forecasts_path, fleet_path, config_path,
        schedule_out = "run";
    auto* schedule_cmd = app.add_subcommand("schedule", "run the scheduler");
    schedule_cmd->add_option("--baseload", baseload_path, "baseload CSV")->required();
    schedule_cmd->add_option("--forecasts", forecasts_path, "forecast CSV")->required();
    schedule_cmd->add_option("--fleet", fleet_path, "fleet description")->required();
    schedule_cmd->add_option("--config", config_path, "run configuration")->required();
    schedule_cmd->add_option("--out", schedule_out, "artifact directory");

    std::string report_dir = "run";
    auto* report_cmd = app.add_subcommand("report", "summarize run artifacts");
    report_cmd->add_option("--dir", report_dir, "artifact directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (synth_cmd->parsed()) {
            spec.horizon_start_min =
                evgrid::io::parse_instant(start_hhmm, "--start", 0).minutes;
            return cmd_synth(spec, synth_out);
        }
        if (predict_cmd->parsed())
            return cmd_predict(sessions_path, forecasts_out, weekdays_only);
        if (schedule_cmd->parsed())
            return cmd_schedule(baseload_path, forecasts_path, fleet_path,
                                config_path, schedule_out);
        if (report_cmd->parsed()) return cmd_report(report_dir);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
