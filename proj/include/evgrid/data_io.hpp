#pragma once
// File surfaces: baseload CSV, session-history CSV, forecast CSV, fleet and
// run-config keyed text files, and the run artifacts (schedule, trace,
// report). All numbers are serialized shortest-round-trip so write/read is
// lossless; every rejection names the file and row.

#include <map>
#include <string>
#include <vector>

#include "evgrid/behavior.hpp"
#include "evgrid/coordinator.hpp"
#include "evgrid/time_model.hpp"

namespace evgrid::io {

// shortest representation that parses back to the same double
std::string format_double(double v);
double parse_double(const std::string& s, const std::string& path, long row);

// "HH:MM", "HH:MM:SS" or ISO-8601 local "YYYY-MM-DDTHH:MM[:SS]";
// returns minutes since midnight, and the civil date when present.
struct ParsedInstant {
    double minutes = 0.0;
    bool has_date = false;
    int year = 0, month = 0, day = 0;
};
ParsedInstant parse_instant(const std::string& s, const std::string& path, long row);

std::string minutes_to_hhmm(double minutes);

// --- baseload -------------------------------------------------------------

SlotVector read_baseload(const std::string& path, int expected_slots);
void write_baseload(const std::string& path, const SlotVector& baseload);

// --- session history ------------------------------------------------------

struct SessionReadResult {
    std::vector<SessionRecord> records;
    int dropped_midnight = 0;  // sessions spanning midnight, incompatible
    int dropped_weekend = 0;   // only with weekdays_only
};

SessionReadResult read_sessions(const std::string& path, bool weekdays_only = false);

struct RawSession {
    std::string user_id;
    std::string start_iso;
    std::string end_iso;
    double energy_kwh = 0.0;
};
void write_sessions(const std::string& path, const std::vector<RawSession>& rows);

// --- forecasts ------------------------------------------------------------

void write_forecasts(const std::string& path,
                     const std::vector<BehaviorForecast>& forecasts,
                     const std::vector<std::string>& warnings = {});
std::vector<BehaviorForecast> read_forecasts(const std::string& path);

// --- fleet + run config ---------------------------------------------------

struct FleetEntry {
    std::string evse_id;
    std::string user_id;
    double p_max_kw = 0.0;
    double d_max_kw = 0.0;
    int lag = 0;
};

std::vector<FleetEntry> read_fleet(const std::string& path);
void write_fleet(const std::string& path, const std::vector<FleetEntry>& fleet);

struct SimConfig {
    TimeGrid grid;
    RunConfig run;
};

SimConfig read_config(const std::string& path);
void write_config(const std::string& path, const SimConfig& cfg);

// --- run artifacts --------------------------------------------------------

struct RunArtifacts {
    std::string schedule_path;
    std::string trace_path;
    std::string report_path;
};

RunArtifacts write_artifacts(const ScheduleResult& result, const SlotVector& baseload,
                             const TimeGrid& grid, const RunConfig& config,
                             const std::vector<std::string>& warnings,
                             const std::string& out_dir);

struct ScheduleTable {
    std::vector<std::string> evse_ids;
    std::vector<SlotVector> profiles;  // column per EVSE
};
ScheduleTable read_schedule(const std::string& path);

std::vector<IterationTrace> read_trace(const std::string& path);

// flat key -> value view of report.txt
std::map<std::string, std::string> read_report(const std::string& path);

SlotVector parse_series(const std::string& csv_list, const std::string& path);

}  // namespace evgrid::io
