#include "evgrid/data_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "evgrid/errors.hpp"

namespace evgrid::io {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

void close_checked(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path);
}

long parse_long(const std::string& s, const std::string& path, long row) {
    const std::string t = trim(s);
    long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ParseError(path, row, "expected integer, got '" + s + "'");
    return v;
}

// day-of-week without timezone machinery (0 = Sunday)
int weekday_of(int y, int m, int d) {
    y -= m < 3;
    static const int t[] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
    return (y + y / 4 - y / 100 + y / 400 + t[m - 1] + d) % 7;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

double parse_double(const std::string& s, const std::string& path, long row) {
    const std::string t = trim(s);
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ParseError(path, row, "expected number, got '" + s + "'");
    if (!std::isfinite(v))
        throw ParseError(path, row, "non-finite value '" + s + "'");
    return v;
}

ParsedInstant parse_instant(const std::string& s, const std::string& path, long row) {
    ParsedInstant r;
    std::string t = trim(s);
    std::string clock = t;
    std::size_t tee = t.find('T');
    if (tee != std::string::npos) {
        std::string date = t.substr(0, tee);
        clock = t.substr(tee + 1);
        auto parts = split(date, '-');
        if (parts.size() != 3)
            throw ParseError(path, row, "malformed date '" + date + "'");
        r.has_date = true;
        r.year = static_cast<int>(parse_long(parts[0], path, row));
        r.month = static_cast<int>(parse_long(parts[1], path, row));
        r.day = static_cast<int>(parse_long(parts[2], path, row));
        if (r.month < 1 || r.month > 12 || r.day < 1 || r.day > 31)
            throw ParseError(path, row, "malformed date '" + date + "'");
    }
    auto hm = split(clock, ':');
    if (hm.size() != 2 && hm.size() != 3)
        throw ParseError(path, row, "malformed time '" + clock + "'");
    long h = parse_long(hm[0], path, row);
    long m = parse_long(hm[1], path, row);
    double sec = hm.size() == 3 ? parse_double(hm[2], path, row) : 0.0;
    if (h < 0 || h > 23 || m < 0 || m > 59 || sec < 0.0 || sec >= 60.0)
        throw ParseError(path, row, "time of day out of range '" + clock + "'");
    r.minutes = 60.0 * static_cast<double>(h) + static_cast<double>(m) + sec / 60.0;
    return r;
}

std::string minutes_to_hhmm(double minutes) {
    int total = static_cast<int>(minutes + 0.5);
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", total / 60, total % 60);
    return buf;
}

SlotVector read_baseload(const std::string& path, int expected_slots) {
    auto in = open_in(path);
    std::string line;
    long row = 0;
    if (!std::getline(in, line))
        throw ParseError(path, 1, "empty baseload file");
    ++row;
    if (trim(line) != "slot,baseload_kw")
        throw ParseError(path, row, "expected header 'slot,baseload_kw'");
    SlotVector values;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 2)
            throw ParseError(path, row, "expected 2 fields");
        long slot = parse_long(fields[0], path, row);
        if (slot != static_cast<long>(values.size()))
            throw ParseError(path, row,
                             "slot index out of order: expected " +
                                 std::to_string(values.size()) + ", got " +
                                 std::to_string(slot));
        values.push_back(parse_double(fields[1], path, row));
    }
    if (static_cast<int>(values.size()) != expected_slots)
        throw ParseError(path, row,
                         "expected " + std::to_string(expected_slots) +
                             " baseload rows, got " + std::to_string(values.size()));
    return values;
}

void write_baseload(const std::string& path, const SlotVector& baseload) {
    auto out = open_out(path);
    out << "slot,baseload_kw\n";
    for (std::size_t k = 0; k < baseload.size(); ++k)
        out << k << ',' << format_double(baseload[k]) << '\n';
    close_checked(out, path);
}

SessionReadResult read_sessions(const std::string& path, bool weekdays_only) {
    auto in = open_in(path);
    SessionReadResult result;
    std::string line;
    long row = 0;
    if (!std::getline(in, line))
        throw ParseError(path, 1, "empty sessions file");
    ++row;
    if (trim(line) != "user_id,start,end,energy_kwh")
        throw ParseError(path, row, "expected header 'user_id,start,end,energy_kwh'");
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 4)
            throw ParseError(path, row, "expected 4 fields");
        ParsedInstant start = parse_instant(fields[1], path, row);
        ParsedInstant end = parse_instant(fields[2], path, row);
        double energy = parse_double(fields[3], path, row);
        if (energy < 0.0)
            throw ParseError(path, row, "negative energy " + fields[3]);
        if (start.has_date && end.has_date &&
            (start.year != end.year || start.month != end.month ||
             start.day != end.day)) {
            ++result.dropped_midnight;
            continue;
        }
        if (end.minutes <= start.minutes)
            throw ParseError(path, row, "session end is not after start");
        if (weekdays_only && start.has_date) {
            int wd = weekday_of(start.year, start.month, start.day);
            if (wd == 0 || wd == 6) {
                ++result.dropped_weekend;
                continue;
            }
        }
        result.records.push_back(SessionRecord{trim(fields[0]), start.minutes,
                                               end.minutes, energy});
    }
    return result;
}

void write_sessions(const std::string& path, const std::vector<RawSession>& rows) {
    auto out = open_out(path);
    out << "user_id,start,end,energy_kwh\n";
    for (const auto& r : rows)
        out << r.user_id << ',' << r.start_iso << ',' << r.end_iso << ','
            << format_double(r.energy_kwh) << '\n';
    close_checked(out, path);
}

void write_forecasts(const std::string& path,
                     const std::vector<BehaviorForecast>& forecasts,
                     const std::vector<std::string>& warnings) {
    auto out = open_out(path);
    out << "user_id,t_start_pred_min,t_end_pred_min,theta_kwh_per_h,"
           "energy_pred_kwh,sample_count\n";
    for (const auto& f : forecasts)
        out << f.user_id << ',' << format_double(f.t_start_pred_min) << ','
            << format_double(f.t_end_pred_min) << ','
            << format_double(f.theta_kwh_per_h) << ','
            << format_double(f.energy_pred_kwh) << ',' << f.sample_count << '\n';
    for (const auto& w : warnings) out << "# warning: " << w << '\n';
    close_checked(out, path);
}

std::vector<BehaviorForecast> read_forecasts(const std::string& path) {
    auto in = open_in(path);
    std::vector<BehaviorForecast> out;
    std::string line;
    long row = 0;
    if (!std::getline(in, line))
        throw ParseError(path, 1, "empty forecasts file");
    ++row;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(line, ',');
        if (fields.size() != 6)
            throw ParseError(path, row, "expected 6 fields");
        BehaviorForecast f;
        f.user_id = trim(fields[0]);
        f.t_start_pred_min = parse_double(fields[1], path, row);
        f.t_end_pred_min = parse_double(fields[2], path, row);
        f.theta_kwh_per_h = parse_double(fields[3], path, row);
        f.energy_pred_kwh = parse_double(fields[4], path, row);
        f.sample_count = static_cast<int>(parse_long(fields[5], path, row));
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<FleetEntry> read_fleet(const std::string& path) {
    auto in = open_in(path);
    std::vector<FleetEntry> fleet;
    std::string line;
    long row = 0;
    bool in_entry = false;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[[evse]]") {
            fleet.emplace_back();
            in_entry = true;
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, row, "expected 'key = value' or '[[evse]]'");
        if (!in_entry)
            throw ParseError(path, row, "key outside an [[evse]] entry");
        std::string key = trim(t.substr(0, eq));
        std::string value = unquote(trim(t.substr(eq + 1)));
        FleetEntry& e = fleet.back();
        if (key == "evse_id") e.evse_id = value;
        else if (key == "user_id") e.user_id = value;
        else if (key == "p_max_kw") e.p_max_kw = parse_double(value, path, row);
        else if (key == "d_max_kw") e.d_max_kw = parse_double(value, path, row);
        else if (key == "lag") e.lag = static_cast<int>(parse_long(value, path, row));
        else throw ParseError(path, row, "unknown fleet key '" + key + "'");
    }
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        const auto& e = fleet[i];
        if (e.evse_id.empty())
            throw ParseError(path, 0, "fleet entry " + std::to_string(i) +
                                          " missing evse_id");
        if (!(e.p_max_kw >= 0.0))
            throw ParseError(path, 0, e.evse_id + ": p_max_kw must be >= 0");
        if (!(e.d_max_kw <= 0.0))
            throw ParseError(path, 0, e.evse_id + ": d_max_kw must be <= 0");
        if (e.lag < 0)
            throw ParseError(path, 0, e.evse_id + ": lag must be >= 0");
        for (std::size_t j = i + 1; j < fleet.size(); ++j)
            if (fleet[j].evse_id == e.evse_id)
                throw ParseError(path, 0, "duplicate evse_id '" + e.evse_id + "'");
    }
    return fleet;
}

void write_fleet(const std::string& path, const std::vector<FleetEntry>& fleet) {
    auto out = open_out(path);
    for (const auto& e : fleet) {
        out << "[[evse]]\n";
        out << "evse_id = \"" << e.evse_id << "\"\n";
        out << "user_id = \"" << e.user_id << "\"\n";
        out << "p_max_kw = " << format_double(e.p_max_kw) << '\n';
        out << "d_max_kw = " << format_double(e.d_max_kw) << '\n';
        out << "lag = " << e.lag << "\n\n";
    }
    close_checked(out, path);
}

SimConfig read_config(const std::string& path) {
    auto in = open_in(path);
    SimConfig cfg;
    double start_min = 0.0;
    int slot_count = 0, slot_minutes = 0;
    std::string line;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, row, "expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = unquote(trim(t.substr(eq + 1)));
        if (key == "lambda") cfg.run.lambda = parse_double(value, path, row);
        else if (key == "epsilon") cfg.run.epsilon = parse_double(value, path, row);
        else if (key == "u") cfg.run.u = static_cast<int>(parse_long(value, path, row));
        else if (key == "v") cfg.run.v = static_cast<int>(parse_long(value, path, row));
        else if (key == "max_iters")
            cfg.run.max_iters = static_cast<int>(parse_long(value, path, row));
        else if (key == "norm") {
            if (value == "l2") cfg.run.norm = Norm::l2;
            else if (value == "linf") cfg.run.norm = Norm::linf;
            else throw ParseError(path, row, "norm must be 'l2' or 'linf'");
        } else if (key == "slot_count")
            slot_count = static_cast<int>(parse_long(value, path, row));
        else if (key == "slot_minutes")
            slot_minutes = static_cast<int>(parse_long(value, path, row));
        else if (key == "horizon_start")
            start_min = parse_instant(value, path, row).minutes;
        else throw ParseError(path, row, "unknown config key '" + key + "'");
    }
    if (slot_count < 1 || slot_minutes < 1)
        throw ParseError(path, 0, "config must set slot_count and slot_minutes");
    cfg.grid = TimeGrid(start_min, slot_count, slot_minutes);
    cfg.run.validate();
    return cfg;
}

void write_config(const std::string& path, const SimConfig& cfg) {
    auto out = open_out(path);
    out << "slot_count = " << cfg.grid.slot_count << '\n';
    out << "slot_minutes = " << cfg.grid.slot_minutes << '\n';
    out << "horizon_start = \"" << minutes_to_hhmm(cfg.grid.horizon_start_min)
        << "\"\n";
    out << "lambda = " << format_double(cfg.run.lambda) << '\n';
    out << "epsilon = " << format_double(cfg.run.epsilon) << '\n';
    out << "u = " << cfg.run.u << '\n';
    out << "v = " << cfg.run.v << '\n';
    out << "max_iters = " << cfg.run.max_iters << '\n';
    out << "norm = \"" << (cfg.run.norm == Norm::l2 ? "l2" : "linf") << "\"\n";
    close_checked(out, path);
}

RunArtifacts write_artifacts(const ScheduleResult& result, const SlotVector& baseload,
                             const TimeGrid& grid, const RunConfig& config,
                             const std::vector<std::string>& warnings,
                             const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    RunArtifacts art;
    art.schedule_path = (fs::path(out_dir) / "schedule.csv").string();
    art.trace_path = (fs::path(out_dir) / "trace.csv").string();
    art.report_path = (fs::path(out_dir) / "report.txt").string();

    {
        auto out = open_out(art.schedule_path);
        out << "slot";
        for (const auto& id : result.evse_ids) out << ',' << id;
        out << '\n';
        for (int k = 0; k < grid.slot_count; ++k) {
            out << k;
            for (const auto& p : result.profiles)
                out << ',' << format_double(p[static_cast<std::size_t>(k)]);
            out << '\n';
        }
        close_checked(out, art.schedule_path);
    }
    {
        auto out = open_out(art.trace_path);
        out << "iteration,signal_updated,profiles_updated,control_delta,"
               "objective,peak_kw\n";
        for (const auto& tr : result.trace) {
            out << tr.iteration << ',' << (tr.signal_updated ? 1 : 0) << ','
                << (tr.profiles_updated ? 1 : 0) << ',';
            if (tr.control_delta) out << format_double(*tr.control_delta);
            out << ',' << format_double(tr.objective) << ','
                << format_double(tr.peak_kw) << '\n';
        }
        close_checked(out, art.trace_path);
    }
    {
        auto out = open_out(art.report_path);
        out << "converged = " << (result.converged ? "true" : "false") << '\n';
        out << "iterations = " << result.iterations << '\n';
        out << "n_evse = " << result.evse_ids.size() << '\n';
        out << "peak_before_kw = " << format_double(result.metrics.peak_before_kw) << '\n';
        out << "peak_after_kw = " << format_double(result.metrics.peak_after_kw) << '\n';
        out << "peak_reduction = " << format_double(result.metrics.peak_reduction) << '\n';
        out << "variance_before = " << format_double(result.metrics.variance_before) << '\n';
        out << "variance_after = " << format_double(result.metrics.variance_after) << '\n';
        out << "lambda = " << format_double(config.lambda) << '\n';
        out << "epsilon = " << format_double(config.epsilon) << '\n';
        out << "u = " << config.u << '\n';
        out << "v = " << config.v << '\n';
        out << "max_iters = " << config.max_iters << '\n';
        out << "norm = " << (config.norm == Norm::l2 ? "l2" : "linf") << '\n';
        out << "slot_count = " << grid.slot_count << '\n';
        out << "slot_minutes = " << grid.slot_minutes << '\n';
        out << "horizon_start = " << minutes_to_hhmm(grid.horizon_start_min) << '\n';
        for (std::size_t i = 0; i < warnings.size(); ++i)
            out << "warning." << i << " = " << warnings[i] << '\n';
        auto series = [&](const char* key, const SlotVector& v) {
            out << key << " = ";
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (k) out << ',';
                out << format_double(v[k]);
            }
            out << '\n';
        };
        series("baseload_kw", baseload);
        series("total_kw", result.total_load);
        close_checked(out, art.report_path);
    }
    return art;
}

ScheduleTable read_schedule(const std::string& path) {
    auto in = open_in(path);
    ScheduleTable table;
    std::string line;
    long row = 0;
    if (!std::getline(in, line))
        throw ParseError(path, 1, "empty schedule file");
    ++row;
    auto header = split(trim(line), ',');
    if (header.empty() || header[0] != "slot")
        throw ParseError(path, row, "expected header starting with 'slot'");
    table.evse_ids.assign(header.begin() + 1, header.end());
    table.profiles.assign(table.evse_ids.size(), {});
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != header.size())
            throw ParseError(path, row, "field count mismatch");
        for (std::size_t c = 1; c < fields.size(); ++c)
            table.profiles[c - 1].push_back(parse_double(fields[c], path, row));
    }
    return table;
}

std::vector<IterationTrace> read_trace(const std::string& path) {
    auto in = open_in(path);
    std::vector<IterationTrace> out;
    std::string line;
    long row = 0;
    if (!std::getline(in, line))
        throw ParseError(path, 1, "empty trace file");
    ++row;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 6)
            throw ParseError(path, row, "expected 6 fields");
        IterationTrace tr;
        tr.iteration = static_cast<int>(parse_long(fields[0], path, row));
        tr.signal_updated = parse_long(fields[1], path, row) != 0;
        tr.profiles_updated = parse_long(fields[2], path, row) != 0;
        if (!trim(fields[3]).empty())
            tr.control_delta = parse_double(fields[3], path, row);
        tr.objective = parse_double(fields[4], path, row);
        tr.peak_kw = parse_double(fields[5], path, row);
        out.push_back(tr);
    }
    return out;
}

std::map<std::string, std::string> read_report(const std::string& path) {
    auto in = open_in(path);
    std::map<std::string, std::string> out;
    std::string line;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, row, "expected 'key = value'");
        out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

SlotVector parse_series(const std::string& csv_list, const std::string& path) {
    SlotVector out;
    for (const auto& f : split(csv_list, ','))
        out.push_back(parse_double(f, path, 0));
    return out;
}

}  // namespace evgrid::io
