#include "evgrid/behavior.hpp"

#include <cmath>

#include "evgrid/errors.hpp"

namespace evgrid {

std::pair<double, double> predict_window(std::span<const SessionRecord> sessions) {
    if (sessions.empty()) throw NoData("no sessions to predict a window from");
    double start_sum = 0.0, end_sum = 0.0;
    for (const auto& s : sessions) {
        start_sum += s.start_min;
        end_sum += s.end_min;
    }
    const double m = static_cast<double>(sessions.size());
    return {start_sum / m, end_sum / m};
}

double fit_energy_model(std::span<const SessionRecord> sessions) {
    if (sessions.empty()) throw NoData("no sessions to fit an energy model from");
    double de = 0.0, dd = 0.0;
    for (const auto& s : sessions) {
        double d = (s.end_min - s.start_min) / 60.0;
        de += d * s.energy_kwh;
        dd += d * d;
    }
    if (dd == 0.0) throw SingularModel("all stay durations are zero");
    return de / dd;
}

double predict_energy(double theta, double t_start_pred_min, double t_end_pred_min) {
    if (!(t_end_pred_min > t_start_pred_min))
        throw InvalidInput("predicted window has non-positive duration");
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw InvalidInput("theta must be finite and >= 0");
    return theta * (t_end_pred_min - t_start_pred_min) / 60.0;
}

BehaviorForecast forecast_user(std::span<const SessionRecord> sessions) {
    auto [start, end] = predict_window(sessions);
    BehaviorForecast f;
    f.user_id = sessions.front().user_id;
    f.t_start_pred_min = start;
    f.t_end_pred_min = end;
    f.theta_kwh_per_h = fit_energy_model(sessions);
    f.sample_count = static_cast<int>(sessions.size());
    f.energy_pred_kwh = f.valid() ? predict_energy(f.theta_kwh_per_h, start, end) : 0.0;
    return f;
}

}  // namespace evgrid
