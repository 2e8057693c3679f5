#pragma once
// Charging-behavior prediction: plug-in window by mean estimation over a
// user's session history, energy demand by through-origin regression of
// session energy on stay duration.

#include <span>
#include <string>
#include <vector>

namespace evgrid {

struct SessionRecord {
    std::string user_id;
    double start_min = 0.0;   // minutes since midnight
    double end_min = 0.0;     // minutes since midnight, > start_min
    double energy_kwh = 0.0;  // >= 0
};

struct BehaviorForecast {
    std::string user_id;
    double t_start_pred_min = 0.0;
    double t_end_pred_min = 0.0;
    double theta_kwh_per_h = 0.0;  // regression slope, energy per stay-hour
    double energy_pred_kwh = 0.0;
    int sample_count = 0;

    bool valid() const { return t_end_pred_min > t_start_pred_min; }
};

// Arithmetic means of start and end times. Throws NoData on empty input.
std::pair<double, double> predict_window(std::span<const SessionRecord> sessions);

// Through-origin least squares: theta = sum(d*E) / sum(d^2) with durations in
// hours. Throws NoData on empty input, SingularModel if all durations are 0.
double fit_energy_model(std::span<const SessionRecord> sessions);

// theta * window duration in hours. Throws InvalidInput on a non-positive
// window or negative theta.
double predict_energy(double theta, double t_start_pred_min, double t_end_pred_min);

// Compose the three steps. A forecast whose predicted window is empty is
// returned with valid() == false rather than dropped, so callers can report it.
BehaviorForecast forecast_user(std::span<const SessionRecord> sessions);

}  // namespace evgrid
