#pragma once
// Distributed scheduling loop: broadcast a load-proportional control signal,
// gather per-EVSE allocation updates, apply the u/v delayed-update schedule
// and stop once consecutive control signals agree to within epsilon.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evgrid/behavior.hpp"
#include "evgrid/time_model.hpp"

namespace evgrid {

enum class Norm { l2, linf };

struct RunConfig {
    double lambda = 2.0;
    double epsilon = 1e-3;
    int u = 1;          // control-signal update period
    int v = 1;          // profile publication period
    int max_iters = 200;
    Norm norm = Norm::l2;

    void validate() const;
};

struct EvseAgentState {
    std::string evse_id;
    std::string user_id;
    RateBounds bounds;
    double energy_kwh = 0.0;  // E', already clamped to window capacity
    SlotVector published_profile;
    SlotVector candidate_profile;
    int lag = 0;  // staleness of the control signal this agent sees
};

struct IterationTrace {
    int iteration = 0;
    std::optional<double> control_delta;  // present iff signal_updated
    double objective = 0.0;               // sum_t (B + sum_n p_n)^2
    double peak_kw = 0.0;
    bool signal_updated = false;
    bool profiles_updated = false;
};

struct Metrics {
    double peak_before_kw = 0.0;
    double peak_after_kw = 0.0;
    double variance_before = 0.0;
    double variance_after = 0.0;
    double peak_reduction = 0.0;  // (before - after) / before
};

struct ScheduleResult {
    std::vector<std::string> evse_ids;
    std::vector<SlotVector> profiles;  // one per EVSE, same order as evse_ids
    SlotVector total_load;
    bool converged = false;
    int iterations = 0;
    std::vector<IterationTrace> trace;
    Metrics metrics;
};

struct ClampedDemand {
    double energy_kwh = 0.0;
    bool clamped = false;   // demand was altered to fit the window
    bool excluded = false;  // window intersects no slot, EV cannot participate
};

ClampedDemand clamp_demand(const BehaviorForecast& forecast,
                           const RateBounds& bounds, double dt_hours);

// c(t) = (B(t) + sum_n p_n(t)) / (lambda * n_total)
SlotVector update_control_signal(const SlotVector& baseload,
                                 const std::vector<SlotVector>& published_profiles,
                                 double lambda, int n_total);

double flatness_objective(const SlotVector& baseload,
                          const std::vector<SlotVector>& profiles);

Metrics compute_metrics(const SlotVector& baseload,
                        const std::vector<SlotVector>& profiles);

double signal_norm(const SlotVector& a, const SlotVector& b, Norm norm);

// Invoked after each profile publication with the iteration index and the
// post-publication agent states.
using PublicationObserver =
    std::function<void(int iteration, const std::vector<EvseAgentState>&)>;

// Agents are processed in evse_id order regardless of input order; identical
// inputs give identical results.
ScheduleResult run(const SlotVector& baseload, std::vector<EvseAgentState> agents,
                   const TimeGrid& grid, const RunConfig& config,
                   const PublicationObserver& on_publish = {});

}  // namespace evgrid
