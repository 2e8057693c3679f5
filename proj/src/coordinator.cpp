#include "evgrid/coordinator.hpp"

#include <algorithm>
#include <cmath>

#include "evgrid/errors.hpp"
#include "evgrid/kernels.hpp"
#include "evgrid/local_solver.hpp"

namespace evgrid {

namespace {

SlotVector total_load_of(const SlotVector& baseload,
                         const std::vector<SlotVector>& profiles) {
    const auto& k = kernels::active();
    SlotVector total = baseload;
    for (const auto& p : profiles) {
        if (p.size() != total.size())
            throw InvalidInput("profile length does not match baseload");
        k.accumulate(total.data(), p.data(), p.size());
    }
    return total;
}

double variance(const SlotVector& x) {
    if (x.empty()) return 0.0;
    const auto& k = kernels::active();
    const double n = static_cast<double>(x.size());
    double mean = k.sum(x.data(), x.size()) / n;
    double sq = k.sum_sq(x.data(), x.size()) / n;
    return sq - mean * mean;
}

}  // namespace

void RunConfig::validate() const {
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be > 0");
    if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be > 0");
    if (u < 1 || v < 1) throw InvalidInput("u and v must be >= 1");
    if (max_iters < 1) throw InvalidInput("max_iters must be >= 1");
}

ClampedDemand clamp_demand(const BehaviorForecast& forecast,
                           const RateBounds& bounds, double dt_hours) {
    ClampedDemand r;
    if (bounds.available_count() == 0) {
        r.excluded = true;
        return r;
    }
    double cap = bounds.max_energy_kwh(dt_hours);
    double floor = std::max(0.0, bounds.min_energy_kwh(dt_hours));
    r.energy_kwh = std::clamp(forecast.energy_pred_kwh, floor, cap);
    r.clamped = r.energy_kwh != forecast.energy_pred_kwh;
    return r;
}

SlotVector update_control_signal(const SlotVector& baseload,
                                 const std::vector<SlotVector>& published_profiles,
                                 double lambda, int n_total) {
    if (n_total < 1) throw InvalidInput("control signal requires N >= 1");
    SlotVector total = total_load_of(baseload, published_profiles);
    kernels::active().scale(total.data(), total.data(),
                            1.0 / (lambda * static_cast<double>(n_total)),
                            total.size());
    return total;
}

double flatness_objective(const SlotVector& baseload,
                          const std::vector<SlotVector>& profiles) {
    SlotVector total = total_load_of(baseload, profiles);
    return kernels::active().sum_sq(total.data(), total.size());
}

Metrics compute_metrics(const SlotVector& baseload,
                        const std::vector<SlotVector>& profiles) {
    const auto& k = kernels::active();
    SlotVector total = total_load_of(baseload, profiles);
    Metrics m;
    m.peak_before_kw = baseload.empty() ? 0.0 : k.max_val(baseload.data(), baseload.size());
    m.peak_after_kw = total.empty() ? 0.0 : k.max_val(total.data(), total.size());
    m.variance_before = variance(baseload);
    m.variance_after = variance(total);
    m.peak_reduction = m.peak_before_kw != 0.0
                           ? (m.peak_before_kw - m.peak_after_kw) / m.peak_before_kw
                           : 0.0;
    return m;
}

double signal_norm(const SlotVector& a, const SlotVector& b, Norm norm) {
    if (a.size() != b.size()) throw InvalidInput("signal_norm: length mismatch");
    const auto& k = kernels::active();
    if (norm == Norm::linf) return k.max_abs_diff(a.data(), b.data(), a.size());
    return std::sqrt(k.sq_diff(a.data(), b.data(), a.size()));
}

ScheduleResult run(const SlotVector& baseload, std::vector<EvseAgentState> agents,
                   const TimeGrid& grid, const RunConfig& config,
                   const PublicationObserver& on_publish) {
    config.validate();
    if (agents.empty()) throw InvalidInput("run requires at least one agent");
    if (static_cast<int>(baseload.size()) != grid.slot_count)
        throw InvalidInput("baseload length does not match grid");

    const std::size_t t = baseload.size();
    const double dt = grid.dt_hours();
    std::sort(agents.begin(), agents.end(),
              [](const EvseAgentState& a, const EvseAgentState& b) {
                  return a.evse_id < b.evse_id;
              });
    for (auto& a : agents) {
        if (a.bounds.lower.size() != t)
            throw InvalidInput("agent " + a.evse_id + " bounds do not match grid");
        a.published_profile.assign(t, 0.0);
        a.candidate_profile.assign(t, 0.0);
    }

    auto published = [&] {
        std::vector<SlotVector> out;
        out.reserve(agents.size());
        for (const auto& a : agents) out.push_back(a.published_profile);
        return out;
    };

    const int n_total = static_cast<int>(agents.size());
    std::vector<SlotVector> signals;  // generation history, for stale reads
    signals.push_back(update_control_signal(baseload, published(), config.lambda, n_total));

    ScheduleResult result;
    int publications = 0;

    for (int i = 0; i < config.max_iters; ++i) {
        // (a) local solves against each agent's (possibly stale) signal view
        const int latest = static_cast<int>(signals.size()) - 1;
        for (auto& a : agents) {
            int gen = std::max(0, latest - a.lag);
            LocalProblem p{signals[static_cast<std::size_t>(gen)],
                           a.published_profile, a.bounds, a.energy_kwh, dt};
            a.candidate_profile = local_solve(p).profile;
        }

        IterationTrace tr;
        tr.iteration = i;

        // (b) profile publication
        if (i % config.v == 0) {
            for (auto& a : agents) a.published_profile = a.candidate_profile;
            ++publications;
            tr.profiles_updated = true;
            if (on_publish) on_publish(i, agents);
        }

        // (c) control-signal update
        if (i % config.u == 0) {
            SlotVector next =
                update_control_signal(baseload, published(), config.lambda, n_total);
            tr.control_delta = signal_norm(next, signals.back(), config.norm);
            tr.signal_updated = true;
            signals.push_back(std::move(next));
        }

        auto profs = published();
        SlotVector total = total_load_of(baseload, profs);
        tr.objective = kernels::active().sum_sq(total.data(), total.size());
        tr.peak_kw = kernels::active().max_val(total.data(), total.size());
        result.trace.push_back(tr);
        result.iterations = i + 1;

        if (tr.signal_updated && publications > 0 &&
            *tr.control_delta <= config.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.evse_ids.reserve(agents.size());
    result.profiles.reserve(agents.size());
    for (auto& a : agents) {
        result.evse_ids.push_back(a.evse_id);
        result.profiles.push_back(a.published_profile);
    }
    result.total_load = total_load_of(baseload, result.profiles);
    result.metrics = compute_metrics(baseload, result.profiles);
    return result;
}

}  // namespace evgrid
