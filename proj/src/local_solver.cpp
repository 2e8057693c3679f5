#include "evgrid/local_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evgrid/errors.hpp"
#include "evgrid/kernels.hpp"

namespace evgrid {

namespace {

bool all_finite(const SlotVector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

double local_objective(const SlotVector& profile, const SlotVector& control,
                       const SlotVector& prev_profile) {
    const std::size_t n = profile.size();
    if (control.size() != n || prev_profile.size() != n)
        throw InvalidInput("local_objective: length mismatch");
    const auto& k = kernels::active();
    return k.dot(control.data(), profile.data(), n) +
           0.5 * k.sq_diff(profile.data(), prev_profile.data(), n);
}

LocalSolution local_solve(const LocalProblem& problem) {
    const std::size_t n = problem.control.size();
    if (problem.prev_profile.size() != n || problem.bounds.lower.size() != n ||
        problem.bounds.upper.size() != n)
        throw InvalidInput("local_solve: length mismatch");
    if (!all_finite(problem.control) || !all_finite(problem.prev_profile) ||
        !std::isfinite(problem.energy_kwh) || !(problem.dt_hours > 0.0))
        throw InvalidInput("local_solve: non-finite input");

    const double dt = problem.dt_hours;
    const double e_min = problem.bounds.min_energy_kwh(dt);
    const double e_max = problem.bounds.max_energy_kwh(dt);
    const double tol = energy_tolerance(problem.energy_kwh);
    if (problem.energy_kwh < e_min - tol || problem.energy_kwh > e_max + tol)
        throw InfeasibleDemand("demand " + std::to_string(problem.energy_kwh) +
                               " kWh outside window capacity [" +
                               std::to_string(e_min) + ", " +
                               std::to_string(e_max) + "] kWh");
    const double target = std::clamp(problem.energy_kwh, e_min, e_max);

    const auto& k = kernels::active();
    const double* prev = problem.prev_profile.data();
    const double* ctrl = problem.control.data();
    const double* lo = problem.bounds.lower.data();
    const double* hi = problem.bounds.upper.data();

    LocalSolution sol;
    sol.profile.assign(n, 0.0);

    // Bracket the dual so the two ends pin every available slot to its lower
    // and upper bound respectively.
    double mu_lo = 0.0, mu_hi = 0.0;
    bool any = false;
    for (std::size_t t = 0; t < n; ++t) {
        if (!problem.bounds.available[t]) continue;
        double at_lo = (lo[t] - prev[t] + ctrl[t]) / dt;
        double at_hi = (hi[t] - prev[t] + ctrl[t]) / dt;
        if (!any) {
            mu_lo = at_lo;
            mu_hi = at_hi;
            any = true;
        } else {
            mu_lo = std::min(mu_lo, at_lo);
            mu_hi = std::max(mu_hi, at_hi);
        }
    }
    if (!any) {
        // no available slots; feasibility above forced target ~ 0
        sol.multiplier = 0.0;
        sol.objective = local_objective(sol.profile, problem.control,
                                        problem.prev_profile);
        return sol;
    }

    // demand at window capacity pins every available slot to its bound
    if (target >= e_max || target <= e_min) {
        const SlotVector& pinned = target >= e_max ? problem.bounds.upper
                                                   : problem.bounds.lower;
        sol.profile = pinned;
        sol.multiplier = target >= e_max ? mu_hi : mu_lo;
        sol.objective =
            local_objective(sol.profile, problem.control, problem.prev_profile);
        return sol;
    }

    double mu = 0.5 * (mu_lo + mu_hi);
    for (int iter = 0; iter < 200; ++iter) {
        mu = 0.5 * (mu_lo + mu_hi);
        k.clip_shift(sol.profile.data(), prev, ctrl, lo, hi, mu * dt, n);
        double g = k.sum(sol.profile.data(), n) * dt - target;
        // run the bracket down to width 1e-12 rather than stopping at the
        // energy tolerance: the residual early-exit leaves O(tol) noise in mu
        // that shows up as objective jitter across coordinator iterations
        if ((mu_hi - mu_lo) <= 1e-12) break;
        if (g < 0.0)
            mu_lo = mu;
        else
            mu_hi = mu;
    }

    sol.multiplier = mu;
    sol.objective =
        local_objective(sol.profile, problem.control, problem.prev_profile);
    return sol;
}

}  // namespace evgrid
