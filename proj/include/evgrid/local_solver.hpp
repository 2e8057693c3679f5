#pragma once
// Per-EVSE allocation step: minimize sum_t c(t)p(t) + 1/2 ||p - p_prev||^2
// over the box bounds intersected with the energy-equality hyperplane
// sum_t p(t)*dt = E'. The minimizer is a clipped shift of the unconstrained
// proximal point; the shift scale mu is the scalar dual of the equality
// constraint, found by bisection on the monotone energy residual.

#include "evgrid/time_model.hpp"

namespace evgrid {

struct LocalProblem {
    SlotVector control;       // c(t)
    SlotVector prev_profile;  // p_n^i(t), kW, must respect bounds
    RateBounds bounds;
    double energy_kwh = 0.0;  // E', clamped demand
    double dt_hours = 0.0;
};

struct LocalSolution {
    SlotVector profile;      // p_n^{i+1}(t)
    double multiplier = 0.0; // mu, dual of the energy equality
    double objective = 0.0;
};

inline double energy_tolerance(double energy_kwh) {
    double a = energy_kwh < 0 ? -energy_kwh : energy_kwh;
    return 1e-9 * (a > 1.0 ? a : 1.0);
}

double local_objective(const SlotVector& profile, const SlotVector& control,
                       const SlotVector& prev_profile);

// Throws InfeasibleDemand when E' lies outside the window's energy capacity,
// InvalidInput on non-finite or mis-sized inputs.
LocalSolution local_solve(const LocalProblem& problem);

}  // namespace evgrid
