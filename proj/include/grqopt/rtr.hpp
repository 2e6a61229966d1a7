#pragma once

#include <functional>
#include <vector>

#include "grqopt/problem.hpp"

namespace grqopt {

struct RtrConfig {
    double delta_tr_init = 1.0;
    double delta_tr_min = 1e-10;
    double delta_tr_max = 1.0;
    double rho_threshold = 0.1;  // acceptance gate, must lie in (0, 1/4)
    double grad_tol = 1e-5;
    int max_iters = 1000;
};

enum class Termination { GradTol, MaxIters, Degenerate };

const char* termination_name(Termination t);

struct SolveResult {
    Vector x;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    double elapsed = 0.0;  // seconds of solver wall time
    Termination termination = Termination::MaxIters;
};

// Optional per-iteration record, filled when a trace pointer is passed in.
struct RtrTrace {
    std::vector<double> accepted_values;
    std::vector<double> radii;  // radius after each iteration's update
};

// Steihaug truncated CG for the trust-region subproblem
//   minimize  g.h + h.H(h)/2  subject to  ||h|| <= delta.
// Callers maximizing an objective pass g = -grad and H = -Hess. The loop runs
// at most dim(g) iterations and always returns a feasible step.
Vector tcg(const Vector& grad, const std::function<Vector(const Vector&)>& hess_op, double delta);

// Trust-region ascent of obj over the sphere. Accepted values never decrease;
// stops when the Riemannian gradient norm reaches cfg.grad_tol.
SolveResult rtr_solve(const SphereObjective& obj, const SpherePoint& x0, const RtrConfig& cfg = {},
                      RtrTrace* trace = nullptr);

}  // namespace grqopt
