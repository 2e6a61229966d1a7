#pragma once

#include <functional>
#include <vector>

#include "grqopt/problem.hpp"
#include "grqopt/rtr.hpp"

namespace grqopt {

// Necessary condition screen for a global maximizer candidate: true iff
// (phi_d phi_w, x) is an eigenpair for the largest eigenvalue of E(x), i.e.
// |phi_d phi_w - lambda_max(E(x))| <= tol and ||E(x)x - phi_d phi_w x|| <= tol.
// The condition is necessary but not sufficient; certain local maximizers
// also pass it, which is the blind spot the escape strategies inherit.
bool is_top_eigenpair(const ProblemInstance& inst, const SpherePoint& x, double tol = 1e-6);

enum class SpsVariant { Consolidated, Original };

// One escape attempt from a stationary candidate x_hat: combines x_hat with
// the top eigenvector y of E(x_hat). Returns x_hat unchanged when x_hat and
// y are parallel beyond delta0 (the candidate already passes the eigenpair
// condition), y itself when the sign-product branch fires, otherwise the
// alpha/beta combination, normalized. The Original variant's alpha solves a
// quadratic instead of completing the unit circle; it needs W positive
// definite, which every ProblemInstance guarantees.
SpherePoint csps_next(const ProblemInstance& inst, const SpherePoint& x_hat, SpsVariant variant,
                      double delta0 = 1e-5);

// Alternates trust-region polish and csps_next jumps until the jump returns
// its input. Objective values are non-decreasing across rounds; a round that
// fails to improve, or more than 50 rounds, raises OuterCapExceeded.
SolveResult sps_solve(const ProblemInstance& inst, const SpherePoint& x0, SpsVariant variant,
                      const RtrConfig& cfg = {});

struct TrscfConfig {
    double gamma = 5.0;  // shift damping, must be positive
    int max_iters = 1000;
    double residual_tol = 1e-5;
};

struct TrscfTrace {
    std::vector<double> values;    // objective after each accepted iterate
    std::vector<double> overlaps;  // x.y at each eigenvector extraction
};

// Self-consistent-field iteration on the shifted matrix E(x) + rho x x^T.
// The shift rho = gamma (lambda1 - lambda2) activates only when the step
// would decrease f. Converged (GradTol) means the nonlinear eigenproblem
// residual ||E(x)x - phi_d phi_w x|| dropped to residual_tol; MaxIters is
// the oscillation outcome.
SolveResult trscf_solve(const ProblemInstance& inst, const SpherePoint& x0,
                        const TrscfConfig& cfg = {}, TrscfTrace* trace = nullptr);

struct SdpConfig {
    int mesh_size = 10;  // grid resolution over the pencil range, at least 3
    int qfs_max_iters = 100;
    double eps_mu = 0.01;       // bracket width stop
    double eps_lambda = 1e-16;  // bracket flatness stop
    double dual_search_tol = 1e-10;
};

// Value of the relaxation at shift mu: maximize Tr((mu I + D) X) over unit-
// trace PSD X with Tr((B - mu W) X) >= 0. Solved through the dual
//   min_{y >= 0} lambda_max((mu I + D) + y (B - mu W)),
// a univariate convex minimization handled by bracketing plus golden-section
// search and then refined on the sign of the dual's subgradient, which the
// recovery step needs far more accurately than the value does. Returns the
// optimum and a unit vector recovered from the top eigenspace of the optimal
// matrix; a degenerate top eigenspace is mixed to land on the constraint
// boundary. Recovery that ends infeasible beyond 1e-6 raises RecoveryFailed.
std::pair<double, Vector> sdp_lambda(const ProblemInstance& inst, double mu,
                                     double dual_search_tol = 1e-10);

// Parabola-vertex search for a maximum of lambda_fn inside a three-point
// bracket mu1 < mu2 < mu3 with lambda(mu2) >= max of the ends. Stops when the
// bracket width falls under eps_mu, the bracket goes flat to eps_lambda, or
// the fit degenerates; always returns the best shift seen.
double qfs(const std::function<double(double)>& lambda_fn, double mu1, double mu2, double mu3,
           int max_iters = 100, double eps_mu = 0.01, double eps_lambda = 1e-16);

struct SdpReport {
    Vector grid_mu;
    Vector grid_lambda;
    std::vector<int> pattern_indices;  // 1-based grid positions of interior local maxima
    double mu_star = 0.0;
    bool used_endpoint_fallback = false;
};

// Full pipeline: evaluate the relaxation on a mesh_size grid spanning the
// pencil eigenvalue range of (B, W), refine every interior local maximum of
// the grid with qfs, recover a unit vector at each refined shift, and return
// the recovery with the best true objective value. Without any interior
// pattern the better grid endpoint is used.
SolveResult sdp_solve(const ProblemInstance& inst, const SdpConfig& cfg = {},
                      SdpReport* report = nullptr);

}  // namespace grqopt
