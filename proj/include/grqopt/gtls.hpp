#pragma once

#include "grqopt/homotopy.hpp"
#include "grqopt/problem.hpp"

namespace grqopt {

// Two-source errors-in-variables estimation data: data matrices omega1/2 and
// SPD noise matrices sigma1/2, all q x q. The log-likelihood of the parameter
// ray is proportional to v'O1v/v'S1v + v'O2v/v'S2v.
struct GtlsSources {
    Matrix omega1, omega2;
    Matrix sigma1, sigma2;
};

// Change of variables x = R^{-1} v with R'^{-1} R^{-1} = sigma2 turning the
// likelihood into the sphere objective of ProblemInstance.
struct GtlsReduction {
    ProblemInstance instance;
    Matrix r;
};

// Builds the reduction: R = L^{-T} from sigma2 = L L', then B = R'O1R,
// D = R'O2R, W = R'S1R. Throws NotPositiveDefinite when a sigma is not SPD.
GtlsReduction reduce(const GtlsSources& sources);

// Maps a sphere solution back to the parameter vector: with chi = R x and
// the last entry chi_q as the homogenizing coordinate, tau = -chi_{1..q-1} /
// chi_q. Throws SolutionAtInfinity when |chi_q| <= 1e-12 ||chi||. The sign
// ambiguity of x cancels exactly: tau(x) == tau(-x) bit for bit.
Vector recover_tau(const GtlsReduction& reduction, const SpherePoint& x_star);

struct GtlsResult {
    Vector tau;
    SolveResult solve;  // the sphere-space solve the estimate came from
    double h1_value = 0.0;
    double h2_value = 0.0;
};

// reduce, solve by continuation, map back. The per-branch endpoint values are
// reported so a near-tie between branches is visible to the caller.
GtlsResult gtls_solve(const GtlsSources& sources, const PhomConfig& cfg = {});

}  // namespace grqopt
