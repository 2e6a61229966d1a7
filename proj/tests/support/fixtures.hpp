#pragma once

// Shared fixtures. ref5 is a 5x5 instance with two attracting maximizers,
// used throughout as the canonical hard case: plain ascent methods reach the
// spurious one from bad starts while continuation reaches the global one.

#include <random>

#include "grqopt/problem.hpp"
#include "grqopt/rtr.hpp"

namespace testsup {

inline grqopt::Matrix matrix5(const double (&a)[25]) {
    grqopt::Matrix m(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = a[i * 5 + j];
    return m;
}

inline grqopt::ProblemInstance ref5() {
    static const double b[25] = {
        -1.08, -0.10, 0.43,  1.20,  -1.34,  //
        -0.10, -1.02, -0.02, 0.80,  -0.31,  //
        0.43,  -0.02, -0.79, -0.92, 1.21,   //
        1.20,  0.80,  -0.92, -3.00, 2.94,   //
        -1.34, -0.31, 1.21,  2.94,  -4.11,
    };
    static const double d[25] = {
        -1.16, -0.58, 0.22,  1.29,  -1.10,  //
        -0.58, -0.82, 0.23,  0.46,  -1.04,  //
        0.22,  0.23,  -0.49, -0.19, 0.20,   //
        1.29,  0.46,  -0.19, -1.57, 1.10,   //
        -1.10, -1.04, 0.20,  1.10,  -1.77,
    };
    static const double w[25] = {
        1.17,  0.11,  -0.13, -0.95, 0.09,   //
        0.11,  2.54,  -0.19, -0.05, 0.81,   //
        -0.13, -0.19, 1.11,  0.31,  -1.46,  //
        -0.95, -0.05, 0.31,  1.34,  -0.39,  //
        0.09,  0.81,  -1.46, -0.39, 2.67,
    };
    return grqopt::ProblemInstance(matrix5(b), matrix5(d), matrix5(w));
}

// Published to three decimals, so renormalize before treating them as
// sphere points (the raw norms are ~3e-4 off).
inline grqopt::SpherePoint ref5_global_point() {
    grqopt::Vector v(5);
    v << 0.477, 0.433, -0.378, 0.656, 0.111;
    return grqopt::SpherePoint(v / v.norm());
}

inline grqopt::SpherePoint ref5_local_point() {
    grqopt::Vector v(5);
    v << -0.848, 0.140, -0.381, -0.060, 0.336;
    return grqopt::SpherePoint(v / v.norm());
}

inline constexpr double kRef5GlobalValue = -0.743;
inline constexpr double kRef5LocalValue = -0.766;
inline constexpr double kRef5GlobalSpectral = -0.509;  // phi_d phi_w at the global maximizer
inline constexpr double kRef5LocalSpectral = -0.517;
inline constexpr double kRef5PencilMin = -4.9717;
inline constexpr double kRef5PencilMax = -0.1142;

// Sharpens a three-decimal reference point into a stationary one.
inline grqopt::SolveResult polish(const grqopt::ProblemInstance& inst, const grqopt::SpherePoint& x,
                                  double grad_tol = 1e-7, int max_iters = 600) {
    grqopt::RtrConfig cfg;
    cfg.grad_tol = grad_tol;
    cfg.max_iters = max_iters;
    return grqopt::rtr_solve(inst, x, cfg);
}

// Random material for property tests. Deliberately built on the standard
// distribution objects, which the library itself avoids, so the two sampling
// paths share no code.
inline grqopt::Vector random_unit(grqopt::Index q, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    grqopt::Vector v(q);
    do {
        for (grqopt::Index i = 0; i < q; ++i) v(i) = gauss(rng);
    } while (v.norm() < 1e-8);
    return v / v.norm();
}

inline grqopt::Matrix random_sym(grqopt::Index q, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    grqopt::Matrix a(q, q);
    for (grqopt::Index i = 0; i < q; ++i)
        for (grqopt::Index j = 0; j < q; ++j) a(i, j) = gauss(rng);
    return 0.5 * (a + a.transpose());
}

inline grqopt::Matrix random_spd(grqopt::Index q, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    grqopt::Matrix a(q, q);
    for (grqopt::Index i = 0; i < q; ++i)
        for (grqopt::Index j = 0; j < q; ++j) a(i, j) = gauss(rng);
    return a * a.transpose() + 0.1 * grqopt::Matrix::Identity(q, q);
}

inline grqopt::ProblemInstance random_instance(grqopt::Index q, std::mt19937_64& rng) {
    grqopt::Matrix b = random_sym(q, rng);
    grqopt::Matrix d = random_sym(q, rng);
    grqopt::Matrix w = random_spd(q, rng);
    return grqopt::ProblemInstance(std::move(b), std::move(d), std::move(w));
}

}  // namespace testsup
