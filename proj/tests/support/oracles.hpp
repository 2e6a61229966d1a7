#pragma once

// Independent references the implementation is checked against: finite
// differences for the calculus and dense sphere grids for global values.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "grqopt/instance_gen.hpp"
#include "grqopt/problem.hpp"
#include "grqopt/rtr.hpp"

namespace testsup {

inline grqopt::Vector fd_euclidean_gradient(const grqopt::ProblemInstance& inst,
                                            const grqopt::Vector& x, double eps = 1e-5) {
    grqopt::Vector g(x.size());
    for (grqopt::Index i = 0; i < x.size(); ++i) {
        grqopt::Vector xp = x, xm = x;
        xp(i) += eps;
        xm(i) -= eps;
        g(i) = (grqopt::objective(inst, xp) - grqopt::objective(inst, xm)) / (2.0 * eps);
    }
    return g;
}

// d/dt f((x + t v)/||x + t v||) at t = 0, the derivative along the
// retraction curve. Equals grad.v for tangent v.
inline double fd_directional(const grqopt::ProblemInstance& inst, const grqopt::Vector& x,
                             const grqopt::Vector& v, double eps = 1e-5) {
    const grqopt::Vector xp = (x + eps * v).normalized();
    const grqopt::Vector xm = (x - eps * v).normalized();
    return (grqopt::objective(inst, xp) - grqopt::objective(inst, xm)) / (2.0 * eps);
}

inline grqopt::Vector fd_euclidean_hessian_vector(const grqopt::ProblemInstance& inst,
                                                  const grqopt::Vector& x, const grqopt::Vector& h,
                                                  double eps = 1e-5) {
    return (grqopt::euclidean_gradient(inst, x + eps * h) -
            grqopt::euclidean_gradient(inst, x - eps * h)) /
           (2.0 * eps);
}

// Covariant derivative of the gradient field along any curve through x with
// velocity v, so the curve's acceleration never enters: project the ambient
// difference quotient of grad f back to the tangent space.
inline grqopt::Vector fd_riemannian_hessian_vector(const grqopt::ProblemInstance& inst,
                                                   const grqopt::Vector& x, const grqopt::Vector& v,
                                                   double eps = 1e-5) {
    const grqopt::Vector gp = grqopt::riemannian_gradient(inst, (x + eps * v).normalized());
    const grqopt::Vector gm = grqopt::riemannian_gradient(inst, (x - eps * v).normalized());
    return grqopt::project_tangent(x, (gp - gm) / (2.0 * eps));
}

// Gram-Schmidt tangent frame at unit x, independent of the library's
// Householder construction.
inline grqopt::Matrix gs_tangent_frame(const grqopt::Vector& x) {
    const grqopt::Index q = x.size();
    grqopt::Matrix frame(q, q - 1);
    grqopt::Index col = 0;
    for (grqopt::Index i = 0; i < q && col < q - 1; ++i) {
        grqopt::Vector v = grqopt::Vector::Unit(q, i);
        v -= (x.dot(v)) * x;
        for (grqopt::Index j = 0; j < col; ++j) v -= frame.col(j).dot(v) * frame.col(j);
        const double n = v.norm();
        if (n < 1e-8) continue;  // axis nearly parallel to x, skip it
        frame.col(col++) = v / n;
    }
    return frame.leftCols(col);
}

// Dense scan of the circle, sharpened from the best grid angle.
inline double brute_force_q2(const grqopt::ProblemInstance& inst, int n = 100000) {
    double best = -std::numeric_limits<double>::infinity();
    grqopt::Vector best_x(2);
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * M_PI * k / n;
        grqopt::Vector x(2);
        x << std::cos(t), std::sin(t);
        const double v = grqopt::objective(inst, x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    grqopt::RtrConfig cfg;
    cfg.grad_tol = 1e-7;
    cfg.max_iters = 600;
    return grqopt::rtr_solve(inst, grqopt::SpherePoint(best_x), cfg).value;
}

// Dense well-spread scan of the 2-sphere; the best few cells are sharpened
// and the winner kept.
inline double brute_force_q3(const grqopt::ProblemInstance& inst, int n = 100000,
                             int polish_top = 40) {
    const grqopt::Matrix pts = grqopt::low_discrepancy_sphere(3, n);
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) vals[static_cast<std::size_t>(k)] = grqopt::objective(inst, pts.row(k).transpose());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const int keep = std::min(polish_top, n);
    std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                      [&](int a, int b) { return vals[static_cast<std::size_t>(a)] > vals[static_cast<std::size_t>(b)]; });
    grqopt::RtrConfig cfg;
    cfg.grad_tol = 1e-7;
    cfg.max_iters = 600;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < keep; ++i) {
        const grqopt::Vector x = pts.row(order[static_cast<std::size_t>(i)]).transpose();
        best = std::max(best, grqopt::rtr_solve(inst, grqopt::SpherePoint(x), cfg).value);
    }
    return best;
}

}  // namespace testsup
