#include "grqopt/rtr.hpp"

#include <chrono>
#include <cmath>

namespace grqopt {

namespace {

// Shared floor for the residual and curvature tests inside tcg. Keeping both
// tests at a fixed absolute threshold means the subproblem never chases
// directions the model can't resolve, at the cost of a matching floor on the
// gradient norms the outer loop can certify.
constexpr double kModelFloor = 1e-14;

// Positive root of ||h + t r|| = delta for t, assuming ||h|| <= delta and
// r != 0. The discriminant is nonnegative under those hypotheses.
double to_boundary(const Vector& h, const Vector& r, double delta) {
    const double rr = r.squaredNorm();
    const double hr = h.dot(r);
    const double disc = hr * hr - rr * (h.squaredNorm() - delta * delta);
    return (-hr + std::sqrt(std::max(disc, 0.0))) / rr;
}

}  // namespace

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::GradTol: return "GradTol";
        case Termination::MaxIters: return "MaxIters";
        case Termination::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

Vector tcg(const Vector& grad, const std::function<Vector(const Vector&)>& hess_op, double delta) {
    if (!(delta > 0.0)) throw Error("tcg: trust radius must be positive");
    const Index q = grad.size();
    Vector h = Vector::Zero(q);
    Vector g = grad;      // gradient of the model at h
    Vector r = -grad;     // search direction
    double gg = g.squaredNorm();
    for (Index iter = 0; iter < q; ++iter) {
        if (gg <= kModelFloor) break;
        const Vector hr = hess_op(r);
        const double curv = r.dot(hr);
        if (curv <= kModelFloor) {
            // Nonpositive (or numerically flat) curvature: the model is
            // unbounded along r, so run to the trust-region boundary.
            return h + to_boundary(h, r, delta) * r;
        }
        const double alpha = gg / curv;
        if ((h + alpha * r).norm() >= delta) {
            return h + to_boundary(h, r, delta) * r;
        }
        h += alpha * r;
        g += alpha * hr;
        const double gg_new = g.squaredNorm();
        r = -g + (gg_new / gg) * r;
        gg = gg_new;
    }
    return h;
}

SolveResult rtr_solve(const SphereObjective& obj, const SpherePoint& x0, const RtrConfig& cfg,
                      RtrTrace* trace) {
    if (!(cfg.delta_tr_min > 0.0 && cfg.delta_tr_min <= cfg.delta_tr_init &&
          cfg.delta_tr_init <= cfg.delta_tr_max)) {
        throw Error("rtr_solve: need 0 < delta_tr_min <= delta_tr_init <= delta_tr_max");
    }
    if (!(cfg.rho_threshold > 0.0 && cfg.rho_threshold < 0.25)) {
        throw Error("rtr_solve: rho_threshold must lie in (0, 1/4)");
    }
    if (!(cfg.grad_tol > 0.0)) throw Error("rtr_solve: grad_tol must be positive");
    if (cfg.max_iters < 0) throw Error("rtr_solve: max_iters must be nonnegative");
    if (obj.dim() != x0.dim()) throw Error("rtr_solve: start point dimension mismatch");

    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&](SolveResult res) {
        res.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    };

    SolveResult res;
    res.x = x0.vec();
    res.value = obj.value(res.x);
    Vector grad = obj.gradient(res.x);
    res.grad_norm = grad.norm();
    res.termination = Termination::MaxIters;
    if (res.grad_norm <= cfg.grad_tol) {
        res.termination = Termination::GradTol;
        return finish(res);
    }

    double delta = cfg.delta_tr_init;
    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        res.iterations = iter;
        const Vector x = res.x;
        // tcg minimizes, we maximize: flip the signs of the model.
        auto neg_hess = [&](const Vector& v) { return Vector(-obj.hessian_vector(x, v)); };
        const Vector h = tcg(-grad, neg_hess, delta);

        Vector xi;
        try {
            xi = retract(res.x, h).vec();
        } catch (const DegenerateRetraction&) {
            res.termination = Termination::Degenerate;
            return finish(res);
        }
        // Differencing two full evaluations would bury small steps in the
        // roundoff of f itself; the increment form keeps the comparison sharp
        // at every step size.
        const double increment = obj.value_increment(x, h, res.value);
        const double f_trial = res.value + increment;
        const double predicted = h.dot(grad) + 0.5 * h.dot(obj.hessian_vector(x, h));

        double rho;
        bool accept;
        if (std::abs(predicted) <= 1e-15) {
            // Model change at roundoff scale: treat the agreement as perfect
            // and accept. Rejecting cannot help here: rho stays 1, the radius
            // stays put, and the same step would be proposed forever.
            rho = 1.0;
            accept = true;
        } else {
            rho = increment / predicted;
            accept = rho > cfg.rho_threshold;
        }

        if (rho < 0.25) {
            delta = std::max(delta / 4.0, cfg.delta_tr_min);
        } else if (rho > 0.75 && delta - h.norm() <= cfg.grad_tol) {
            delta = std::min(2.0 * delta, cfg.delta_tr_max);
        }

        if (accept) {
            res.x = xi;
            res.value = f_trial;
            grad = obj.gradient(res.x);
            res.grad_norm = grad.norm();
            if (trace) trace->accepted_values.push_back(res.value);
        }
        if (trace) trace->radii.push_back(delta);

        if (res.grad_norm <= cfg.grad_tol) {
            res.termination = Termination::GradTol;
            return finish(res);
        }
    }
    return finish(res);
}

}  // namespace grqopt
