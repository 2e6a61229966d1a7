#include "grqopt/gtls.hpp"

#include <cmath>
#include <limits>

#include "grqopt/spectral.hpp"

namespace grqopt {

GtlsReduction reduce(const GtlsSources& s) {
    const Index q = s.omega1.rows();
    for (const Matrix* m : {&s.omega1, &s.omega2, &s.sigma1, &s.sigma2}) {
        if (m->rows() != q || m->cols() != q) throw Error("reduce: source matrices must share one square size");
        if (!m->allFinite()) throw Error("reduce: source matrices must be finite");
    }
    cholesky_lower(s.sigma1);  // sigma1 must be SPD for W to be
    const Matrix l = cholesky_lower(s.sigma2);
    Matrix r = l.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(q, q));

    Matrix b = r.transpose() * s.omega1 * r;
    Matrix d = r.transpose() * s.omega2 * r;
    Matrix w = r.transpose() * s.sigma1 * r;
    return {ProblemInstance(std::move(b), std::move(d), std::move(w)), std::move(r)};
}

Vector recover_tau(const GtlsReduction& reduction, const SpherePoint& x_star) {
    const Vector chi = reduction.r * x_star.vec();
    const Index q = chi.size();
    const double last = chi(q - 1);
    if (std::abs(last) <= 1e-12 * chi.norm()) {
        throw SolutionAtInfinity("recover_tau: homogenizing coordinate vanishes");
    }
    return Vector(-chi.head(q - 1) / last);
}

GtlsResult gtls_solve(const GtlsSources& sources, const PhomConfig& cfg) {
    const GtlsReduction red = reduce(sources);
    PhomReport rep;
    GtlsResult out;
    out.solve = phom_solve(red.instance, cfg, &rep);
    out.tau = recover_tau(red, SpherePoint(out.solve.x));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.h1_value = rep.h1.failed ? nan : rep.h1.inner_results.back().value;
    out.h2_value = rep.h2.failed ? nan : rep.h2.inner_results.back().value;
    return out;
}

}  // namespace grqopt
