#include "grqopt/spectral.hpp"

#include <cmath>

namespace grqopt {

void fix_sign(Eigen::Ref<Vector> v) {
    for (Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

namespace {

// L^-1 M L^-T, symmetrized against triangular-solve roundoff.
Matrix whiten(const Matrix& m, const Matrix& l) {
    Matrix u = l.triangularView<Eigen::Lower>().solve(m);
    Matrix s = l.triangularView<Eigen::Lower>().solve(Matrix(u.transpose()));
    return 0.5 * (s + s.transpose());
}

}  // namespace

Matrix cholesky_lower(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw Error("cholesky_lower: matrix must be square");
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("cholesky_lower: matrix is not positive definite");
    Matrix l = llt.matrixL();
    // LLT tolerates tiny positive pivots that make later triangular solves
    // explode; treat them as a definiteness failure too.
    const double scale = l.diagonal().maxCoeff();
    if (!(l.diagonal().minCoeff() > 1e-14 * (1.0 + scale)))
        throw NotPositiveDefinite("cholesky_lower: pivot below tolerance");
    return l;
}

EigenDecomp sym_eig(const Matrix& m) {
    if (m.rows() != m.cols())
        throw Error("sym_eig: matrix must be square");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success)
        throw NoConvergence("sym_eig: eigendecomposition did not converge");
    EigenDecomp d;
    d.values = es.eigenvalues().reverse();
    d.vectors = es.eigenvectors().rowwise().reverse();
    for (Index i = 0; i < d.vectors.cols(); ++i) fix_sign(d.vectors.col(i));
    return d;
}

std::pair<double, Vector> top_generalized_eigenpair(const Matrix& b, const Matrix& w) {
    Matrix l = cholesky_lower(w);
    EigenDecomp d = sym_eig(whiten(b, l));
    Vector v = l.transpose().triangularView<Eigen::Upper>().solve(d.vectors.col(0));
    v.normalize();
    fix_sign(v);
    return {d.values(0), v};
}

Vector pencil_eigenvalues(const Matrix& b, const Matrix& w) {
    return sym_eig(whiten(b, cholesky_lower(w))).values;
}

}  // namespace grqopt
