#pragma once

#include <utility>

#include "grqopt/types.hpp"

namespace grqopt {

struct EigenDecomp {
    Vector values;   // descending
    Matrix vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

// Flips v so its first entry with magnitude above 1e-12 is positive: the
// sign convention applied to every eigenvector and stored solution.
void fix_sign(Eigen::Ref<Vector> v);

// Lower-triangular L with L L^T = M. Throws NotPositiveDefinite when a pivot
// is not strictly positive.
Matrix cholesky_lower(const Matrix& m);

// Full symmetric eigendecomposition. Values descending; each vector carries a
// deterministic sign (first entry with magnitude above 1e-12 is positive).
EigenDecomp sym_eig(const Matrix& m);

// Largest generalized eigenvalue mu with unit v satisfying B v = mu W v.
// Reduced to an ordinary symmetric problem by whitening with cholesky_lower(W).
std::pair<double, Vector> top_generalized_eigenpair(const Matrix& b, const Matrix& w);

// All generalized eigenvalues of the pencil (B, W), descending.
Vector pencil_eigenvalues(const Matrix& b, const Matrix& w);

}  // namespace grqopt
