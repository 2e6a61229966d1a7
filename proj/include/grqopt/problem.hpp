#pragma once

#include "grqopt/spectral.hpp"
#include "grqopt/types.hpp"

namespace grqopt {

// Unit-norm vector. The constructor absorbs norm drift up to 1e-6 by
// renormalizing and rejects anything farther from the sphere.
class SpherePoint {
public:
    explicit SpherePoint(Vector v);
    const Vector& vec() const { return x_; }
    Index dim() const { return x_.size(); }

private:
    Vector x_;
};

struct PhiTriple {
    double b;  // x'Bx
    double w;  // x'Wx, strictly positive
    double d;  // x'Dx
};

// What a trust-region solver needs from an objective on the sphere.
class SphereObjective {
public:
    virtual ~SphereObjective() = default;
    virtual Index dim() const = 0;
    virtual double value(const Vector& x) const = 0;
    virtual Vector gradient(const Vector& x) const = 0;                          // Riemannian
    virtual Vector hessian_vector(const Vector& x, const Vector& h) const = 0;   // Riemannian, tangent h

    // value(retract(x, h)) - value_at_x. The default differences two full
    // evaluations, whose error is set by |f|; overrides that difference in
    // closed form instead have error scaling with ||h||, which keeps the
    // trust-region agreement ratio meaningful for steps far below the
    // roundoff floor of f itself. Overrides may baseline against x
    // renormalized to the sphere rather than x as stored; the two differ by
    // at most the norm defect of x passed through f.
    virtual double value_increment(const Vector& x, const Vector& h, double value_at_x) const;
};

// f(x) = x'Bx / x'Wx + x'Dx over unit x. B, D symmetric, W symmetric positive
// definite (checked at construction; inputs are symmetrized).
class ProblemInstance : public SphereObjective {
public:
    ProblemInstance(Matrix b, Matrix d, Matrix w);

    const Matrix& b() const { return b_; }
    const Matrix& d() const { return d_; }
    const Matrix& w() const { return w_; }

    Index dim() const override { return q_; }
    double value(const Vector& x) const override;
    Vector gradient(const Vector& x) const override;
    Vector hessian_vector(const Vector& x, const Vector& h) const override;
    double value_increment(const Vector& x, const Vector& h, double value_at_x) const override;

private:
    Index q_;
    Matrix b_, d_, w_;
};

PhiTriple phi(const ProblemInstance& inst, const Vector& x);

double objective(const ProblemInstance& inst, const Vector& x);

// E(x) = B - (phi_b/phi_w) W + phi_w D. Stationary points of f solve
// E(x) x = phi_d phi_w x.
Matrix e_matrix(const ProblemInstance& inst, const Vector& x);

// f'(x) = (2/phi_w) E(x) x.
Vector euclidean_gradient(const ProblemInstance& inst, const Vector& x);

// f''(x) h without forming the matrix:
//   (2/phi_w) E(x) h + (8 phi_b/phi_w^3)(Wx.h) Wx - (4/phi_w^2)((Wx.h) Bx + (Bx.h) Wx)
Vector euclidean_hessian_vector(const ProblemInstance& inst, const Vector& x, const Vector& h);

// grad f(x) = 2 (E(x)/phi_w - phi_d I) x, already tangent.
Vector riemannian_gradient(const ProblemInstance& inst, const Vector& x);

// Compact form: (2/phi_w) P_x (E(x) - phi_w phi_d I
//                + (4 phi_b/phi_w^2) Wxx'W - (2/phi_w)(Bxx'W + Wxx'B)) h.
// Rejects non-tangent h (|x.h| > 1e-8 ||h||) unless reproject is set.
Vector riemannian_hessian_vector(const ProblemInstance& inst, const Vector& x, const Vector& h,
                                 bool reproject = false);

// Same operator through the general embedded-manifold route
// P_x f''(x) h + A_x(h, normal part of f'), kept as a cross-check.
Vector riemannian_hessian_vector_projected(const ProblemInstance& inst, const Vector& x,
                                           const Vector& h);

// P_x v = v - (x.v) x.
Vector project_tangent(const Vector& x, const Vector& v);

// (x + h)/||x + h||. Throws DegenerateRetraction when the sum vanishes.
SpherePoint retract(const Vector& x, const Vector& h);

// Orthonormal basis of the tangent space at unit x: the trailing q-1 columns
// of a Householder factorization whose leading column spans x.
Matrix tangent_basis(const Vector& x);

// Spectrum of the objective's Hessian restricted to the tangent space at x,
// in tangent_basis coordinates. At a stationary point this classifies it:
// all eigenvalues negative means a local maximizer.
EigenDecomp tangent_hessian_eig(const SphereObjective& obj, const SpherePoint& x);

}  // namespace grqopt
