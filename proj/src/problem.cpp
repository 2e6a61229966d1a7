#include "grqopt/problem.hpp"

#include <cmath>

#include "grqopt/spectral.hpp"

namespace grqopt {

SpherePoint::SpherePoint(Vector v) : x_(std::move(v)) {
    if (x_.size() == 0 || !x_.allFinite())
        throw Error("SpherePoint: vector is empty or not finite");
    const double n = x_.norm();
    const double drift = std::abs(n - 1.0);
    if (drift <= 1e-12) return;
    if (drift <= 1e-6) {
        x_ /= n;
        return;
    }
    throw Error("SpherePoint: norm deviates from 1 beyond 1e-6");
}

namespace {

Matrix symmetrized(Matrix m) {
    Matrix t = 0.5 * (m + m.transpose());
    return t;
}

// Compensated dot product (error-free products fed into a compensated sum):
// the result is the dot as if computed in twice the working precision, then
// rounded once. The gradient hinges on B x - (phi_b/phi_w) W x, a residual
// roughly |phi_b|/phi_w^2 * eps below its leading terms when W is nearly
// singular at x; plain products would leave noise far above any useful
// stationarity tolerance there.
double dot2(const Vector& a, const Vector& b) {
    double s = 0.0, c = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        const double p = a(i) * b(i);
        const double pe = std::fma(a(i), b(i), -p);
        const double t = s + p;
        const double z = t - s;
        c += pe + ((s - (t - z)) + (p - z));
        s = t;
    }
    return s + c;
}

Vector matvec2(const Matrix& m, const Vector& v) {
    const Index n = m.rows();
    Vector r(n);
    for (Index i = 0; i < n; ++i) {
        double s = 0.0, c = 0.0;
        for (Index j = 0; j < m.cols(); ++j) {
            const double p = m(i, j) * v(j);
            const double pe = std::fma(m(i, j), v(j), -p);
            const double t = s + p;
            const double z = t - s;
            c += pe + ((s - (t - z)) + (p - z));
            s = t;
        }
        r(i) = s + c;
    }
    return r;
}

}  // namespace

ProblemInstance::ProblemInstance(Matrix b, Matrix d, Matrix w)
    : q_(b.rows()), b_(symmetrized(std::move(b))), d_(symmetrized(std::move(d))),
      w_(symmetrized(std::move(w))) {
    if (q_ < 2) throw Error("ProblemInstance: dimension must be at least 2");
    if (b_.cols() != q_ || d_.rows() != q_ || d_.cols() != q_ || w_.rows() != q_ || w_.cols() != q_)
        throw Error("ProblemInstance: B, D, W must share one square dimension");
    if (!b_.allFinite() || !d_.allFinite() || !w_.allFinite())
        throw Error("ProblemInstance: matrices must be finite");
    cholesky_lower(w_);  // SPD gate; the factor itself is not kept
}

double ProblemInstance::value(const Vector& x) const {
    const PhiTriple p = phi(*this, x);
    return p.b / p.w + p.d;
}

Vector ProblemInstance::gradient(const Vector& x) const {
    const Vector bx = matvec2(b_, x);
    const Vector wx = matvec2(w_, x);
    const Vector dx = matvec2(d_, x);
    const double pb = dot2(x, bx);
    const double pw = dot2(x, wx);
    const double pd = dot2(x, dx);
    // 2 (E(x) x / phi_w - phi_d x), with E(x) x expanded in the same products
    return 2.0 * ((bx - (pb / pw) * wx) / pw + dx - pd * x);
}

Vector ProblemInstance::hessian_vector(const Vector& x, const Vector& h) const {
    // Solver iterates drift off the tangent space by roundoff; absorb that
    // here instead of bouncing it back as an input error.
    return riemannian_hessian_vector(*this, x, h, /*reproject=*/true);
}

double SphereObjective::value_increment(const Vector& x, const Vector& h,
                                        double value_at_x) const {
    return value(retract(x, h).vec()) - value_at_x;
}

double ProblemInstance::value_increment(const Vector& x, const Vector& h, double) const {
    // All three quadratic forms move by a closed-form amount under
    // x -> (x+h)/||x+h||, so the difference never touches the roundoff floor
    // of the full values. The ratio term is invariant to the normalization.
    // The baseline is x renormalized to the sphere: a stale one-ulp norm
    // defect in x would otherwise enter the D term as pd*(||x||^2-1), an
    // h-independent bias that can dwarf the true change of a small step.
    const Vector bx = b_ * x, wx = w_ * x, dx = d_ * x;
    const double pb = x.dot(bx), pw = x.dot(wx), pd = x.dot(dx);
    const double u = 2.0 * bx.dot(h) + h.dot(b_ * h);
    const double v = 2.0 * wx.dot(h) + h.dot(w_ * h);
    const double t = 2.0 * dx.dot(h) + h.dot(d_ * h);
    const double n0 = x.squaredNorm() - 1.0;
    const double m = 2.0 * x.dot(h) + h.squaredNorm();
    return (u * pw - pb * v) / (pw * (pw + v)) +
           (t * (1.0 + n0) - pd * m) / ((1.0 + n0 + m) * (1.0 + n0));
}

PhiTriple phi(const ProblemInstance& inst, const Vector& x) {
    PhiTriple p;
    p.b = dot2(x, matvec2(inst.b(), x));
    p.w = dot2(x, matvec2(inst.w(), x));
    p.d = dot2(x, matvec2(inst.d(), x));
    return p;
}

double objective(const ProblemInstance& inst, const Vector& x) { return inst.value(x); }

Matrix e_matrix(const ProblemInstance& inst, const Vector& x) {
    const PhiTriple p = phi(inst, x);
    return inst.b() - (p.b / p.w) * inst.w() + p.w * inst.d();
}

Vector euclidean_gradient(const ProblemInstance& inst, const Vector& x) {
    Vector bx = inst.b() * x;
    Vector wx = inst.w() * x;
    Vector dx = inst.d() * x;
    const double pb = x.dot(bx);
    const double pw = x.dot(wx);
    return (2.0 / pw) * (bx - (pb / pw) * wx + pw * dx);
}

Vector euclidean_hessian_vector(const ProblemInstance& inst, const Vector& x, const Vector& h) {
    Vector bx = inst.b() * x;
    Vector wx = inst.w() * x;
    const double pb = x.dot(bx);
    const double pw = x.dot(wx);
    Vector eh = inst.b() * h - (pb / pw) * (inst.w() * h) + pw * (inst.d() * h);
    const double wxh = wx.dot(h);
    const double bxh = bx.dot(h);
    return (2.0 / pw) * eh + (8.0 * pb / (pw * pw * pw)) * wxh * wx
           - (4.0 / (pw * pw)) * (wxh * bx + bxh * wx);
}

Vector riemannian_gradient(const ProblemInstance& inst, const Vector& x) {
    return inst.gradient(x);
}

Vector riemannian_hessian_vector(const ProblemInstance& inst, const Vector& x, const Vector& h,
                                 bool reproject) {
    const double xh = x.dot(h);
    if (std::abs(xh) > 1e-8 * h.norm()) {
        if (!reproject) throw NonTangentInput("riemannian_hessian_vector: h is not tangent at x");
    }
    const Vector ht = reproject ? Vector(h - xh * x) : h;

    Vector bx = inst.b() * x;
    Vector wx = inst.w() * x;
    Vector dx = inst.d() * x;
    const double pb = x.dot(bx);
    const double pw = x.dot(wx);
    const double pd = x.dot(dx);

    Vector eh = inst.b() * ht - (pb / pw) * (inst.w() * ht) + pw * (inst.d() * ht);
    const double wxh = wx.dot(ht);
    const double bxh = bx.dot(ht);
    Vector core = eh - pw * pd * ht + (4.0 * pb / (pw * pw)) * wxh * wx
                  - (2.0 / pw) * (wxh * bx + bxh * wx);
    core *= 2.0 / pw;
    return core - x.dot(core) * x;
}

Vector riemannian_hessian_vector_projected(const ProblemInstance& inst, const Vector& x,
                                           const Vector& h) {
    Vector fh = euclidean_hessian_vector(inst, x, h);
    const double normal = x.dot(euclidean_gradient(inst, x));
    // Weingarten term on the sphere: A_x(h, u) = -(x.u) h for normal u
    return fh - x.dot(fh) * x - normal * h;
}

Vector project_tangent(const Vector& x, const Vector& v) { return v - x.dot(v) * x; }

SpherePoint retract(const Vector& x, const Vector& h) {
    Vector s = x + h;
    const double n = s.norm();
    if (n <= 1e-14) throw DegenerateRetraction("retract: x + h vanishes");
    s /= n;
    return SpherePoint(std::move(s));
}

Matrix tangent_basis(const Vector& x) {
    const Index q = x.size();
    if (q < 2) throw Error("tangent_basis: need dimension >= 2");
    const Matrix xm = x;
    Eigen::HouseholderQR<Matrix> qr(xm);
    Matrix full = qr.householderQ();
    return full.rightCols(q - 1);
}

EigenDecomp tangent_hessian_eig(const SphereObjective& obj, const SpherePoint& x) {
    const Matrix basis = tangent_basis(x.vec());
    const Index m = basis.cols();
    Matrix hb(x.dim(), m);
    for (Index j = 0; j < m; ++j) hb.col(j) = obj.hessian_vector(x.vec(), basis.col(j));
    Matrix t = basis.transpose() * hb;
    return sym_eig(0.5 * (t + t.transpose()));
}

}  // namespace grqopt
