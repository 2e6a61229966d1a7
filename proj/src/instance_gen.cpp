#include "grqopt/instance_gen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "grqopt/io.hpp"
#include "grqopt/spectral.hpp"

namespace grqopt {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double positive_uniform(std::mt19937_64& rng) {
    double u = uniform01(rng);
    while (u == 0.0) u = uniform01(rng);
    return u;
}

// Rational approximation of the standard normal quantile (relative error
// below 1.2e-9), refined by one Halley step against erfc.
double inv_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double lo = 0.02425;

    p = std::clamp(p, 1e-300, 1.0 - 1e-16);
    double x;
    if (p < lo) {
        const double u = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    } else if (p <= 1.0 - lo) {
        const double u = p - 0.5;
        const double r = u * u;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double u = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double g = e * std::sqrt(kTwoPi) * std::exp(0.5 * x * x);
    return x - g / (1.0 + 0.5 * x * g);
}

}  // namespace

double standard_normal(std::mt19937_64& rng) {
    const double u = positive_uniform(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(kTwoPi * v);
}

double student_t(std::mt19937_64& rng, double dof) {
    if (!(dof > 0.0)) throw Error("student_t: dof must be positive");
    // Polar-style direct draw: sqrt(dof (u^(-2/dof) - 1)) cos(2 pi v) is
    // t-distributed with dof degrees of freedom.
    const double u = positive_uniform(rng);
    const double v = uniform01(rng);
    return std::sqrt(dof * (std::pow(u, -2.0 / dof) - 1.0)) * std::cos(kTwoPi * v);
}

Matrix low_discrepancy_sphere(Index q, int n) {
    if (q < 2) throw Error("low_discrepancy_sphere: need dimension >= 2");
    if (n < 1) throw Error("low_discrepancy_sphere: need at least one point");

    // Unique positive root of x^(q+1) = x + 1; its inverse powers make the
    // best-known rank-1 lattice directions in q dimensions.
    double root = 1.5;
    for (int i = 0; i < 64; ++i) root = std::pow(1.0 + root, 1.0 / (q + 1));
    Vector alpha(q);
    double inv = 1.0;
    for (Index i = 0; i < q; ++i) {
        inv /= root;
        alpha(i) = inv;
    }

    Matrix pts(n, q);
    for (int k = 0; k < n; ++k) {
        Vector z(q);
        for (Index i = 0; i < q; ++i) {
            const double u = std::fmod(0.5 + (k + 1) * alpha(i), 1.0);
            z(i) = inv_normal_cdf(u);
        }
        const double norm = z.norm();
        if (norm <= 1e-12) {
            z.setZero();
            z(0) = 1.0;
        } else {
            z /= norm;
        }
        pts.row(k) = z.transpose();
    }
    return pts;
}

std::pair<ProblemInstance, ProblemInstance> sample_instance_pair(Index q, double dof,
                                                                 std::mt19937_64& rng) {
    if (q < 2) throw Error("sample_instance_pair: need dimension >= 2");

    auto draw_squared = [&]() {
        Matrix m(q, q);
        for (Index i = 0; i < q; ++i)
            for (Index j = 0; j < q; ++j) m(i, j) = student_t(rng, dof);
        return Matrix(m * m.transpose());
    };

    const Matrix b = draw_squared();
    const Matrix d = draw_squared();
    Matrix w;
    bool spd = false;
    for (int attempt = 0; attempt < 100 && !spd; ++attempt) {
        w = draw_squared();
        try {
            cholesky_lower(w);
            spd = true;
        } catch (const NotPositiveDefinite&) {
        }
    }
    if (!spd) throw SamplingFailed("sample_instance_pair: no SPD W in 100 draws");

    return {ProblemInstance(b, d, w), ProblemInstance(-b, -d, w)};
}

TrivialityResult classify_triviality(const ProblemInstance& inst, const GenConfig& cfg) {
    if (cfg.multistart_count < 8)
        throw Error("classify_triviality: multistart_count must be at least 8");
    if (!(cfg.cluster_tol > 0.0)) throw Error("classify_triviality: cluster_tol must be positive");
    const Index q = inst.dim();

    RtrConfig polish;
    polish.grad_tol = 1e-7;
    polish.max_iters = 600;

    std::vector<Vector> starts;
    starts.reserve(cfg.multistart_count + 2 * q);
    const Matrix spread = low_discrepancy_sphere(q, cfg.multistart_count);
    for (int k = 0; k < spread.rows(); ++k) starts.push_back(spread.row(k).transpose());
    for (Index i = 0; i < q; ++i) {
        Vector e = Vector::Zero(q);
        e(i) = 1.0;
        starts.push_back(e);
        starts.push_back(-e);
    }

    struct Hit {
        double value;
        Vector x;
    };
    std::vector<Hit> hits;
    for (const Vector& s : starts) {
        const SolveResult r = rtr_solve(inst, SpherePoint(s), polish);
        if (r.termination != Termination::GradTol) continue;
        // Converged is not enough: an axis start can sit exactly on a saddle,
        // where the gradient vanishes but the point attracts nothing. Keep
        // second-order maximizers only.
        const EigenDecomp curv = tangent_hessian_eig(inst, SpherePoint(r.x));
        const double scale = 1.0 + curv.values.cwiseAbs().maxCoeff();
        if (curv.values(0) > 1e-6 * scale) continue;
        hits.push_back({r.value, r.x});
    }
    if (hits.empty())
        throw ClassificationFailed("classify_triviality: no start reached a maximizer");

    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.value > b.value; });

    TrivialityResult res;
    res.cluster_values.push_back(hits.front().value);
    for (const Hit& h : hits) {
        if (res.cluster_values.back() - h.value > cfg.cluster_tol) {
            res.cluster_values.push_back(h.value);
        }
    }
    res.distinct_basins = static_cast<int>(res.cluster_values.size());
    res.nontrivial = res.distinct_basins >= 2;
    res.f_global = hits.front().value;
    res.x_global = hits.front().x;
    fix_sign(res.x_global);
    if (res.distinct_basins >= 2) res.f_local_best = res.cluster_values[1];
    return res;
}

GenSummary generate_dataset(const GenConfig& cfg, const std::string& path) {
    if (cfg.count < 0) throw Error("generate_dataset: count must be nonnegative");
    const auto t0 = std::chrono::steady_clock::now();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("generate_dataset: cannot open " + path + " for writing");
    out << manifest_line(cfg) << '\n';

    GenSummary summary;
    std::uint64_t chain = cfg.seed;
    while (summary.written < cfg.count) {
        const std::uint64_t trial_seed = splitmix64(chain);
        std::mt19937_64 rng(trial_seed);
        const auto pair = sample_instance_pair(cfg.q, cfg.dof, rng);

        for (const ProblemInstance* inst : {&pair.first, &pair.second}) {
            if (summary.written >= cfg.count) break;
            ++summary.attempts;
            TrivialityResult tri;
            try {
                tri = classify_triviality(*inst, cfg);
            } catch (const ClassificationFailed&) {
                continue;  // counted as a discard
            }
            if (!tri.nontrivial) continue;

            DatasetRecord rec{summary.written, trial_seed,    *inst,
                              true,            tri.f_global,  tri.x_global,
                              tri.f_local_best, tri.distinct_basins};
            out << record_line(rec) << '\n';
            ++summary.written;
        }
    }
    out.flush();
    if (!out) throw IoError("generate_dataset: write to " + path + " failed");

    summary.trivial_rate =
        summary.attempts == 0
            ? 0.0
            : static_cast<double>(summary.attempts - summary.written) / summary.attempts;
    summary.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

}  // namespace grqopt
