#include "grqopt/homotopy.hpp"

#include <chrono>
#include <cmath>

#include "grqopt/spectral.hpp"

namespace grqopt {

const char* branch_name(Branch b) { return b == Branch::H1 ? "H1" : "H2"; }

HomotopyInstance::HomotopyInstance(ProblemInstance base, Branch branch, double lambda)
    : base_(std::move(base)), branch_(branch), lambda_(lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("HomotopyInstance: lambda must lie in [0,1]");
}

ProblemInstance homotopy_objective(const HomotopyInstance& h) {
    const ProblemInstance& p = h.base();
    if (h.branch() == Branch::H1) return ProblemInstance(p.b(), h.lambda() * p.d(), p.w());
    return ProblemInstance(h.lambda() * p.b(), p.d(), p.w());
}

std::pair<SpherePoint, SpherePoint> trivial_starts(const ProblemInstance& inst) {
    const Vector pencil_top = top_generalized_eigenpair(inst.b(), inst.w()).second;
    const Vector d_top = sym_eig(inst.d()).vectors.col(0);
    return {SpherePoint(pencil_top), SpherePoint(d_top)};
}

namespace {

double schedule_lambda(int k, const PhomConfig& cfg) {
    if (k >= cfg.steps) return 1.0;
    if (cfg.geometric) return 1.0 - std::pow(2.0, -k);
    return static_cast<double>(k) / cfg.steps;
}

BranchTrace track_branch(const ProblemInstance& inst, Branch br, const SpherePoint& x0,
                         const PhomConfig& cfg) {
    BranchTrace tr;
    tr.branch = br;
    tr.lambdas.push_back(0.0);
    tr.points.push_back(x0.vec());
    Vector x = x0.vec();
    for (int k = 1; k <= cfg.steps; ++k) {
        const double lam = schedule_lambda(k, cfg);
        const ProblemInstance deformed = homotopy_objective(HomotopyInstance(inst, br, lam));
        const RtrConfig& rc = (k == cfg.steps) ? cfg.inner_final : cfg.inner;
        SolveResult r = rtr_solve(deformed, SpherePoint(x), rc);
        x = r.x;
        tr.lambdas.push_back(lam);
        tr.points.push_back(x);
        tr.inner_results.push_back(std::move(r));
    }
    return tr;
}

}  // namespace

SolveResult phom_solve(const ProblemInstance& inst, const PhomConfig& cfg, PhomReport* report) {
    if (cfg.steps < 1) throw Error("phom_solve: steps must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    const auto starts = trivial_starts(inst);
    PhomReport local;
    PhomReport& rep = report ? *report : local;
    rep = PhomReport{};
    rep.h1.branch = Branch::H1;
    rep.h2.branch = Branch::H2;

    try {
        rep.h1 = track_branch(inst, Branch::H1, starts.first, cfg);
    } catch (const std::exception& e) {
        rep.h1.failed = true;
        rep.h1.error = e.what();
    }
    try {
        rep.h2 = track_branch(inst, Branch::H2, starts.second, cfg);
    } catch (const std::exception& e) {
        rep.h2.failed = true;
        rep.h2.error = e.what();
    }
    if (rep.h1.failed && rep.h2.failed) {
        throw BothBranchesFailed("phom_solve: H1: " + rep.h1.error + "; H2: " + rep.h2.error);
    }

    // Endpoint values are f itself (lambda = 1 scales by exactly 1.0), so the
    // final inner results compare directly. Ties go to the quadratic branch.
    if (rep.h1.failed) {
        rep.selected = Branch::H2;
    } else if (rep.h2.failed) {
        rep.selected = Branch::H1;
    } else {
        rep.selected = rep.h1.inner_results.back().value > rep.h2.inner_results.back().value
                           ? Branch::H1
                           : Branch::H2;
    }

    const BranchTrace& win = rep.selected == Branch::H1 ? rep.h1 : rep.h2;
    SolveResult out = win.inner_results.back();
    out.iterations = 0;
    for (const SolveResult& r : win.inner_results) out.iterations += r.iterations;
    out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

PathDiagnostics path_diagnostics(const ProblemInstance& inst, const PhomConfig& cfg) {
    PhomReport rep;
    phom_solve(inst, cfg, &rep);

    PathDiagnostics diag;
    for (const BranchTrace* tr : {&rep.h1, &rep.h2}) {
        if (tr->failed) continue;
        for (std::size_t i = 0; i < tr->points.size(); ++i) {
            PathRecord rec;
            rec.branch = tr->branch;
            rec.lambda = tr->lambdas[i];
            const ProblemInstance deformed =
                homotopy_objective(HomotopyInstance(inst, tr->branch, rec.lambda));
            const EigenDecomp eig =
                tangent_hessian_eig(deformed, SpherePoint(tr->points[i]));
            rec.min_abs_hessian_eigenvalue = eig.values.cwiseAbs().minCoeff();
            rec.displacement = i == 0 ? 0.0 : (tr->points[i] - tr->points[i - 1]).norm();
            rec.degenerate = rec.min_abs_hessian_eigenvalue < 1e-8;
            diag.records.push_back(rec);
        }
    }
    return diag;
}

}  // namespace grqopt
