#pragma once

#include <string>
#include <utility>
#include <vector>

#include "grqopt/problem.hpp"
#include "grqopt/rtr.hpp"

namespace grqopt {

enum class Branch { H1, H2 };

const char* branch_name(Branch b);

// One member of the two deformation families. H1 keeps the ratio term and
// fades the quadratic in, H2 does the opposite; both reach f at lambda = 1.
class HomotopyInstance {
  public:
    HomotopyInstance(ProblemInstance base, Branch branch, double lambda);

    const ProblemInstance& base() const { return base_; }
    Branch branch() const { return branch_; }
    double lambda() const { return lambda_; }

  private:
    ProblemInstance base_;
    Branch branch_;
    double lambda_;
};

// Materializes the deformed objective as a plain instance: (B, lambda*D, W)
// for H1 and (lambda*B, D, W) for H2. Multiplication by 1.0 is exact, so at
// lambda = 1 both branches evaluate f through the identical code path.
ProblemInstance homotopy_objective(const HomotopyInstance& h);

// Maximizers of the two lambda = 0 problems: the top eigenvector of the
// pencil (B, W) and the top eigenvector of D. These seed the two branches.
std::pair<SpherePoint, SpherePoint> trivial_starts(const ProblemInstance& inst);

struct PhomConfig {
    int steps = 4;
    RtrConfig inner;        // per continuation step
    RtrConfig inner_final;  // last step, usually a larger budget
    bool geometric = false;  // lambda_k = 1 - 2^{-k} instead of k/steps; final step is 1 either way

    PhomConfig() {
        inner.max_iters = 100;
        inner_final.max_iters = 1100;
    }
};

// Record of one tracked branch: the warm-start chain itself. points[0] is the
// trivial start at lambda 0; points[k] is the inner solution at lambdas[k].
struct BranchTrace {
    Branch branch = Branch::H1;
    std::vector<double> lambdas;
    std::vector<Vector> points;
    std::vector<SolveResult> inner_results;  // one per continuation step
    bool failed = false;
    std::string error;
};

struct PhomReport {
    BranchTrace h1, h2;
    Branch selected = Branch::H1;
};

struct PathRecord {
    Branch branch = Branch::H1;
    double lambda = 0.0;
    double min_abs_hessian_eigenvalue = 0.0;  // over the tangent space at the tracked point
    double displacement = 0.0;                // chord distance to the previous tracked point
    bool degenerate = false;                  // min |eigenvalue| < 1e-8
};

struct PathDiagnostics {
    std::vector<PathRecord> records;  // H1 records in lambda order, then H2
};

// Tracks both branches from their trivial starts, warm-starting each inner
// trust-region solve at the previous solution, and returns the endpoint with
// the higher objective value. iterations sums the winning branch's inner
// iterations; elapsed covers the whole call. If one branch throws the other
// is returned (the report carries the failure); both failing raises
// BothBranchesFailed.
SolveResult phom_solve(const ProblemInstance& inst, const PhomConfig& cfg = {},
                       PhomReport* report = nullptr);

// Runs a trajectory and examines it after the fact: at every tracked point,
// the spectrum of the deformed objective's Hessian restricted to the tangent
// space, plus the step displacement. A rank-deficient tangent Hessian along
// the path is the failure mode that breaks continuation.
PathDiagnostics path_diagnostics(const ProblemInstance& inst, const PhomConfig& cfg = {});

}  // namespace grqopt
