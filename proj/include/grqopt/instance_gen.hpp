#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grqopt/problem.hpp"
#include "grqopt/rtr.hpp"

namespace grqopt {

struct GenConfig {
    Index q = 5;
    int count = 200;  // nontrivial instances to emit
    double dof = 3.0;  // Student-t tail weight of the raw entries
    std::uint64_t seed = 0;
    int multistart_count = 64;  // low-discrepancy starts, on top of the 2q axis points
    double cluster_tol = 1e-6;
};

// Deterministic 64-bit scrambler; one call per trial derives that trial's
// seed, so trials stay independent and reproducible under any fan-out.
std::uint64_t splitmix64(std::uint64_t& state);

// Variates built on the raw mt19937_64 word stream only. The standard
// library's distribution objects are implementation-defined, which would
// break the byte-determinism contract of generated datasets.
double uniform01(std::mt19937_64& rng);
double standard_normal(std::mt19937_64& rng);
double student_t(std::mt19937_64& rng, double dof);

// n deterministic well-spread unit vectors (one per row), identical on every
// call: a rank-1 lattice pushed through the inverse normal CDF and projected
// to the sphere.
Matrix low_discrepancy_sphere(Index q, int n);

// Raw B, D, W with iid Student-t entries, each squared into M M^T; W is
// redrawn until numerically SPD, at most 100 times (then SamplingFailed).
// Returns the triplet's instance and its (-B, -D, W) twin.
std::pair<ProblemInstance, ProblemInstance> sample_instance_pair(Index q, double dof,
                                                                 std::mt19937_64& rng);

struct TrivialityResult {
    bool nontrivial = false;
    double f_global = 0.0;
    Vector x_global;  // first significant entry positive
    std::vector<double> cluster_values;  // descending, one per distinct basin
    int distinct_basins = 0;
    std::optional<double> f_local_best;  // best non-global value, when one exists
};

// Multistart probe: trust-region runs from the low-discrepancy set plus all
// +-e_i, keeping converged runs that end at second-order maximizers (the
// axis points can sit exactly on saddles, which converge instantly but are
// not attractors), then clustering the surviving values within cluster_tol
// after antipodal identification. Two or more clusters means some starts are
// captured by a spurious local maximizer. Throws ClassificationFailed when
// nothing survives.
TrivialityResult classify_triviality(const ProblemInstance& inst, const GenConfig& cfg);

struct DatasetRecord {
    std::int64_t id;
    std::uint64_t seed;  // trial seed, shared by the sign pair it came from
    ProblemInstance instance;
    bool nontrivial;
    double f_global;
    Vector x_global;
    std::optional<double> f_local_best;
    int distinct_basins;
};

struct GenSummary {
    int attempts = 0;  // classifications performed (two per trial)
    int written = 0;
    double trivial_rate = 0.0;  // discarded fraction of attempts
    double elapsed = 0.0;
};

// Streams nontrivial records as JSON lines behind a manifest line until
// cfg.count are written. Identical configs produce identical bytes.
GenSummary generate_dataset(const GenConfig& cfg, const std::string& path);

}  // namespace grqopt
