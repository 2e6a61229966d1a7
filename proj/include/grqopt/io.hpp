#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "grqopt/gtls.hpp"
#include "grqopt/instance_gen.hpp"
#include "grqopt/problem.hpp"

namespace grqopt {

// Locale-independent float serialization, 17 significant digits with
// trailing zeros trimmed: round-trips exactly and is byte-deterministic.
std::string format_double(double v);

// Instance files: {"q": n, "B": [...], "D": [...], "W": [...]}, row-major.
ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

// Estimation source files:
// {"q": n, "Omega1": [...], "Omega2": [...], "Sigma1": [...], "Sigma2": [...]}.
GtlsSources load_gtls_sources(const std::string& path);
void save_gtls_sources(const GtlsSources& s, const std::string& path);

struct DatasetManifest {
    int format_version = 1;
    Index q = 0;
    std::uint64_t seed = 0;
    double dof = 0.0;
    int count = 0;
    int multistart_count = 0;
    double cluster_tol = 0.0;
};

// One JSON line each: the manifest heads the file, records follow.
std::string manifest_line(const GenConfig& cfg);
std::string record_line(const DatasetRecord& rec);

std::pair<DatasetManifest, std::vector<DatasetRecord>> load_dataset(const std::string& path);

}  // namespace grqopt
