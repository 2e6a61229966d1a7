#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace grqopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Root of everything thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

struct NonTangentInput : Error {
    explicit NonTangentInput(const std::string& what) : Error(what) {}
};

struct DegenerateRetraction : Error {
    explicit DegenerateRetraction(const std::string& what) : Error(what) {}
};

struct RecoveryFailed : Error {
    explicit RecoveryFailed(const std::string& what) : Error(what) {}
};

struct OuterCapExceeded : Error {
    explicit OuterCapExceeded(const std::string& what) : Error(what) {}
};

struct SamplingFailed : Error {
    explicit SamplingFailed(const std::string& what) : Error(what) {}
};

struct ClassificationFailed : Error {
    explicit ClassificationFailed(const std::string& what) : Error(what) {}
};

struct BothBranchesFailed : Error {
    explicit BothBranchesFailed(const std::string& what) : Error(what) {}
};

struct SolutionAtInfinity : Error {
    explicit SolutionAtInfinity(const std::string& what) : Error(what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace grqopt
