#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grqopt/baselines.hpp"
#include "grqopt/homotopy.hpp"
#include "grqopt/instance_gen.hpp"
#include "grqopt/rtr.hpp"

namespace grqopt {

// The six comparison methods. The p-prefixed ones run from both trivial
// starts and keep the higher-valued result; sdp needs no start.
enum class Method { Phom, Prtr, Pcsps, Psps, Ptrscf, Sdp };

const char* method_name(Method m);
std::optional<Method> parse_method(const std::string& name);
std::vector<Method> all_methods();

enum class OutcomeClass { Global, Local, Fail };
const char* outcome_class_name(OutcomeClass c);

struct Outcome {
    OutcomeClass cls = OutcomeClass::Fail;
    double value = 0.0;
    double elapsed = 0.0;  // seconds spent inside the method call only
    bool suspect = false;  // beat the certified global beyond tolerance
};

struct BenchConfig {
    double outcome_tol = 1e-4;
    double grad_tol = 1e-5;  // stationarity screen behind the Local class
    int jobs = 1;            // fan-out over instances; GRQ_OPT_THREADS caps it
    PhomConfig phom;
    RtrConfig rtr;  // inner config for prtr, pcsps, psps
    TrscfConfig trscf;
    SdpConfig sdp;
};

// Global when the value matches the record's certified optimum within
// outcome_tol relative; Local when stationary but strictly below it; Fail
// otherwise (including non-finite values). suspect marks values above the
// certified optimum beyond tolerance, which indicts the certificate, not the
// solver.
Outcome classify_outcome(const SolveResult& result, const DatasetRecord& record,
                         double outcome_tol = 1e-4, double grad_tol = 1e-5);

// One method on one instance, with elapsed covering the entire call
// (both starts for the p-variants).
SolveResult run_method(Method m, const ProblemInstance& inst, const BenchConfig& cfg);

struct MethodStats {
    Method method = Method::Phom;
    int count = 0;
    int global_count = 0;
    int local_count = 0;
    int fail_count = 0;
    int suspect_count = 0;
    double global_rate = 0.0;  // percent
    double local_rate = 0.0;
    double fail_rate = 0.0;
    std::optional<double> mean_ms_global;  // absent when the class is empty
    std::optional<double> mean_ms_local;
    std::optional<double> mean_ms_fail;
};

struct BenchReport {
    std::vector<MethodStats> methods;
    int instance_count = 0;
    double outcome_tol = 1e-4;
    double grad_tol = 1e-5;
};

// Runs every method over every record. Instances may be solved concurrently
// (one solve per worker at a time, so timings stay honest); aggregation is
// deterministic in record order. A method that throws on an instance counts
// as Fail there.
BenchReport run_benchmark(const std::vector<DatasetRecord>& records,
                          const std::vector<Method>& methods, const BenchConfig& cfg = {});
BenchReport run_benchmark(const std::string& dataset_path, const std::vector<Method>& methods,
                          const BenchConfig& cfg = {});

enum class ReportFormat { Csv, Json };

// CSV: one row per method, '.' decimals, empty cells for absent means.
// JSON: full report object, null for absent means.
void emit_report(const BenchReport& report, const std::string& path, ReportFormat format);

// The JSON form of emit_report as a string, for callers that do not want a file.
std::string report_json(const BenchReport& report);

BenchReport parse_report_json(const std::string& path);

}  // namespace grqopt
