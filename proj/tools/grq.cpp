// Thin shell over the C API: every computation goes through grqopt.h.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grqopt.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr double kDefaultGradTol = 1e-5;

const char* termination_label(int t) {
    switch (t) {
        case 0: return "GradTol";
        case 1: return "MaxIters";
        case 2: return "Degenerate";
        default: return "Unknown";
    }
}

int report_error(int rc) {
    std::cerr << "grq: " << grq_last_error() << "\n";
    // Numeric failures are the solver giving up, everything else is the
    // caller's problem (usage, unreadable or unwritable files).
    return rc == GRQ_ERR_NUMERIC ? 2 : 1;
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    grq_string_free(s);
    return out;
}

struct SolverFlags {
    int steps = 0;
    int inner_iters = 0;
    int final_iters = 0;
    int max_iters = 0;
    int mesh = 0;
    double gamma = 0.0;
    double grad_tol = 0.0;
    int jobs = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--steps", steps, "Homotopy steps");
        cmd->add_option("--inner-iters", inner_iters, "Trust-region iterations per homotopy step");
        cmd->add_option("--final-iters", final_iters, "Trust-region iterations at the last step");
        cmd->add_option("--max-iters", max_iters, "Trust-region iteration cap (prtr)");
        cmd->add_option("--mesh", mesh, "SDP mu-grid size");
        cmd->add_option("--gamma", gamma, "TRSCF level-shift factor");
        cmd->add_option("--grad-tol", grad_tol, "Stationarity tolerance");
        cmd->add_option("--jobs", jobs, "Worker threads (bench)");
    }

    json to_options(const CLI::App* cmd) const {
        json o = json::object();
        if (cmd->count("--steps")) o["steps"] = steps;
        if (cmd->count("--inner-iters")) o["inner_iters"] = inner_iters;
        if (cmd->count("--final-iters")) o["final_iters"] = final_iters;
        if (cmd->count("--max-iters")) o["max_iters"] = max_iters;
        if (cmd->count("--mesh")) o["mesh"] = mesh;
        if (cmd->count("--gamma")) o["gamma"] = gamma;
        if (cmd->count("--grad-tol")) o["grad_tol"] = grad_tol;
        if (cmd->count("--jobs")) o["jobs"] = jobs;
        return o;
    }
};

int run_solve(const std::string& path, const std::string& method, const json& opts) {
    grq_instance* inst = grq_instance_load(path.c_str());
    if (!inst) return report_error(GRQ_ERR_IO);
    const int q = grq_instance_dim(inst);
    std::vector<double> x(static_cast<std::size_t>(q), 0.0);
    grq_result res{};
    const std::string opts_text = opts.dump();
    const int rc = grq_solve(inst, method.c_str(), opts_text.c_str(), &res, x.data());
    grq_instance_free(inst);
    if (rc != GRQ_OK) return report_error(rc);

    json out;
    out["method"] = method;
    out["value"] = res.value;
    out["x"] = x;
    out["grad_norm"] = res.grad_norm;
    out["elapsed_ms"] = res.elapsed_seconds * 1000.0;
    out["termination"] = termination_label(res.termination);
    std::cout << out.dump() << "\n";

    const double tol = opts.contains("grad_tol") ? opts.at("grad_tol").get<double>() : kDefaultGradTol;
    return res.grad_norm <= tol ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grqopt: global maximization of a generalized Rayleigh quotient plus a quadratic"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Run one solver on an instance file");
    std::string solve_path;
    std::string method = "phom";
    solve->add_option("instance", solve_path, "Instance JSON file")->required();
    solve->add_option("--method", method, "Solver to run")
        ->check(CLI::IsMember({"phom", "prtr", "pcsps", "psps", "ptrscf", "sdp"}));
    SolverFlags solve_flags;
    solve_flags.attach(solve);

    // gen-dataset
    auto* gen = app.add_subcommand("gen-dataset", "Generate a classified instance dataset");
    int gen_q = 5;
    long long gen_count = 200;
    unsigned long long gen_seed = 0;
    double gen_dof = 3.0;
    int gen_multistart = 64;
    double gen_cluster_tol = 1e-6;
    std::string gen_out;
    gen->add_option("--q", gen_q, "Instance dimension");
    gen->add_option("--count", gen_count, "Nontrivial instances to keep");
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_option("--dof", gen_dof, "Student-t degrees of freedom");
    gen->add_option("--multistart-count", gen_multistart, "Polish starts per instance");
    gen->add_option("--cluster-tol", gen_cluster_tol, "Objective-value clustering tolerance");
    gen->add_option("--out", gen_out, "Output JSONL path")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run solvers over a dataset and tabulate outcomes");
    std::string bench_dataset;
    std::string bench_methods;
    std::string bench_out;
    std::string bench_format = "csv";
    bench->add_option("dataset", bench_dataset, "Dataset JSONL file")->required();
    bench->add_option("--methods", bench_methods, "Comma-separated subset (default: all)");
    bench->add_option("--out", bench_out, "Report output path");
    bench->add_option("--format", bench_format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    SolverFlags bench_flags;
    bench_flags.attach(bench);

    // gtls
    auto* gtls = app.add_subcommand("gtls", "Estimate two-source GTLS parameters");
    std::string gtls_path;
    gtls->add_option("sources", gtls_path, "Source matrices JSON file")->required();
    SolverFlags gtls_flags;
    gtls_flags.attach(gtls);

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "Report homotopy path diagnostics for an instance");
    std::string diag_path;
    std::vector<double> diag_x;
    double diag_tol = 1e-6;
    diag->add_option("instance", diag_path, "Instance JSON file")->required();
    diag->add_option("--x", diag_x, "Point to test for the dominant-eigenpair property");
    diag->add_option("--tol", diag_tol, "Eigenpair test tolerance");
    SolverFlags diag_flags;
    diag_flags.attach(diag);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (solve->parsed()) {
        return run_solve(solve_path, method, solve_flags.to_options(solve));
    }

    if (gen->parsed()) {
        json o;
        o["q"] = gen_q;
        o["count"] = gen_count;
        o["seed"] = gen_seed;
        o["dof"] = gen_dof;
        o["multistart_count"] = gen_multistart;
        o["cluster_tol"] = gen_cluster_tol;
        char* summary = nullptr;
        const int rc = grq_generate_dataset(gen_out.c_str(), o.dump().c_str(), &summary);
        if (rc != GRQ_OK) {
            report_error(rc);
            return 1;
        }
        std::cout << take_string(summary) << "\n";
        return 0;
    }

    if (bench->parsed()) {
        const json o = bench_flags.to_options(bench);
        char* summary = nullptr;
        const int rc = grq_benchmark(bench_dataset.c_str(), bench_methods.c_str(), o.dump().c_str(),
                                     bench_out.empty() ? nullptr : bench_out.c_str(),
                                     bench_format.c_str(), &summary);
        if (rc != GRQ_OK) {
            report_error(rc);
            return 1;
        }
        std::cout << take_string(summary) << "\n";
        return 0;
    }

    if (gtls->parsed()) {
        const json o = gtls_flags.to_options(gtls);
        char* result = nullptr;
        const int rc = grq_gtls(gtls_path.c_str(), o.dump().c_str(), &result);
        if (rc != GRQ_OK) return report_error(rc);
        std::cout << take_string(result) << "\n";
        return 0;
    }

    if (diag->parsed()) {
        json o = diag_flags.to_options(diag);
        if (diag->count("--x")) {
            o["x"] = diag_x;
            o["tol"] = diag_tol;
        }
        char* result = nullptr;
        const int rc = grq_diagnose(diag_path.c_str(), o.dump().c_str(), &result);
        if (rc != GRQ_OK) return report_error(rc);
        std::cout << take_string(result) << "\n";
        return 0;
    }

    return 1;
}
