#include "grqopt.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

#include "grqopt/baselines.hpp"
#include "grqopt/bench.hpp"
#include "grqopt/gtls.hpp"
#include "grqopt/homotopy.hpp"
#include "grqopt/instance_gen.hpp"
#include "grqopt/io.hpp"
#include "grqopt/problem.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

int fail(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

// The numeric subclasses signal a failure of the computation; anything else
// derived from Error means the inputs were unusable.
int code_for(const std::exception& e) {
    if (dynamic_cast<const grqopt::IoError*>(&e)) return GRQ_ERR_IO;
    if (dynamic_cast<const grqopt::NotPositiveDefinite*>(&e) ||
        dynamic_cast<const grqopt::NoConvergence*>(&e) ||
        dynamic_cast<const grqopt::NonTangentInput*>(&e) ||
        dynamic_cast<const grqopt::DegenerateRetraction*>(&e) ||
        dynamic_cast<const grqopt::RecoveryFailed*>(&e) ||
        dynamic_cast<const grqopt::OuterCapExceeded*>(&e) ||
        dynamic_cast<const grqopt::SamplingFailed*>(&e) ||
        dynamic_cast<const grqopt::ClassificationFailed*>(&e) ||
        dynamic_cast<const grqopt::BothBranchesFailed*>(&e) ||
        dynamic_cast<const grqopt::SolutionAtInfinity*>(&e)) {
        return GRQ_ERR_NUMERIC;
    }
    if (dynamic_cast<const grqopt::Error*>(&e)) return GRQ_ERR_INVALID;
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) return GRQ_ERR_INVALID;
    return GRQ_ERR_UNKNOWN;
}

json parse_options(const char* options_json) {
    if (!options_json || !*options_json) return json::object();
    json j = json::parse(options_json);  // throws on malformed input
    if (!j.is_object()) throw grqopt::Error("options must be a JSON object");
    return j;
}

template <typename T>
void get_to(const json& o, const char* key, T& out) {
    if (o.contains(key)) out = o.at(key).get<T>();
}

grqopt::BenchConfig bench_config_from(const json& o) {
    grqopt::BenchConfig c;
    get_to(o, "outcome_tol", c.outcome_tol);
    get_to(o, "jobs", c.jobs);
    if (o.contains("grad_tol")) {
        const double g = o.at("grad_tol").get<double>();
        c.grad_tol = g;
        c.rtr.grad_tol = g;
        c.phom.inner.grad_tol = g;
        c.phom.inner_final.grad_tol = g;
        c.trscf.residual_tol = g;
    }
    get_to(o, "max_iters", c.rtr.max_iters);
    get_to(o, "steps", c.phom.steps);
    get_to(o, "inner_iters", c.phom.inner.max_iters);
    get_to(o, "final_iters", c.phom.inner_final.max_iters);
    get_to(o, "geometric", c.phom.geometric);
    get_to(o, "gamma", c.trscf.gamma);
    get_to(o, "trscf_iters", c.trscf.max_iters);
    get_to(o, "mesh", c.sdp.mesh_size);
    get_to(o, "qfs_iters", c.sdp.qfs_max_iters);
    get_to(o, "eps_mu", c.sdp.eps_mu);
    get_to(o, "eps_lambda", c.sdp.eps_lambda);
    get_to(o, "dual_search_tol", c.sdp.dual_search_tol);
    return c;
}

json vector_json(const grqopt::Vector& v) {
    json a = json::array();
    for (grqopt::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

}  // namespace

struct grq_instance {
    grqopt::ProblemInstance inst;
};

extern "C" {

const char* grq_version(void) { return "0.1.0"; }

const char* grq_last_error(void) { return g_last_error.c_str(); }

void grq_string_free(char* s) { std::free(s); }

grq_instance* grq_instance_load(const char* path) {
    if (!path) {
        fail(GRQ_ERR_INVALID, "grq_instance_load: path is null");
        return nullptr;
    }
    try {
        return new grq_instance{grqopt::load_instance(path)};
    } catch (const std::exception& e) {
        fail(code_for(e), e.what());
        return nullptr;
    }
}

grq_instance* grq_instance_create(int q, const double* b, const double* d, const double* w) {
    if (q < 2 || !b || !d || !w) {
        fail(GRQ_ERR_INVALID, "grq_instance_create: need q >= 2 and non-null matrices");
        return nullptr;
    }
    try {
        auto fill = [q](const double* src) {
            grqopt::Matrix m(q, q);
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) m(i, j) = src[i * q + j];
            return m;
        };
        return new grq_instance{grqopt::ProblemInstance(fill(b), fill(d), fill(w))};
    } catch (const std::exception& e) {
        fail(code_for(e), e.what());
        return nullptr;
    }
}

void grq_instance_free(grq_instance* inst) { delete inst; }

int grq_instance_dim(const grq_instance* inst) {
    return inst ? static_cast<int>(inst->inst.dim()) : 0;
}

int grq_objective(const grq_instance* inst, const double* x, double* value, double* grad_norm) {
    if (!inst || !x) return fail(GRQ_ERR_INVALID, "grq_objective: null argument");
    try {
        const grqopt::Index q = inst->inst.dim();
        grqopt::Vector v(q);
        std::copy(x, x + q, v.data());
        const grqopt::SpherePoint p(v);  // validates unit norm
        if (value) *value = grqopt::objective(inst->inst, p.vec());
        if (grad_norm) *grad_norm = grqopt::riemannian_gradient(inst->inst, p.vec()).norm();
        return GRQ_OK;
    } catch (const std::exception& e) {
        return fail(code_for(e), e.what());
    }
}

int grq_solve(const grq_instance* inst, const char* method, const char* options_json,
              grq_result* result, double* x_out) {
    if (!inst || !method || !result) return fail(GRQ_ERR_INVALID, "grq_solve: null argument");
    try {
        const auto m = grqopt::parse_method(method);
        if (!m) return fail(GRQ_ERR_INVALID, std::string("grq_solve: unknown method: ") + method);
        const grqopt::BenchConfig cfg = bench_config_from(parse_options(options_json));
        const grqopt::SolveResult r = grqopt::run_method(*m, inst->inst, cfg);
        result->value = r.value;
        result->grad_norm = r.grad_norm;
        result->elapsed_seconds = r.elapsed;
        result->iterations = r.iterations;
        result->termination = static_cast<int>(r.termination);
        if (x_out) std::copy(r.x.data(), r.x.data() + r.x.size(), x_out);
        return GRQ_OK;
    } catch (const std::exception& e) {
        return fail(code_for(e), e.what());
    }
}

int grq_generate_dataset(const char* out_path, const char* options_json, char** summary_json) {
    if (!out_path) return fail(GRQ_ERR_INVALID, "grq_generate_dataset: out_path is null");
    try {
        const json o = parse_options(options_json);
        grqopt::GenConfig cfg;
        get_to(o, "q", cfg.q);
        get_to(o, "count", cfg.count);
        get_to(o, "seed", cfg.seed);
        get_to(o, "dof", cfg.dof);
        get_to(o, "multistart_count", cfg.multistart_count);
        get_to(o, "cluster_tol", cfg.cluster_tol);
        const grqopt::GenSummary s = grqopt::generate_dataset(cfg, out_path);
        if (summary_json) {
            json j;
            j["attempts"] = s.attempts;
            j["written"] = s.written;
            j["trivial_rate"] = s.trivial_rate;
            j["elapsed_seconds"] = s.elapsed;
            *summary_json = dup_string(j.dump());
        }
        return GRQ_OK;
    } catch (const std::exception& e) {
        return fail(code_for(e), e.what());
    }
}

int grq_benchmark(const char* dataset_path, const char* methods_csv, const char* options_json,
                  const char* report_path, const char* format, char** summary_json) {
    if (!dataset_path) return fail(GRQ_ERR_INVALID, "grq_benchmark: dataset_path is null");
    try {
        std::vector<grqopt::Method> methods;
        if (!methods_csv || !*methods_csv) {
            methods = grqopt::all_methods();
        } else {
            std::string list = methods_csv;
            std::size_t pos = 0;
            while (pos <= list.size()) {
                const std::size_t comma = list.find(',', pos);
                const std::string tok =
                    list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
                if (!tok.empty()) {
                    const auto m = grqopt::parse_method(tok);
                    if (!m) {
                        return fail(GRQ_ERR_INVALID, "grq_benchmark: unknown method: " + tok);
                    }
                    methods.push_back(*m);
                }
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            if (methods.empty()) return fail(GRQ_ERR_INVALID, "grq_benchmark: empty method list");
        }

        const grqopt::BenchConfig cfg = bench_config_from(parse_options(options_json));
        const grqopt::BenchReport report = grqopt::run_benchmark(dataset_path, methods, cfg);
        if (report_path && *report_path) {
            grqopt::ReportFormat fmt = grqopt::ReportFormat::Csv;
            const std::string f = format ? format : "csv";
            if (f == "json") {
                fmt = grqopt::ReportFormat::Json;
            } else if (f != "csv") {
                return fail(GRQ_ERR_INVALID, "grq_benchmark: format must be csv or json");
            }
            grqopt::emit_report(report, report_path, fmt);
        }
        if (summary_json) *summary_json = dup_string(grqopt::report_json(report));
        return GRQ_OK;
    } catch (const std::exception& e) {
        return fail(code_for(e), e.what());
    }
}

int grq_gtls(const char* sources_path, const char* options_json, char** result_json) {
    if (!sources_path) return fail(GRQ_ERR_INVALID, "grq_gtls: sources_path is null");
    try {
        const grqopt::GtlsSources sources = grqopt::load_gtls_sources(sources_path);
        const grqopt::BenchConfig cfg = bench_config_from(parse_options(options_json));
        const grqopt::GtlsResult res = grqopt::gtls_solve(sources, cfg.phom);
        if (result_json) {
            json j;
            j["tau"] = vector_json(res.tau);
            j["value"] = res.solve.value;
            j["grad_norm"] = res.solve.grad_norm;
            j["h1_value"] = res.h1_value;
            j["h2_value"] = res.h2_value;
            j["elapsed_seconds"] = res.solve.elapsed;
            *result_json = dup_string(j.dump());
        }
        return GRQ_OK;
    } catch (const std::exception& e) {
        return fail(code_for(e), e.what());
    }
}

int grq_diagnose(const char* instance_path, const char* options_json, char** result_json) {
    if (!instance_path) return fail(GRQ_ERR_INVALID, "grq_diagnose: instance_path is null");
    try {
        const grqopt::ProblemInstance inst = grqopt::load_instance(instance_path);
        const json o = parse_options(options_json);
        const grqopt::BenchConfig cfg = bench_config_from(o);

        json j;
        const grqopt::PathDiagnostics diag = grqopt::path_diagnostics(inst, cfg.phom);
        json records = json::array();
        for (const grqopt::PathRecord& rec : diag.records) {
            json r;
            r["branch"] = grqopt::branch_name(rec.branch);
            r["lambda"] = rec.lambda;
            r["min_abs_hessian_eigenvalue"] = rec.min_abs_hessian_eigenvalue;
            r["displacement"] = rec.displacement;
            r["degenerate"] = rec.degenerate;
            records.push_back(std::move(r));
        }
        j["path_records"] = std::move(records);

        if (o.contains("x")) {
            grqopt::Vector x(inst.dim());
            const json& arr = o.at("x");
            if (!arr.is_array() || static_cast<grqopt::Index>(arr.size()) != inst.dim()) {
                return fail(GRQ_ERR_INVALID, "grq_diagnose: x must hold q numbers");
            }
            for (grqopt::Index i = 0; i < inst.dim(); ++i) {
                x(i) = arr.at(static_cast<std::size_t>(i)).get<double>();
            }
            double tol = 1e-6;
            get_to(o, "tol", tol);
            const grqopt::SpherePoint p(x);
            json chk;
            chk["holds"] = grqopt::is_top_eigenpair(inst, p, tol);
            chk["tol"] = tol;
            chk["value"] = grqopt::objective(inst, p.vec());
            chk["grad_norm"] = grqopt::riemannian_gradient(inst, p.vec()).norm();
            j["eigenpair_check"] = std::move(chk);
        }
        if (result_json) *result_json = dup_string(j.dump());
        return GRQ_OK;
    } catch (const std::exception& e) {
        return fail(code_for(e), e.what());
    }
}

}  // extern "C"
