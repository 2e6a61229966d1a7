#include "grqopt/bench.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include "grqopt/io.hpp"
#include "json.hpp"

namespace grqopt {

const char* method_name(Method m) {
    switch (m) {
        case Method::Phom: return "phom";
        case Method::Prtr: return "prtr";
        case Method::Pcsps: return "pcsps";
        case Method::Psps: return "psps";
        case Method::Ptrscf: return "ptrscf";
        case Method::Sdp: return "sdp";
    }
    return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
    for (Method m : all_methods()) {
        if (name == method_name(m)) return m;
    }
    return std::nullopt;
}

std::vector<Method> all_methods() {
    return {Method::Phom, Method::Prtr, Method::Pcsps, Method::Psps, Method::Ptrscf, Method::Sdp};
}

const char* outcome_class_name(OutcomeClass c) {
    switch (c) {
        case OutcomeClass::Global: return "Global";
        case OutcomeClass::Local: return "Local";
        case OutcomeClass::Fail: return "Fail";
    }
    return "unknown";
}

Outcome classify_outcome(const SolveResult& result, const DatasetRecord& record,
                         double outcome_tol, double grad_tol) {
    Outcome o;
    o.value = result.value;
    o.elapsed = result.elapsed;
    if (!std::isfinite(result.value)) {
        o.cls = OutcomeClass::Fail;
        return o;
    }
    const double fg = record.f_global;
    const double tol_eff = outcome_tol * (1.0 + std::abs(fg));
    o.suspect = result.value > fg + tol_eff;
    if (std::abs(result.value - fg) <= tol_eff) {
        o.cls = OutcomeClass::Global;
    } else if (result.grad_norm <= grad_tol && result.value < fg - outcome_tol) {
        o.cls = OutcomeClass::Local;
    } else {
        o.cls = OutcomeClass::Fail;
    }
    return o;
}

namespace {

template <typename Solve>
SolveResult best_of_starts(const ProblemInstance& inst, Solve&& solve_from) {
    const auto starts = trivial_starts(inst);
    std::optional<SolveResult> best;
    std::exception_ptr err;
    for (const SpherePoint* s : {&starts.first, &starts.second}) {
        try {
            SolveResult r = solve_from(*s);
            if (!best || r.value > best->value) best = std::move(r);
        } catch (...) {
            err = std::current_exception();
        }
    }
    if (!best) std::rethrow_exception(err);
    return *best;
}

int effective_jobs(int requested, std::size_t tasks) {
    int jobs = requested < 1 ? 1 : requested;
    if (const char* cap = std::getenv("GRQ_OPT_THREADS")) {
        const int lim = std::atoi(cap);
        if (lim >= 1 && lim < jobs) jobs = lim;
    }
    if (tasks < static_cast<std::size_t>(jobs)) jobs = static_cast<int>(tasks);
    return jobs < 1 ? 1 : jobs;
}

std::string fixed6(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    return std::string(buf, res.ptr);
}

}  // namespace

SolveResult run_method(Method m, const ProblemInstance& inst, const BenchConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult r;
    switch (m) {
        case Method::Phom:
            r = phom_solve(inst, cfg.phom);
            break;
        case Method::Prtr:
            r = best_of_starts(inst, [&](const SpherePoint& s) { return rtr_solve(inst, s, cfg.rtr); });
            break;
        case Method::Pcsps:
            r = best_of_starts(inst, [&](const SpherePoint& s) {
                return sps_solve(inst, s, SpsVariant::Consolidated, cfg.rtr);
            });
            break;
        case Method::Psps:
            r = best_of_starts(inst, [&](const SpherePoint& s) {
                return sps_solve(inst, s, SpsVariant::Original, cfg.rtr);
            });
            break;
        case Method::Ptrscf:
            r = best_of_starts(inst,
                               [&](const SpherePoint& s) { return trscf_solve(inst, s, cfg.trscf); });
            break;
        case Method::Sdp:
            r = sdp_solve(inst, cfg.sdp);
            break;
    }
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

BenchReport run_benchmark(const std::vector<DatasetRecord>& records,
                          const std::vector<Method>& methods, const BenchConfig& cfg) {
    BenchReport report;
    report.instance_count = static_cast<int>(records.size());
    report.outcome_tol = cfg.outcome_tol;
    report.grad_tol = cfg.grad_tol;

    std::vector<std::vector<Outcome>> outcomes(methods.size(),
                                               std::vector<Outcome>(records.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= records.size()) break;
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                const auto t0 = std::chrono::steady_clock::now();
                Outcome o;
                try {
                    const SolveResult r = run_method(methods[mi], records[i].instance, cfg);
                    o = classify_outcome(r, records[i], cfg.outcome_tol, cfg.grad_tol);
                } catch (...) {
                    o.cls = OutcomeClass::Fail;
                    o.value = std::numeric_limits<double>::quiet_NaN();
                    o.elapsed =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                }
                outcomes[mi][i] = o;
            }
        }
    };

    const int jobs = effective_jobs(cfg.jobs, records.size());
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        MethodStats st;
        st.method = methods[mi];
        st.count = static_cast<int>(records.size());
        double sum_g = 0.0, sum_l = 0.0, sum_f = 0.0;
        for (const Outcome& o : outcomes[mi]) {
            switch (o.cls) {
                case OutcomeClass::Global:
                    ++st.global_count;
                    sum_g += o.elapsed;
                    break;
                case OutcomeClass::Local:
                    ++st.local_count;
                    sum_l += o.elapsed;
                    break;
                case OutcomeClass::Fail:
                    ++st.fail_count;
                    sum_f += o.elapsed;
                    break;
            }
            if (o.suspect) ++st.suspect_count;
        }
        if (st.count > 0) {
            st.global_rate = 100.0 * st.global_count / st.count;
            st.local_rate = 100.0 * st.local_count / st.count;
            st.fail_rate = 100.0 * st.fail_count / st.count;
        }
        if (st.global_count > 0) st.mean_ms_global = 1000.0 * sum_g / st.global_count;
        if (st.local_count > 0) st.mean_ms_local = 1000.0 * sum_l / st.local_count;
        if (st.fail_count > 0) st.mean_ms_fail = 1000.0 * sum_f / st.fail_count;
        report.methods.push_back(st);
    }
    return report;
}

BenchReport run_benchmark(const std::string& dataset_path, const std::vector<Method>& methods,
                          const BenchConfig& cfg) {
    return run_benchmark(load_dataset(dataset_path).second, methods, cfg);
}

void emit_report(const BenchReport& report, const std::string& path, ReportFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("emit_report: cannot open " + path + " for writing");

    if (format == ReportFormat::Csv) {
        out << "method,instances,global_pct,local_pct,fail_pct,"
               "global_mean_ms,local_mean_ms,fail_mean_ms,suspect\n";
        for (const MethodStats& st : report.methods) {
            out << method_name(st.method) << ',' << st.count << ',' << fixed6(st.global_rate)
                << ',' << fixed6(st.local_rate) << ',' << fixed6(st.fail_rate) << ','
                << (st.mean_ms_global ? fixed6(*st.mean_ms_global) : "") << ','
                << (st.mean_ms_local ? fixed6(*st.mean_ms_local) : "") << ','
                << (st.mean_ms_fail ? fixed6(*st.mean_ms_fail) : "") << ',' << st.suspect_count
                << '\n';
        }
    } else {
        out << report_json(report) << '\n';
    }
    out.flush();
    if (!out) throw IoError("emit_report: write to " + path + " failed");
}

std::string report_json(const BenchReport& report) {
    nlohmann::json j;
    j["instance_count"] = report.instance_count;
    j["outcome_tol"] = report.outcome_tol;
    j["grad_tol"] = report.grad_tol;
    j["methods"] = nlohmann::json::array();
    for (const MethodStats& st : report.methods) {
        nlohmann::json m;
        m["method"] = method_name(st.method);
        m["count"] = st.count;
        m["global_count"] = st.global_count;
        m["local_count"] = st.local_count;
        m["fail_count"] = st.fail_count;
        m["suspect_count"] = st.suspect_count;
        m["global_rate"] = st.global_rate;
        m["local_rate"] = st.local_rate;
        m["fail_rate"] = st.fail_rate;
        m["mean_ms_global"] =
            st.mean_ms_global ? nlohmann::json(*st.mean_ms_global) : nlohmann::json(nullptr);
        m["mean_ms_local"] =
            st.mean_ms_local ? nlohmann::json(*st.mean_ms_local) : nlohmann::json(nullptr);
        m["mean_ms_fail"] =
            st.mean_ms_fail ? nlohmann::json(*st.mean_ms_fail) : nlohmann::json(nullptr);
        j["methods"].push_back(std::move(m));
    }
    return j.dump(2);
}

BenchReport parse_report_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("parse_report_json: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("parse_report_json: " + path + ": " + e.what());
    }

    BenchReport report;
    report.instance_count = j.at("instance_count").get<int>();
    report.outcome_tol = j.at("outcome_tol").get<double>();
    report.grad_tol = j.at("grad_tol").get<double>();
    for (const nlohmann::json& m : j.at("methods")) {
        MethodStats st;
        const auto parsed = parse_method(m.at("method").get<std::string>());
        if (!parsed) throw Error("parse_report_json: unknown method " + m.at("method").dump());
        st.method = *parsed;
        st.count = m.at("count").get<int>();
        st.global_count = m.at("global_count").get<int>();
        st.local_count = m.at("local_count").get<int>();
        st.fail_count = m.at("fail_count").get<int>();
        st.suspect_count = m.at("suspect_count").get<int>();
        st.global_rate = m.at("global_rate").get<double>();
        st.local_rate = m.at("local_rate").get<double>();
        st.fail_rate = m.at("fail_rate").get<double>();
        if (!m.at("mean_ms_global").is_null()) st.mean_ms_global = m.at("mean_ms_global").get<double>();
        if (!m.at("mean_ms_local").is_null()) st.mean_ms_local = m.at("mean_ms_local").get<double>();
        if (!m.at("mean_ms_fail").is_null()) st.mean_ms_fail = m.at("mean_ms_fail").get<double>();
        report.methods.push_back(st);
    }
    return report;
}

}  // namespace grqopt
