#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "grqopt.h"
#include "grqopt/io.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    grq_string_free(s);
    return out;
}

void write_ref5(const std::string& path) { grqopt::save_instance(testsup::ref5(), path); }

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and error plumbing") {
    CHECK(std::strcmp(grq_version(), "0.1.0") == 0);
    CHECK(grq_instance_load(nullptr) == nullptr);
    CHECK(std::string(grq_last_error()).find("null") != std::string::npos);
    grq_string_free(nullptr);  // must be a no-op
}

TEST_CASE("instances from buffers and from files") {
    const grqopt::ProblemInstance ref = testsup::ref5();
    std::vector<double> b(25), d(25), w(25);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            b[static_cast<std::size_t>(i * 5 + j)] = ref.b()(i, j);
            d[static_cast<std::size_t>(i * 5 + j)] = ref.d()(i, j);
            w[static_cast<std::size_t>(i * 5 + j)] = ref.w()(i, j);
        }
    }
    grq_instance* inst = grq_instance_create(5, b.data(), d.data(), w.data());
    REQUIRE(inst != nullptr);
    CHECK(grq_instance_dim(inst) == 5);

    const grqopt::Vector x = testsup::ref5_global_point().vec();
    double value = 0.0, grad = 0.0;
    CHECK(grq_objective(inst, x.data(), &value, &grad) == GRQ_OK);
    CHECK(std::abs(value - testsup::kRef5GlobalValue) <= 5e-3);
    CHECK(grad >= 0.0);
    grq_instance_free(inst);

    write_ref5("tmp_capi_ref5.json");
    grq_instance* loaded = grq_instance_load("tmp_capi_ref5.json");
    REQUIRE(loaded != nullptr);
    CHECK(grq_instance_dim(loaded) == 5);
    grq_instance_free(loaded);
    std::remove("tmp_capi_ref5.json");

    CHECK(grq_instance_load("tmp_capi_missing.json") == nullptr);
    CHECK(grq_instance_create(0, b.data(), d.data(), w.data()) == nullptr);

    // W not positive definite is a numeric rejection, not a usage one.
    std::vector<double> wneg(25, 0.0);
    for (int i = 0; i < 5; ++i) wneg[static_cast<std::size_t>(i * 5 + i)] = -1.0;
    CHECK(grq_instance_create(5, b.data(), d.data(), wneg.data()) == nullptr);
}

TEST_CASE("objective rejects off-sphere points") {
    write_ref5("tmp_capi_obj.json");
    grq_instance* inst = grq_instance_load("tmp_capi_obj.json");
    REQUIRE(inst != nullptr);
    std::vector<double> x(5, 1.0);  // norm sqrt(5)
    double value = 0.0;
    CHECK(grq_objective(inst, x.data(), &value, nullptr) == GRQ_ERR_INVALID);
    grq_instance_free(inst);
    std::remove("tmp_capi_obj.json");
}

TEST_CASE("solve dispatches methods and honors options") {
    write_ref5("tmp_capi_solve.json");
    grq_instance* inst = grq_instance_load("tmp_capi_solve.json");
    REQUIRE(inst != nullptr);

    grq_result res{};
    std::vector<double> x(5, 0.0);
    CHECK(grq_solve(inst, "phom", nullptr, &res, x.data()) == GRQ_OK);
    CHECK(std::abs(res.value - testsup::kRef5GlobalValue) <= 5e-3);
    CHECK(res.grad_norm <= 1e-5);
    CHECK(res.termination == 0);
    CHECK(res.iterations > 0);
    double norm = 0.0;
    for (double xi : x) norm += xi * xi;
    CHECK(std::abs(norm - 1.0) <= 1e-10);

    // The relaxation with its published mesh lands on the spurious mode.
    CHECK(grq_solve(inst, "sdp", R"({"mesh": 10})", &res, nullptr) == GRQ_OK);
    CHECK(std::abs(res.value - testsup::kRef5LocalValue) <= 5e-3);

    CHECK(grq_solve(inst, "newton", nullptr, &res, nullptr) == GRQ_ERR_INVALID);
    CHECK(grq_solve(inst, "phom", "{bad json", &res, nullptr) != GRQ_OK);
    CHECK(grq_solve(inst, "phom", R"(["not an object"])", &res, nullptr) == GRQ_ERR_INVALID);
    CHECK(grq_solve(nullptr, "phom", nullptr, &res, nullptr) == GRQ_ERR_INVALID);

    grq_instance_free(inst);
    std::remove("tmp_capi_solve.json");
}

TEST_CASE("dataset generation and benchmarking through the flat interface") {
    char* summary = nullptr;
    const char* gen_opts = R"({"q": 3, "count": 2, "seed": 11, "multistart_count": 16})";
    REQUIRE(grq_generate_dataset("tmp_capi_data.jsonl", gen_opts, &summary) == GRQ_OK);
    const nlohmann::json gen = nlohmann::json::parse(take(summary));
    CHECK(gen.at("written").get<int>() == 2);
    CHECK(gen.at("attempts").get<int>() >= 2);

    summary = nullptr;
    REQUIRE(grq_benchmark("tmp_capi_data.jsonl", "phom,prtr", nullptr, "tmp_capi_report.csv",
                          "csv", &summary) == GRQ_OK);
    const nlohmann::json rep = nlohmann::json::parse(take(summary));
    CHECK(rep.at("instance_count").get<int>() == 2);
    REQUIRE(rep.at("methods").size() == 2);
    CHECK(rep.at("methods")[0].at("method").get<std::string>() == "phom");
    CHECK(rep.at("methods")[0].at("global_count").get<int>() == 2);
    std::remove("tmp_capi_report.csv");

    CHECK(grq_benchmark("tmp_capi_data.jsonl", "warp", nullptr, nullptr, nullptr, nullptr) ==
          GRQ_ERR_INVALID);
    CHECK(grq_benchmark("tmp_capi_nodata.jsonl", nullptr, nullptr, nullptr, nullptr, nullptr) ==
          GRQ_ERR_IO);
    std::remove("tmp_capi_data.jsonl");

    CHECK(grq_generate_dataset("no_such_dir/x.jsonl", R"({"count": 0})", nullptr) == GRQ_ERR_IO);
}

TEST_CASE("estimation and diagnostics endpoints") {
    // A rank-one-plus-floor likelihood peaked at known parameters.
    grqopt::Vector tau(3);
    tau << 0.4, -1.2, 0.9;
    grqopt::Vector theta(4);
    theta << tau, -1.0;
    theta.normalize();
    grqopt::GtlsSources s;
    s.omega1 = 3.0 * theta * theta.transpose() + 0.05 * grqopt::Matrix::Identity(4, 4);
    s.omega2 = 2.0 * theta * theta.transpose() + 0.01 * grqopt::Matrix::Identity(4, 4);
    s.sigma1 = grqopt::Matrix::Identity(4, 4);
    s.sigma2 = grqopt::Matrix::Identity(4, 4);
    grqopt::save_gtls_sources(s, "tmp_capi_sources.json");

    char* result = nullptr;
    REQUIRE(grq_gtls("tmp_capi_sources.json", nullptr, &result) == GRQ_OK);
    const nlohmann::json g = nlohmann::json::parse(take(result));
    REQUIRE(g.at("tau").size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(g.at("tau")[static_cast<std::size_t>(i)].get<double>() - tau(i)) <= 1e-5);
    }
    CHECK(g.at("grad_norm").get<double>() <= 1e-5);
    std::remove("tmp_capi_sources.json");
    CHECK(grq_gtls("tmp_capi_nosources.json", nullptr, nullptr) == GRQ_ERR_IO);

    write_ref5("tmp_capi_diag.json");
    result = nullptr;
    REQUIRE(grq_diagnose("tmp_capi_diag.json", R"({"steps": 3})", &result) == GRQ_OK);
    const nlohmann::json d = nlohmann::json::parse(take(result));
    CHECK(d.at("path_records").size() == 8);
    CHECK(!d.contains("eigenpair_check"));

    // Pass the polished global maximizer in and ask for the eigenpair test.
    const grqopt::SolveResult polished = testsup::polish(testsup::ref5(),
                                                         testsup::ref5_global_point());
    nlohmann::json opts;
    opts["steps"] = 3;
    opts["x"] = std::vector<double>(polished.x.data(), polished.x.data() + 5);
    result = nullptr;
    REQUIRE(grq_diagnose("tmp_capi_diag.json", opts.dump().c_str(), &result) == GRQ_OK);
    const nlohmann::json d2 = nlohmann::json::parse(take(result));
    REQUIRE(d2.contains("eigenpair_check"));
    CHECK(d2.at("eigenpair_check").at("holds").get<bool>());
    CHECK(std::abs(d2.at("eigenpair_check").at("value").get<double>() -
                   testsup::kRef5GlobalValue) <= 5e-3);
    std::remove("tmp_capi_diag.json");
}

}  // TEST_SUITE
