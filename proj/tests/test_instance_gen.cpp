#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "grqopt/instance_gen.hpp"
#include "grqopt/io.hpp"
#include "grqopt/spectral.hpp"
#include "support/fixtures.hpp"

using namespace grqopt;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_SUITE("instance_gen") {

TEST_CASE("the seed scrambler matches its published stream") {
    std::uint64_t state = 0;
    CHECK(splitmix64(state) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64(state) == 0x6E789E6AA1B965F4ULL);
    CHECK(splitmix64(state) == 0x06C45D188009454FULL);
}

TEST_CASE("raw variates have the right support and rough shape") {
    std::mt19937_64 rng(77);
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = uniform01(rng);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double z = standard_normal(rng);
        sum += z;
        sumsq += z * z;
    }
    CHECK(std::abs(sum / n) <= 0.05);
    CHECK(std::abs(sumsq / n - 1.0) <= 0.05);

    // Heavy tails: with three degrees of freedom, |t| > 4 happens about two
    // orders of magnitude more often than for a gaussian.
    int extreme = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(student_t(rng, 3.0)) > 4.0) ++extreme;
    }
    CHECK(extreme > 50);

    CHECK_THROWS_AS(student_t(rng, 0.0), Error);
}

TEST_CASE("variates are a pure function of the generator state") {
    std::mt19937_64 a(123), b(123);
    for (int i = 0; i < 100; ++i) {
        CHECK(uniform01(a) == uniform01(b));
    }
    std::mt19937_64 c(123), d(123);
    for (int i = 0; i < 100; ++i) {
        CHECK(student_t(c, 3.0) == student_t(d, 3.0));
    }
}

TEST_CASE("low-discrepancy sphere points are unit, spread, and reproducible") {
    const Matrix pts = low_discrepancy_sphere(5, 64);
    CHECK(pts.rows() == 64);
    CHECK(pts.cols() == 5);
    double min_gap = 10.0;
    for (int i = 0; i < 64; ++i) {
        CHECK(pts.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = 0; j < i; ++j) {
            min_gap = std::min(min_gap, (pts.row(i) - pts.row(j)).norm());
        }
    }
    CHECK(min_gap > 1e-3);  // no duplicated directions
    CHECK(pts == low_discrepancy_sphere(5, 64));

    CHECK_THROWS_AS(low_discrepancy_sphere(1, 8), Error);
    CHECK_THROWS_AS(low_discrepancy_sphere(3, 0), Error);
}

TEST_CASE("sampled pairs are valid instances mirrored in B and D") {
    std::mt19937_64 rng(5150);
    const auto [first, second] = sample_instance_pair(4, 3.0, rng);
    CHECK((first.b() + second.b()).norm() == 0.0);
    CHECK((first.d() + second.d()).norm() == 0.0);
    CHECK((first.w() - second.w()).norm() == 0.0);
    CHECK((first.b() - first.b().transpose()).norm() == 0.0);
    // W is SPD by construction; ProblemInstance already gated it.
    CHECK_NOTHROW(cholesky_lower(first.w()));
}

TEST_CASE("triviality probe certifies the reference instance's two basins") {
    GenConfig cfg;
    cfg.q = 5;
    cfg.multistart_count = 64;
    const TrivialityResult res = classify_triviality(testsup::ref5(), cfg);
    CHECK(res.nontrivial);
    CHECK(res.distinct_basins >= 2);
    CHECK(std::abs(res.f_global - testsup::kRef5GlobalValue) <= 5e-3);
    REQUIRE(res.f_local_best.has_value());
    CHECK(std::abs(*res.f_local_best - testsup::kRef5LocalValue) <= 5e-3);

    CHECK(std::abs(objective(testsup::ref5(), res.x_global) - res.f_global) <= 1e-10);
    Vector oriented = res.x_global;
    fix_sign(oriented);
    CHECK(oriented == res.x_global);

    REQUIRE(res.cluster_values.size() == static_cast<std::size_t>(res.distinct_basins));
    for (std::size_t i = 1; i < res.cluster_values.size(); ++i) {
        CHECK(res.cluster_values[i - 1] > res.cluster_values[i]);
    }
    CHECK(res.cluster_values.front() == res.f_global);
}

TEST_CASE("triviality probe identifies antipodal copies as one basin") {
    // The Rayleigh quotient of a gapped matrix has a single maximizing
    // antipodal pair; the probe must not read +-v as two basins.
    Matrix b = Matrix::Zero(4, 4);
    b.diagonal() << 2.0, 1.0, 0.4, 0.1;
    const ProblemInstance inst(b, Matrix::Zero(4, 4), Matrix::Identity(4, 4));
    GenConfig cfg;
    cfg.q = 4;
    cfg.multistart_count = 32;
    const TrivialityResult res = classify_triviality(inst, cfg);
    CHECK(!res.nontrivial);
    CHECK(res.distinct_basins == 1);
    CHECK(res.f_global == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(!res.f_local_best.has_value());
}

TEST_CASE("triviality probe validates its configuration") {
    GenConfig cfg;
    cfg.multistart_count = 4;
    CHECK_THROWS_AS(classify_triviality(testsup::ref5(), cfg), Error);
    cfg = {};
    cfg.cluster_tol = 0.0;
    CHECK_THROWS_AS(classify_triviality(testsup::ref5(), cfg), Error);
}

TEST_CASE("dataset generation emits loadable, certified records") {
    GenConfig cfg;
    cfg.q = 3;
    cfg.count = 4;
    cfg.seed = 99;
    cfg.multistart_count = 16;
    const std::string path = "tmp_gen_dataset.jsonl";
    const GenSummary summary = generate_dataset(cfg, path);
    CHECK(summary.written == 4);
    CHECK(summary.attempts >= 4);
    CHECK(summary.trivial_rate >= 0.0);
    CHECK(summary.trivial_rate < 1.0);

    const auto [manifest, records] = load_dataset(path);
    CHECK(manifest.q == 3);
    CHECK(manifest.seed == 99);
    CHECK(manifest.count == 4);
    CHECK(manifest.multistart_count == 16);
    REQUIRE(records.size() == 4);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const DatasetRecord& rec = records[i];
        CHECK(rec.id == static_cast<std::int64_t>(i));
        CHECK(rec.nontrivial);
        CHECK(rec.distinct_basins >= 2);
        CHECK(rec.x_global.size() == 3);
        CHECK(std::abs(objective(rec.instance, rec.x_global) - rec.f_global) <= 1e-10);
        REQUIRE(rec.f_local_best.has_value());
        CHECK(*rec.f_local_best < rec.f_global);
    }
    std::remove(path.c_str());
}

TEST_CASE("identical configurations produce identical bytes") {
    GenConfig cfg;
    cfg.q = 3;
    cfg.count = 2;
    cfg.seed = 7;
    cfg.multistart_count = 16;
    generate_dataset(cfg, "tmp_gen_a.jsonl");
    generate_dataset(cfg, "tmp_gen_b.jsonl");
    cfg.seed = 8;
    generate_dataset(cfg, "tmp_gen_c.jsonl");

    const std::string a = slurp("tmp_gen_a.jsonl");
    CHECK(!a.empty());
    CHECK(a == slurp("tmp_gen_b.jsonl"));
    CHECK(a != slurp("tmp_gen_c.jsonl"));
    std::remove("tmp_gen_a.jsonl");
    std::remove("tmp_gen_b.jsonl");
    std::remove("tmp_gen_c.jsonl");
}

TEST_CASE("a zero-count run writes just the manifest") {
    GenConfig cfg;
    cfg.q = 3;
    cfg.count = 0;
    const GenSummary summary = generate_dataset(cfg, "tmp_gen_empty.jsonl");
    CHECK(summary.written == 0);
    const auto [manifest, records] = load_dataset("tmp_gen_empty.jsonl");
    CHECK(manifest.q == 3);
    CHECK(records.empty());
    std::remove("tmp_gen_empty.jsonl");
}

TEST_CASE("unwritable output path") {
    GenConfig cfg;
    cfg.count = 0;
    CHECK_THROWS_AS(generate_dataset(cfg, "no_such_dir/out.jsonl"), Error);
}

}  // TEST_SUITE
