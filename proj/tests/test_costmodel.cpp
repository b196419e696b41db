#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pom/bench.hpp"
#include "pom/costmodel.hpp"
#include "pom/rng.hpp"

using namespace pom;

TEST_CASE("flops_pom: direct evaluations") {
    CHECK(flops_pom(1000, 8, 16, 2) == 432000);
    CHECK(flops_pom(1, 1, 1, 1) == 5);
}

TEST_CASE("flops_pom: exactly linear in n") {
    for (std::int64_t n : {1, 7, 64, 4096}) {
        CHECK(flops_pom(2 * n, 8, 16, 2) == 2 * flops_pom(n, 8, 16, 2));
        CHECK(flops_pom(n, 8, 16, 2) % n == 0);
    }
}

TEST_CASE("flops_mha: direct evaluations") {
    CHECK(flops_mha(1000, 8) == 16256000);
    CHECK(flops_mha(1, 1) == 6);
}

TEST_CASE("flops_mha: doubling ratio approaches 4 at large n") {
    const std::int64_t n = 1 << 16;
    const double ratio = double(flops_mha(2 * n, 8)) / double(flops_mha(n, 8));
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.0);
}

TEST_CASE("flops_mha: per-token cost strictly increases with n") {
    double prev = 0.0;
    for (std::int64_t n = 1; n <= 4096; n *= 2) {
        const double per_token = double(flops_mha(n, 16)) / double(n);
        CHECK(per_token > prev);
        prev = per_token;
    }
}

TEST_CASE("cost model rejects degenerate dimensions") {
    CHECK_THROWS_AS(flops_pom(0, 8, 16, 2), DomainError);
    CHECK_THROWS_AS(flops_pom(8, 8, 16, 0), DomainError);
    CHECK_THROWS_AS(flops_mha(8, 0), DomainError);
    CHECK_THROWS_AS(crossover_n(0, 1, 1), DomainError);
}

TEST_CASE("crossover_n: paper operating point and direct evaluations") {
    CHECK(crossover_n(512, 1024, 2) == 515);  // D = 2d, k = 2 at d = 512
    CHECK(crossover_n(8, 8, 2) == 1);         // negative bound clamps to 1
    CHECK(crossover_n(4, 16, 3) == 24);
}

TEST_CASE("crossover_n: recommended setting reduces to d + 3") {
    for (std::int64_t d = 1; d <= 1024; ++d) CHECK(crossover_n(d, 2 * d, 2) == d + 3);
}

TEST_CASE("crossover consistency: cost ordering flips at the crossover") {
    Rng rng(55);
    std::size_t tested = 0;
    while (tested < 200) {
        const std::int64_t d = 1 + std::int64_t(rng.uniform01() * 48);
        const std::int64_t D = 1 + std::int64_t(rng.uniform01() * 256);
        const std::int64_t k = 1 + std::int64_t(rng.uniform01() * 5);
        const std::int64_t c = crossover_n(d, D, k);
        if (c <= 1) continue;
        ++tested;
        CHECK(flops_pom(c, d, D, k) <= flops_mha(c, d));
        CHECK(flops_pom(c - 1, d, D, k) > flops_mha(c - 1, d));
        // Strict at c except when the bound lands on an exact integer tie.
        const std::int64_t num = D * (3 * d + k + 1) - 4 * d * d;
        if (num % (2 * d) != 0) CHECK(flops_pom(c, d, D, k) < flops_mha(c, d));
    }
}

TEST_CASE("crossover tie: D = 2d, k = 2 costs are exactly equal at the crossover") {
    for (std::int64_t d : {1, 2, 16, 512}) {
        const std::int64_t c = crossover_n(d, 2 * d, 2);
        CHECK(flops_pom(c, d, 2 * d, 2) == flops_mha(c, d));
        CHECK(flops_pom(c - 1 > 0 ? c - 1 : 1, d, 2 * d, 2) >=
              flops_mha(c - 1 > 0 ? c - 1 : 1, d));
    }
}

TEST_CASE("cost_report bundles the three quantities") {
    CostReport r = cost_report(100, 8, 16, 2);
    CHECK(r.pom_mults == flops_pom(100, 8, 16, 2));
    CHECK(r.mha_mults == flops_mha(100, 8));
    CHECK(r.crossover_n == crossover_n(8, 16, 2));
}

// ---------------------------------------------------------------------------
// bench harness
// ---------------------------------------------------------------------------

TEST_CASE("run_bench: a one-point sweep echoes its parameters") {
    BenchSpec spec;
    spec.variant = BenchVariant::Pom;
    spec.n_values = {16};
    spec.d = 4;
    spec.D = 8;
    spec.k = 2;
    spec.repeats = 3;
    spec.seed = 5;
    auto recs = run_bench(spec);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].variant == BenchVariant::Pom);
    CHECK(recs[0].n == 16);
    CHECK(recs[0].repeats == 3);
    CHECK(recs[0].precision == "f64");
    CHECK(!recs[0].skipped);
    CHECK(recs[0].wall_seconds > 0.0);
}

TEST_CASE("run_bench: validates its spec") {
    BenchSpec spec;
    spec.n_values = {16, 8};
    CHECK_THROWS_AS(run_bench(spec), DomainError);
    spec.n_values = {8, 16};
    spec.repeats = 2;
    CHECK_THROWS_AS(run_bench(spec), DomainError);
}

TEST_CASE("run_bench: 32-bit opt-in path works for both variants") {
    BenchSpec spec;
    spec.n_values = {16};
    spec.d = 4;
    spec.D = 8;
    spec.k = 2;
    spec.repeats = 3;
    spec.seed = 9;
    spec.use_f32 = true;
    for (auto v : {BenchVariant::Pom, BenchVariant::Mha}) {
        spec.variant = v;
        auto recs = run_bench(spec);
        REQUIRE(recs.size() == 1);
        CHECK(recs[0].precision == "f32");
        CHECK(!recs[0].skipped);
    }
}

TEST_CASE("bench inputs are deterministic in the seed") {
    Matrix a = make_bench_input<double>(7, 8, 32);
    Matrix b = make_bench_input<double>(7, 8, 32);
    CHECK(a.bit_equal(b));
    Matrix c = make_bench_input<double>(8, 8, 32);
    CHECK(!a.bit_equal(c));
    MatrixF f1 = make_bench_input<float>(7, 8, 32);
    MatrixF f2 = make_bench_input<float>(7, 8, 32);
    CHECK(f1.bit_equal(f2));
}

TEST_CASE("csv output is deterministic and carries the fixed columns") {
    BenchSpec spec;
    spec.variant = BenchVariant::Mha;
    spec.d = 4;
    spec.D = 8;
    spec.k = 2;
    std::vector<BenchRecord> recs(2);
    recs[0].variant = BenchVariant::Mha;
    recs[0].n = 64;
    recs[0].repeats = 5;
    recs[0].wall_seconds = 0.125;
    recs[1].variant = BenchVariant::Mha;
    recs[1].n = 128;
    recs[1].repeats = 5;
    recs[1].skipped = true;
    const std::string csv = bench_records_csv(recs, spec);
    CHECK(csv == bench_records_csv(recs, spec));
    CHECK(csv.rfind("variant,n,d,D,k,repeats,median_seconds\n", 0) == 0);
    CHECK(csv.find("mha,64,4,8,2,5,0.125") != std::string::npos);
    CHECK(csv.find("mha,128,4,8,2,5,nan") != std::string::npos);
}

TEST_CASE("loglog_slope recovers exact power laws") {
    std::vector<double> x, lin, quad;
    for (double n : {256.0, 512.0, 1024.0, 2048.0}) {
        x.push_back(n);
        lin.push_back(3.5e-8 * n);
        quad.push_back(1e-10 * n * n);
    }
    CHECK(loglog_slope(x, lin) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(loglog_slope(x, quad) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), DomainError);
}
