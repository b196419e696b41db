#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pom/matrix.hpp"

namespace pom {

enum class BenchVariant { Pom, Mha };

const char* bench_variant_name(BenchVariant v);

/** One measured point of a scaling sweep. */
struct BenchRecord {
    BenchVariant variant = BenchVariant::Pom;
    std::size_t n = 0;
    double wall_seconds = 0.0;  // median over `repeats` timed runs
    int repeats = 0;
    std::string precision;  // "f64" or "f32"
    std::uint64_t seed = 0;
    bool skipped = false;   // out-of-memory or per-point budget exceeded
    std::string skip_reason;
};

struct BenchSpec {
    BenchVariant variant = BenchVariant::Pom;
    std::vector<std::size_t> n_values;  // ascending
    std::size_t d = 64;
    std::size_t D = 128;
    int k = 2;
    int repeats = 5;                   // >= 3 timed runs per point
    std::uint64_t seed = 0;
    bool use_f32 = false;              // 32-bit opt-in, benchmarks only
    double point_budget_seconds = 60;  // exceeded => remaining repeats skipped
};

/**
 * Runs the sweep point by point, sequentially (timing isolation). Each point
 * does one discarded warm-up run, then `repeats` timed runs; the record
 * carries the median. Weights and inputs are deterministic in the seed.
 * An OOM or budget overrun yields a skipped record, not a crash.
 */
std::vector<BenchRecord> run_bench(const BenchSpec& spec);

// The input tensor a sweep point uses (exposed so determinism is testable).
template <typename T>
Mat<T> make_bench_input(std::uint64_t seed, std::size_t d, std::size_t n);

// CSV with header variant,n,d,D,k,repeats,median_seconds; one row per
// record in sweep order. Skipped points report median_seconds as nan.
std::string bench_records_csv(const std::vector<BenchRecord>& records, const BenchSpec& spec);

// Least-squares slope of log(y) against log(x); skipped records excluded.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
double bench_slope(const std::vector<BenchRecord>& records);

}  // namespace pom
