#include "pom/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <new>
#include <sstream>

#include "pom/baseline.hpp"
#include "pom/mixer.hpp"
#include "pom/rng.hpp"

namespace pom {

const char* bench_variant_name(BenchVariant v) {
    return v == BenchVariant::Pom ? "pom" : "mha";
}

template <typename T>
Mat<T> make_bench_input(std::uint64_t seed, std::size_t d, std::size_t n) {
    Rng rng(seed ^ 0xB0B0B0B0B0B0B0B0ull);
    return rng.uniform_matrix<T>(d, n, -1.0, 1.0);
}

template Mat<double> make_bench_input<double>(std::uint64_t, std::size_t, std::size_t);
template Mat<float> make_bench_input<float>(std::uint64_t, std::size_t, std::size_t);

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// One forward pass, result consumed so the work cannot be elided.
template <typename T>
double timed_forward(BenchVariant variant, const Mat<T>& X, const MixerConfig& cfg,
                     const MixerParamsT<T>& mp, const AttentionParamsT<T>& ap,
                     volatile double* sink) {
    const auto t0 = Clock::now();
    Mat<T> Y = variant == BenchVariant::Pom ? pom_forward(X, MaskSpec::full(), cfg, mp)
                                            : mha_forward(X, ap, MaskSpec::full());
    const double dt = seconds_since(t0);
    *sink = *sink + double(Y(0, Y.cols() - 1));
    return dt;
}

template <typename T>
std::vector<BenchRecord> run_bench_impl(const BenchSpec& spec) {
    MixerConfig cfg{spec.d, spec.D, spec.k, Activation::Tanh, Aggregation::Sum};
    MixerParamsT<T> mp;
    AttentionParamsT<T> ap;
    if (spec.variant == BenchVariant::Pom) {
        mp = init_mixer_params<T>(cfg, spec.seed);
    } else {
        std::size_t heads = spec.d % 4 == 0 ? 4 : (spec.d % 2 == 0 ? 2 : 1);
        ap = init_attention_params<T>(spec.d, heads, spec.seed);
    }

    volatile double sink = 0.0;
    std::vector<BenchRecord> out;
    for (std::size_t n : spec.n_values) {
        BenchRecord rec;
        rec.variant = spec.variant;
        rec.n = n;
        rec.repeats = spec.repeats;
        rec.precision = spec.use_f32 ? "f32" : "f64";
        rec.seed = spec.seed;
        try {
            Mat<T> X = make_bench_input<T>(spec.seed, spec.d, n);
            const auto point_start = Clock::now();
            timed_forward(spec.variant, X, cfg, mp, ap, &sink);  // warm-up, discarded
            std::vector<double> times;
            times.reserve(spec.repeats);
            for (int r = 0; r < spec.repeats; ++r) {
                if (seconds_since(point_start) > spec.point_budget_seconds)
                    throw Error("per-point time budget exceeded");
                times.push_back(timed_forward(spec.variant, X, cfg, mp, ap, &sink));
            }
            std::sort(times.begin(), times.end());
            rec.wall_seconds = times[times.size() / 2];
        } catch (const std::bad_alloc&) {
            rec.skipped = true;
            rec.skip_reason = "out of memory";
        } catch (const Error& e) {
            rec.skipped = true;
            rec.skip_reason = e.what();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchSpec& spec) {
    if (spec.repeats < 3) throw DomainError("run_bench: repeats must be >= 3");
    if (spec.n_values.empty()) throw DomainError("run_bench: empty sweep");
    for (std::size_t i = 1; i < spec.n_values.size(); ++i)
        if (spec.n_values[i] <= spec.n_values[i - 1])
            throw DomainError("run_bench: n values must be ascending");
    return spec.use_f32 ? run_bench_impl<float>(spec) : run_bench_impl<double>(spec);
}

std::string bench_records_csv(const std::vector<BenchRecord>& records, const BenchSpec& spec) {
    std::ostringstream os;
    os << "variant,n,d,D,k,repeats,median_seconds\n";
    os.precision(9);
    for (const auto& r : records) {
        os << bench_variant_name(r.variant) << ',' << r.n << ',' << spec.d << ',' << spec.D
           << ',' << spec.k << ',' << r.repeats << ',';
        if (r.skipped)
            os << "nan";
        else
            os << r.wall_seconds;
        os << '\n';
    }
    return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("loglog_slope: need at least two points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = double(n) * sxx - sx * sx;
    return (double(n) * sxy - sx * sy) / denom;
}

double bench_slope(const std::vector<BenchRecord>& records) {
    std::vector<double> x, y;
    for (const auto& r : records)
        if (!r.skipped) {
            x.push_back(double(r.n));
            y.push_back(r.wall_seconds);
        }
    return loglog_slope(x, y);
}

}  // namespace pom
