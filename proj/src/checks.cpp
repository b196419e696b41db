#include "pom/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "pom/gradcheck.hpp"
#include "pom/mixer.hpp"
#include "pom/rng.hpp"

namespace pom {

namespace {

std::size_t rand_size(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + std::size_t(rng.uniform01() * double(hi - lo + 1));
}

std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rand_size(rng, 0, i - 1)]);
    return p;
}

Matrix permute_cols(const Matrix& x, const std::vector<std::size_t>& perm) {
    Matrix out(x.rows(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = x(i, perm[j]);
    return out;
}

Activation pick_activation(Rng& rng, bool include_relu) {
    const double u = rng.uniform01();
    if (include_relu && u > 0.66) return Activation::Relu;
    return u > 0.33 ? Activation::Tanh : Activation::Identity;
}

}  // namespace

CheckResult check_equivariance(std::uint64_t seed, std::size_t cases) {
    CheckResult res;
    res.name = "equivariance";
    res.total = cases;
    constexpr double tol = 1e-10;
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        MixerConfig cfg{rand_size(rng, 1, 16), rand_size(rng, 1, 16), int(rand_size(rng, 1, 3)),
                        pick_activation(rng, true), Aggregation::Sum};
        MixerParams params = init_mixer_params<double>(cfg, rng.next_u64());
        const std::size_t n = rand_size(rng, 2, 32);
        Matrix X = rng.uniform_matrix<double>(cfg.d, n, -1.0, 1.0);
        auto perm = random_permutation(rng, n);

        Matrix lhs = pom_forward(permute_cols(X, perm), MaskSpec::full(), cfg, params);
        Matrix rhs = permute_cols(pom_forward(X, MaskSpec::full(), cfg, params), perm);
        const double diff = max_abs_diff(lhs, rhs);
        res.worst = std::max(res.worst, diff);
        if (diff <= tol) ++res.passed;
    }
    res.ok = res.passed == res.total;
    std::ostringstream os;
    os << res.passed << "/" << res.total << " cases, worst diff " << res.worst;
    res.detail = os.str();
    return res;
}

CheckResult check_streaming_equivalence(std::uint64_t seed, std::size_t cases) {
    CheckResult res;
    res.name = "streaming-equivalence";
    res.total = cases;
    constexpr double tol = 1e-10;
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        MixerConfig cfg{rand_size(rng, 1, 16), rand_size(rng, 1, 16), int(rand_size(rng, 1, 3)),
                        pick_activation(rng, true), Aggregation::Sum};
        MixerParams params = init_mixer_params<double>(cfg, rng.next_u64());
        const std::size_t n = rand_size(rng, 4, 32);
        Matrix X = rng.uniform_matrix<double>(cfg.d, n, -1.0, 1.0);

        double diff = 0.0;

        // Token-by-token stream against the batched causal form.
        Matrix batched = pom_forward(X, MaskSpec::causal(), cfg, params);
        StreamState st = stream_init(cfg, params);
        for (std::size_t t = 0; t < n; ++t) {
            Matrix y = stream_step(st, X.col(t), cfg, params);
            for (std::size_t i = 0; i < cfg.d; ++i)
                diff = std::max(diff, std::fabs(y(i, 0) - batched(i, t)));
        }

        // Block streaming against the explicit block-causal mask.
        for (std::size_t K : {std::size_t(1), std::size_t(2), std::size_t(4), std::size_t(8)}) {
            Matrix dense = pom_forward(
                X, MaskSpec::explicit_mask(MaskSpec::block_causal(K).materialize<double>(n)),
                cfg, params);
            StreamState bst = stream_init(cfg, params);
            for (std::size_t b0 = 0; b0 < n; b0 += K) {
                const std::size_t b1 = std::min(n, b0 + K);
                Matrix y = stream_block_step(bst, X.cols_slice(b0, b1), K, cfg, params);
                for (std::size_t i = 0; i < cfg.d; ++i)
                    for (std::size_t s = b0; s < b1; ++s)
                        diff = std::max(diff, std::fabs(y(i, s - b0) - dense(i, s)));
            }
        }

        res.worst = std::max(res.worst, diff);
        if (diff <= tol) ++res.passed;
    }
    res.ok = res.passed == res.total;
    std::ostringstream os;
    os << res.passed << "/" << res.total << " configs, worst diff " << res.worst;
    res.detail = os.str();
    return res;
}

CheckResult check_gradients(std::uint64_t seed, std::size_t cases) {
    CheckResult res;
    res.name = "gradient-check";
    res.total = cases;
    constexpr double tol = 1e-5;
    constexpr double eps = 1e-6;
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        MixerConfig cfg{rand_size(rng, 1, 8), rand_size(rng, 1, 8), int(rand_size(rng, 1, 3)),
                        rng.uniform01() < 0.5 ? Activation::Tanh : Activation::Identity,
                        Aggregation::Sum};
        const MaskSpec mask = rng.uniform01() < 0.5 ? MaskSpec::full() : MaskSpec::causal();
        MixerParams params = init_mixer_params<double>(cfg, rng.next_u64());
        const std::size_t n = rand_size(rng, 1, 6);
        Matrix X = rng.uniform_matrix<double>(cfg.d, n, -1.0, 1.0);
        Matrix upstream = rng.uniform_matrix<double>(cfg.d, n, -1.0, 1.0);

        GradientBundle analytic = pom_backward(X, mask, cfg, params, upstream);

        auto loss_with = [&](const MixerParams& p, const Matrix& x) {
            Matrix y = pom_forward(x, mask, cfg, p);
            double acc = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) acc += upstream.data()[i] * y.data()[i];
            return acc;
        };

        double worst = 0.0;
        auto compare = [&](const Matrix& a, const Matrix& num) {
            for (std::size_t i = 0; i < a.size(); ++i)
                worst = std::max(worst, grad_rel_error(a.data()[i], num.data()[i]));
        };

        compare(analytic.d_W_h, finite_difference(
                                    [&](const Matrix& w) {
                                        MixerParams p = params;
                                        p.W_h = w;
                                        return loss_with(p, X);
                                    },
                                    params.W_h, eps));
        compare(analytic.d_W_s, finite_difference(
                                    [&](const Matrix& w) {
                                        MixerParams p = params;
                                        p.W_s = w;
                                        return loss_with(p, X);
                                    },
                                    params.W_s, eps));
        compare(analytic.d_W_o, finite_difference(
                                    [&](const Matrix& w) {
                                        MixerParams p = params;
                                        p.W_o = w;
                                        return loss_with(p, X);
                                    },
                                    params.W_o, eps));
        compare(analytic.d_alpha, finite_difference(
                                      [&](const Matrix& w) {
                                          MixerParams p = params;
                                          p.alpha = w;
                                          return loss_with(p, X);
                                      },
                                      params.alpha, eps));
        compare(analytic.d_X,
                finite_difference([&](const Matrix& x) { return loss_with(params, x); }, X, eps));

        res.worst = std::max(res.worst, worst);
        if (worst <= tol) ++res.passed;
    }
    res.ok = res.passed == res.total;
    std::ostringstream os;
    os << res.passed << "/" << res.total << " configs, worst rel err " << res.worst;
    res.detail = os.str();
    return res;
}

CheckResult check_contextual_probe(std::uint64_t seed, std::size_t pairs) {
    CheckResult res;
    res.name = "contextual-probe";
    res.total = pairs;
    constexpr double tol = 1e-9;
    constexpr std::size_t n = 8;
    constexpr double sep = 1e-2;

    // Scalar-token regime: d = D = 1, identity weights and activation, degree
    // 2 with unit coefficients. Tokens live in (0.2, 1.2) so x + x^2 is
    // injective on the sample range and state differences stay bounded away
    // from zero.
    MixerConfig cfg{1, 1, 2, Activation::Identity, Aggregation::Sum};
    MixerParams params;
    params.W_h = Matrix{{1.0}};
    params.W_s = Matrix{{1.0}};
    params.W_o = Matrix{{1.0}};
    params.alpha = Matrix{{1.0, 1.0}};

    Rng rng(seed);
    auto fresh_token = [&](const std::vector<double>& taken) {
        for (;;) {
            const double v = rng.uniform(0.2, 1.2);
            bool clear = true;
            for (double t : taken)
                if (std::fabs(v - t) < sep) {
                    clear = false;
                    break;
                }
            if (clear) return v;
        }
    };

    std::size_t failures = 0;
    std::ostringstream failog;
    double min_gap = 1e300;
    for (std::size_t c = 0; c < pairs; ++c) {
        std::vector<double> tokens;
        for (std::size_t t = 0; t < n; ++t) tokens.push_back(fresh_token(tokens));
        const std::size_t swap_at = rand_size(rng, 0, n - 1);
        std::vector<double> tokens2 = tokens;
        tokens2[swap_at] = fresh_token(tokens);

        Matrix X(1, n, std::vector<double>(tokens));
        Matrix X2(1, n, std::vector<double>(tokens2));
        Matrix out = pom_forward(X, MaskSpec::full(), cfg, params);
        Matrix out2 = pom_forward(X2, MaskSpec::full(), cfg, params);

        std::vector<double> all;
        for (std::size_t t = 0; t < n; ++t) all.push_back(out(0, t));
        for (std::size_t t = 0; t < n; ++t) all.push_back(out2(0, t));
        bool distinct = true;
        for (std::size_t i = 0; i < all.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j) {
                const double gap = std::fabs(all[i] - all[j]);
                min_gap = std::min(min_gap, gap);
                if (gap <= tol) {
                    distinct = false;
                    if (failures < 5)
                        failog << " [pair " << c << ": entries " << i << "," << j << " gap "
                               << gap << "]";
                    break;
                }
            }
        if (distinct)
            ++res.passed;
        else
            ++failures;
    }
    res.ok = failures == 0;
    res.worst = min_gap;
    std::ostringstream os;
    os << res.passed << "/" << res.total << " pairs distinct, smallest gap " << min_gap;
    if (failures) os << "; failures:" << failog.str();
    res.detail = os.str();
    return res;
}

}  // namespace pom
