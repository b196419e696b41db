#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pom/checks.hpp"
#include "pom/gradcheck.hpp"
#include "pom/rng.hpp"

using namespace pom;

namespace {

double inner(const Matrix& a, const Matrix& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * b.data()[i];
    return acc;
}

}  // namespace

TEST_CASE("finite_difference: quadratic derivative is exact up to roundoff") {
    Matrix at{{3.0}};
    Matrix g = finite_difference([](const Matrix& w) { return w(0, 0) * w(0, 0); }, at, 1e-6);
    CHECK(std::fabs(g(0, 0) - 6.0) <= 1e-8);
}

TEST_CASE("finite_difference: constant function has zero gradient") {
    Matrix at{{1.0, -2.0}, {0.5, 4.0}};
    Matrix g = finite_difference([](const Matrix&) { return 42.0; }, at, 1e-6);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.data()[i] == 0.0);
}

TEST_CASE("finite_difference: rejects non-positive eps and non-finite functions") {
    Matrix at{{1.0}};
    CHECK_THROWS_AS(finite_difference([](const Matrix& w) { return w(0, 0); }, at, 0.0),
                    DomainError);
    CHECK_THROWS_AS(
        finite_difference([](const Matrix& w) { return std::log(-1.0 - w(0, 0) * 0.0); }, at,
                          1e-6),
        NonFiniteError);
}

TEST_CASE("pom_backward: zero upstream zeroes every gradient") {
    MixerConfig cfg{3, 5, 2, Activation::Tanh, Aggregation::Sum};
    MixerParams p = init_mixer_params<double>(cfg, 23);
    Rng rng(23);
    Matrix X = rng.uniform_matrix<double>(3, 4, -1.0, 1.0);
    GradientBundle g = pom_backward(X, MaskSpec::causal(), cfg, p, Matrix(3, 4));
    for (const Matrix* m : {&g.d_W_h, &g.d_W_s, &g.d_W_o, &g.d_alpha, &g.d_X})
        for (std::size_t i = 0; i < m->size(); ++i) CHECK(m->data()[i] == 0.0);
}

TEST_CASE("pom_backward: alpha gradient vanishes at X = 0 under tanh") {
    MixerConfig cfg{3, 5, 3, Activation::Tanh, Aggregation::Sum};
    MixerParams p = init_mixer_params<double>(cfg, 24);
    Rng rng(24);
    Matrix upstream = rng.uniform_matrix<double>(3, 4, -1.0, 1.0);
    GradientBundle g = pom_backward(Matrix(3, 4), MaskSpec::full(), cfg, p, upstream);
    for (std::size_t i = 0; i < g.d_alpha.size(); ++i) CHECK(g.d_alpha.data()[i] == 0.0);
}

TEST_CASE("pom_backward: seed-23 instance matches central differences everywhere") {
    MixerConfig cfg{3, 4, 2, Activation::Tanh, Aggregation::Sum};
    MixerParams params = init_mixer_params<double>(cfg, 23);
    Rng rng(23);
    const std::size_t n = 5;
    Matrix X = rng.uniform_matrix<double>(3, n, -1.0, 1.0);
    Matrix upstream = rng.uniform_matrix<double>(3, n, -1.0, 1.0);
    const MaskSpec mask = MaskSpec::causal();

    GradientBundle g = pom_backward(X, mask, cfg, params, upstream);
    auto loss = [&](const MixerParams& p, const Matrix& x) {
        return inner(upstream, pom_forward(x, mask, cfg, p));
    };

    auto check_against_fd = [&](const Matrix& analytic, const Matrix& numeric) {
        for (std::size_t i = 0; i < analytic.size(); ++i)
            CHECK(grad_rel_error(analytic.data()[i], numeric.data()[i]) <= 1e-5);
    };

    check_against_fd(g.d_W_h, finite_difference(
                                  [&](const Matrix& w) {
                                      MixerParams p = params;
                                      p.W_h = w;
                                      return loss(p, X);
                                  },
                                  params.W_h, 1e-6));
    check_against_fd(g.d_W_s, finite_difference(
                                  [&](const Matrix& w) {
                                      MixerParams p = params;
                                      p.W_s = w;
                                      return loss(p, X);
                                  },
                                  params.W_s, 1e-6));
    check_against_fd(g.d_W_o, finite_difference(
                                  [&](const Matrix& w) {
                                      MixerParams p = params;
                                      p.W_o = w;
                                      return loss(p, X);
                                  },
                                  params.W_o, 1e-6));
    check_against_fd(g.d_alpha, finite_difference(
                                    [&](const Matrix& w) {
                                        MixerParams p = params;
                                        p.alpha = w;
                                        return loss(p, X);
                                    },
                                    params.alpha, 1e-6));
    check_against_fd(g.d_X,
                     finite_difference([&](const Matrix& x) { return loss(params, x); }, X, 1e-6));
}

TEST_CASE("pom_backward agrees with finite differences of the summed output") {
    MixerConfig cfg{2, 4, 2, Activation::Identity, Aggregation::Sum};
    MixerParams params = init_mixer_params<double>(cfg, 29);
    Rng rng(29);
    Matrix X = rng.uniform_matrix<double>(2, 3, -1.0, 1.0);
    Matrix ones = Matrix::ones(2, 3);

    GradientBundle g = pom_backward(X, MaskSpec::full(), cfg, params, ones);
    Matrix fd = finite_difference(
        [&](const Matrix& x) {
            Matrix y = pom_forward(x, MaskSpec::full(), cfg, params);
            double acc = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) acc += y.data()[i];
            return acc;
        },
        X, 1e-6);
    for (std::size_t i = 0; i < fd.size(); ++i)
        CHECK(grad_rel_error(g.d_X.data()[i], fd.data()[i]) <= 1e-5);
}

TEST_CASE("pom_backward: linear in the upstream signal") {
    MixerConfig cfg{3, 5, 3, Activation::Tanh, Aggregation::Sum};
    MixerParams params = init_mixer_params<double>(cfg, 37);
    Rng rng(37);
    Matrix X = rng.uniform_matrix<double>(3, 4, -1.0, 1.0);
    Matrix u1 = rng.uniform_matrix<double>(3, 4, -1.0, 1.0);
    Matrix u2 = rng.uniform_matrix<double>(3, 4, -1.0, 1.0);

    GradientBundle gsum = pom_backward(X, MaskSpec::causal(), cfg, params, num::add(u1, u2));
    GradientBundle g1 = pom_backward(X, MaskSpec::causal(), cfg, params, u1);
    GradientBundle g2 = pom_backward(X, MaskSpec::causal(), cfg, params, u2);

    auto close = [](const Matrix& a, const Matrix& b, const Matrix& c) {
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(std::fabs(a.data()[i] - (b.data()[i] + c.data()[i])) <= 1e-12);
    };
    close(gsum.d_W_h, g1.d_W_h, g2.d_W_h);
    close(gsum.d_W_s, g1.d_W_s, g2.d_W_s);
    close(gsum.d_W_o, g1.d_W_o, g2.d_W_o);
    close(gsum.d_alpha, g1.d_alpha, g2.d_alpha);
    close(gsum.d_X, g1.d_X, g2.d_X);
}

TEST_CASE("pom_backward: masked-out tokens carry no input gradient") {
    MixerConfig cfg{2, 3, 2, Activation::Tanh, Aggregation::Sum};
    MixerParams params = init_mixer_params<double>(cfg, 41);
    Rng rng(41);
    const std::size_t n = 4;
    Matrix X = rng.uniform_matrix<double>(2, n, -1.0, 1.0);
    // Only position 0 produces a loss; under the causal mask its state sees
    // token 0 alone, so d_X must vanish for every later token.
    Matrix upstream(2, n);
    upstream(0, 0) = 1.0;
    upstream(1, 0) = -0.5;
    GradientBundle g = pom_backward(X, MaskSpec::causal(), cfg, params, upstream);
    for (std::size_t t = 1; t < n; ++t)
        for (std::size_t i = 0; i < 2; ++i) CHECK(g.d_X(i, t) == 0.0);
}

TEST_CASE("gradient suite: 20 random configurations pass at 1e-5") {
    CheckResult res = check_gradients(2026, 20);
    INFO(res.detail);
    CHECK(res.ok);
    CHECK(res.passed == 20);
}
