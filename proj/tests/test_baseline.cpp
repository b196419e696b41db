#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pom/baseline.hpp"
#include "pom/rng.hpp"

using namespace pom;

namespace {

// Per-position softmax attention, one scalar at a time.
Matrix mha_oracle(const Matrix& X, const AttentionParams& p, const Matrix& M) {
    const std::size_t d = p.W_q.rows(), n = X.cols(), H = p.heads, dh = d / H;
    Matrix Q = num::matmul(p.W_q, X), K = num::matmul(p.W_k, X), V = num::matmul(p.W_v, X);
    Matrix concat(d, n);
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<double> logits(n, -std::numeric_limits<double>::infinity());
            for (std::size_t t = 0; t < n; ++t) {
                if (M(s, t) == 0.0) continue;
                double dot = 0.0;
                for (std::size_t i = 0; i < dh; ++i) dot += Q(h * dh + i, s) * K(h * dh + i, t);
                logits[t] = dot / std::sqrt(double(dh));
            }
            double mx = *std::max_element(logits.begin(), logits.end());
            double denom = 0.0;
            std::vector<double> w(n, 0.0);
            for (std::size_t t = 0; t < n; ++t)
                if (M(s, t) != 0.0) {
                    w[t] = std::exp(logits[t] - mx);
                    denom += w[t];
                }
            for (std::size_t i = 0; i < dh; ++i) {
                double acc = 0.0;
                for (std::size_t t = 0; t < n; ++t)
                    if (M(s, t) != 0.0) acc += (w[t] / denom) * V(h * dh + i, t);
                concat(h * dh + i, s) = acc;
            }
        }
    }
    return num::matmul(p.W_o, concat);
}

}  // namespace

TEST_CASE("mha: single token reduces to the output/value projection") {
    AttentionParams p = init_attention_params<double>(4, 2, 1);
    Rng rng(1);
    Matrix x = rng.uniform_matrix<double>(4, 1, -1.0, 1.0);
    Matrix got = mha_forward(x, p, MaskSpec::causal());
    Matrix expect = num::matmul(p.W_o, num::matmul(p.W_v, x));
    CHECK(max_abs_diff(got, expect) <= 1e-14);
}

TEST_CASE("mha: zero query projection gives uniform attention over visible values") {
    AttentionParams p = init_attention_params<double>(4, 2, 2);
    p.W_q = Matrix(4, 4);
    Rng rng(2);
    const std::size_t n = 6;
    Matrix X = rng.uniform_matrix<double>(4, n, -1.0, 1.0);
    Matrix got = mha_forward(X, p, MaskSpec::full());

    Matrix V = num::matmul(p.W_v, X);
    Matrix vbar(4, 1);
    for (std::size_t i = 0; i < 4; ++i) {
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) acc += V(i, t);
        vbar(i, 0) = acc / double(n);
    }
    Matrix expect_col = num::matmul(p.W_o, vbar);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::fabs(got(i, s) - expect_col(i, 0)) <= 1e-12);
}

TEST_CASE("mha: seed-19 instance vs the per-position scalar softmax oracle") {
    AttentionParams p = init_attention_params<double>(6, 3, 19);
    Rng rng(19);
    const std::size_t n = 7;
    Matrix X = rng.uniform_matrix<double>(6, n, -1.0, 1.0);
    for (auto mask : {MaskSpec::full(), MaskSpec::causal(), MaskSpec::block_causal(3)}) {
        Matrix M = mask.materialize<double>(n);
        CHECK(max_abs_diff(mha_forward(X, p, mask), mha_oracle(X, p, M)) <= 1e-10);
    }
}

TEST_CASE("mha: softmax rows sum to one over visible positions") {
    AttentionParams p = init_attention_params<double>(8, 4, 23);
    Rng rng(23);
    const std::size_t n = 9;
    Matrix X = rng.uniform_matrix<double>(8, n, -1.0, 1.0);
    for (std::size_t h = 0; h < 4; ++h) {
        Matrix W = mha_head_weights(X, p, MaskSpec::causal(), h);
        for (std::size_t s = 0; s < n; ++s) {
            double sum = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                sum += W(s, t);
                if (t > s) CHECK(W(s, t) == 0.0);  // masked weight is an exact zero
            }
            CHECK(std::fabs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("mha: full-mask permutation equivariance") {
    AttentionParams p = init_attention_params<double>(4, 2, 29);
    Rng rng(29);
    const std::size_t n = 8;
    Matrix X = rng.uniform_matrix<double>(4, n, -1.0, 1.0);
    std::vector<std::size_t> perm = {6, 2, 0, 7, 4, 1, 5, 3};

    Matrix Xp(4, n), Yp(4, n);
    Matrix Y = mha_forward(X, p, MaskSpec::full());
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < 4; ++i) {
            Xp(i, j) = X(i, perm[j]);
            Yp(i, j) = Y(i, perm[j]);
        }
    CHECK(max_abs_diff(mha_forward(Xp, p, MaskSpec::full()), Yp) <= 1e-10);
}

TEST_CASE("mha: a mask row with no visible position is a degenerate-mask error") {
    AttentionParams p = init_attention_params<double>(4, 2, 31);
    Matrix M(3, 3);
    M(0, 0) = 1.0;
    M(2, 1) = 1.0;  // row 1 is empty
    CHECK_THROWS_AS(mha_forward(Matrix(4, 3), p, MaskSpec::explicit_mask(M)),
                    DegenerateMaskError);
}

TEST_CASE("mha: parameter validation") {
    CHECK_THROWS_AS(init_attention_params<double>(6, 4, 1), DomainError);
    AttentionParams p = init_attention_params<double>(4, 2, 1);
    CHECK_THROWS_AS(mha_forward(Matrix(3, 2), p, MaskSpec::full()), ShapeError);
    CHECK_THROWS_AS(mha_forward(Matrix(4, 0), p, MaskSpec::full()), EmptySequenceError);
}
