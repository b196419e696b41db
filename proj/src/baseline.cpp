#include "pom/baseline.hpp"

#include <cmath>
#include <string>

#include "pom/rng.hpp"

namespace pom {

namespace {

constexpr double kMaskPenalty = -1e30;

}  // namespace

template <typename T>
void AttentionParamsT<T>::validate() const {
    const std::size_t d = W_q.rows();
    if (d < 1) throw DomainError("AttentionParams: empty weights");
    auto expect = [d](const Mat<T>& m, const char* name) {
        if (m.rows() != d || m.cols() != d)
            throw ShapeError(std::string("AttentionParams: ") + name + " must be d x d");
    };
    expect(W_q, "W_q");
    expect(W_k, "W_k");
    expect(W_v, "W_v");
    expect(W_o, "W_o");
    if (heads < 1 || d % heads != 0)
        throw DomainError("AttentionParams: head count must divide d");
}

template <typename T>
AttentionParamsT<T> init_attention_params(std::size_t d, std::size_t heads,
                                          std::uint64_t seed) {
    if (heads < 1 || d % heads != 0)
        throw DomainError("init_attention_params: head count must divide d");
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(double(d));
    AttentionParamsT<T> p;
    p.W_q = rng.uniform_matrix<T>(d, d, -bound, bound);
    p.W_k = rng.uniform_matrix<T>(d, d, -bound, bound);
    p.W_v = rng.uniform_matrix<T>(d, d, -bound, bound);
    p.W_o = rng.uniform_matrix<T>(d, d, -bound, bound);
    p.heads = heads;
    return p;
}

namespace {

template <typename T>
void check_mask_rows(const Mat<T>& M) {
    for (std::size_t s = 0; s < M.rows(); ++s) {
        bool any = false;
        for (std::size_t t = 0; t < M.cols(); ++t)
            if (M(s, t) != T(0)) {
                any = true;
                break;
            }
        if (!any)
            throw DegenerateMaskError("mha_forward: mask row " + std::to_string(s) +
                                      " has no visible position");
    }
}

// Rows [h*dh, (h+1)*dh) of a d x n matrix.
template <typename T>
Mat<T> head_rows(const Mat<T>& m, std::size_t h, std::size_t dh) {
    Mat<T> out(dh, m.cols());
    for (std::size_t i = 0; i < dh; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(h * dh + i, j);
    return out;
}

// Masked scale + row softmax, in place. Row s ends up holding the weights
// with which position s attends over t.
template <typename T>
void softmax_rows(Mat<T>& L, const Mat<T>& M, T scale) {
    const std::size_t n = L.rows();
    for (std::size_t s = 0; s < n; ++s) {
        T* row = L.row(s);
        for (std::size_t t = 0; t < n; ++t) {
            row[t] = row[t] * scale;
            if (M(s, t) == T(0)) row[t] = row[t] + T(kMaskPenalty);
        }
        T mx = row[0];
        for (std::size_t t = 1; t < n; ++t)
            if (row[t] > mx) mx = row[t];
        T denom = T(0);
        for (std::size_t t = 0; t < n; ++t) {
            row[t] = std::exp(row[t] - mx);
            denom = denom + row[t];
        }
        const T inv = T(1) / denom;
        for (std::size_t t = 0; t < n; ++t) row[t] = row[t] * inv;
    }
}

// The head-h slice of a d x n row-major matrix is itself contiguous.
template <typename T>
const T* head_ptr(const Mat<T>& m, std::size_t h, std::size_t dh) {
    return m.data() + h * dh * m.cols();
}

}  // namespace

template <typename T>
Mat<T> mha_forward(const Mat<T>& X, const AttentionParamsT<T>& params, const MaskSpec& mask) {
    params.validate();
    const std::size_t d = params.W_q.rows();
    const std::size_t n = X.cols();
    if (X.rows() != d) throw ShapeError("mha_forward: X row count != d");
    if (n == 0) throw EmptySequenceError("mha_forward: empty sequence");

    Mat<T> M = mask.template materialize<T>(n);
    check_mask_rows(M);

    const std::size_t H = params.heads;
    const std::size_t dh = d / H;
    const T scale = T(1) / T(std::sqrt(double(dh)));

    Mat<T> Q = num::matmul(params.W_q, X);
    Mat<T> K = num::matmul(params.W_k, X);
    Mat<T> V = num::matmul(params.W_v, X);

    Mat<T> concat(d, n);
    Mat<T> L(n, n);  // logits/weights workspace, reused across heads
    Mat<T> QhT(n, dh), VhT(n, dh), Ot(n, dh);
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t i = 0; i < dh; ++i) {
                QhT(t, i) = Q(h * dh + i, t);
                VhT(t, i) = V(h * dh + i, t);
            }
        kern::matmul(QhT.data(), n, dh, head_ptr(K, h, dh), n, L.data());
        softmax_rows(L, M, scale);
        // O_h(:,s) = sum_t L(s,t) V_h(:,t), via (L * V_h^T)^T.
        kern::matmul(L.data(), n, n, VhT.data(), dh, Ot.data());
        for (std::size_t i = 0; i < dh; ++i)
            for (std::size_t s = 0; s < n; ++s) concat(h * dh + i, s) = Ot(s, i);
    }
    return num::matmul(params.W_o, concat);
}

template <typename T>
Mat<T> mha_head_weights(const Mat<T>& X, const AttentionParamsT<T>& params, const MaskSpec& mask,
                        std::size_t head) {
    params.validate();
    const std::size_t d = params.W_q.rows();
    const std::size_t H = params.heads;
    if (head >= H) throw DomainError("mha_head_weights: head index out of range");
    const std::size_t dh = d / H;
    const std::size_t n = X.cols();
    Mat<T> M = mask.template materialize<T>(n);
    check_mask_rows(M);
    Mat<T> Q = num::matmul(params.W_q, X);
    Mat<T> K = num::matmul(params.W_k, X);
    Mat<T> L = num::matmul(num::transpose(head_rows(Q, head, dh)), head_rows(K, head, dh));
    softmax_rows(L, M, T(1) / T(std::sqrt(double(dh))));
    return L;
}

#define POM_INSTANTIATE_BASELINE(T)                                                        \
    template struct AttentionParamsT<T>;                                                   \
    template AttentionParamsT<T> init_attention_params<T>(std::size_t, std::size_t,        \
                                                          std::uint64_t);                  \
    template Mat<T> mha_forward<T>(const Mat<T>&, const AttentionParamsT<T>&,              \
                                   const MaskSpec&);                                       \
    template Mat<T> mha_head_weights<T>(const Mat<T>&, const AttentionParamsT<T>&,         \
                                        const MaskSpec&, std::size_t);

POM_INSTANTIATE_BASELINE(double)
POM_INSTANTIATE_BASELINE(float)

#undef POM_INSTANTIATE_BASELINE

}  // namespace pom
