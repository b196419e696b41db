#include "pom/mixer.hpp"

#include <cmath>
#include <string>

#include "pom/rng.hpp"

namespace pom {

void MixerConfig::validate() const {
    if (d < 1 || D < 1) throw DomainError("MixerConfig: d and D must be >= 1");
    if (k < 1) throw DomainError("MixerConfig: degree k must be >= 1");
}

template <typename T>
void MixerParamsT<T>::validate(const MixerConfig& cfg) const {
    auto expect = [](const Mat<T>& m, std::size_t r, std::size_t c, const char* name) {
        if (m.rows() != r || m.cols() != c)
            throw ShapeError(std::string("MixerParams: ") + name + " is " + m.shape_str() +
                             ", expected " + std::to_string(r) + "x" + std::to_string(c));
    };
    expect(W_h, cfg.D, cfg.d, "W_h");
    expect(W_s, cfg.D, cfg.d, "W_s");
    expect(W_o, cfg.d, cfg.D, "W_o");
    expect(alpha, cfg.D, std::size_t(cfg.k), "alpha");
}

template <typename T>
MixerParamsT<T> init_mixer_params(const MixerConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(double(cfg.d));
    MixerParamsT<T> p;
    p.W_h = rng.uniform_matrix<T>(cfg.D, cfg.d, -bound, bound);
    p.W_s = rng.uniform_matrix<T>(cfg.D, cfg.d, -bound, bound);
    p.W_o = rng.uniform_matrix<T>(cfg.d, cfg.D, -bound, bound);
    p.alpha = Mat<T>(cfg.D, cfg.k);
    for (std::size_t i = 0; i < cfg.D; ++i)
        for (int q = 0; q < cfg.k; ++q)
            p.alpha(i, q) = T(std::pow(0.1, double(q)));
    return p;
}

// ---------------------------------------------------------------------------
// MaskSpec
// ---------------------------------------------------------------------------

MaskSpec MaskSpec::block_causal(std::size_t block_size) {
    if (block_size < 1) throw DomainError("MaskSpec: block size must be >= 1");
    return MaskSpec(Kind::BlockCausal, block_size, {});
}

MaskSpec MaskSpec::explicit_mask(Matrix m) {
    if (m.rows() != m.cols()) throw ShapeError("MaskSpec: explicit mask must be square");
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double v = m.data()[i];
        if (v != 0.0 && v != 1.0)
            throw DomainError("MaskSpec: explicit mask entries must be 0 or 1");
    }
    return MaskSpec(Kind::Explicit, 0, std::move(m));
}

template <typename T>
Mat<T> MaskSpec::materialize(std::size_t n) const {
    Mat<T> m(n, n);
    switch (kind_) {
        case Kind::Full:
            for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = T(1);
            break;
        case Kind::Causal:
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t t = 0; t <= s; ++t) m(s, t) = T(1);
            break;
        case Kind::BlockCausal:
            for (std::size_t s = 0; s < n; ++s) {
                const std::size_t visible_end = std::min(n, (s / block_size_ + 1) * block_size_);
                for (std::size_t t = 0; t < visible_end; ++t) m(s, t) = T(1);
            }
            break;
        case Kind::Explicit:
            if (explicit_.rows() != n)
                throw ShapeError("MaskSpec: explicit mask is " + explicit_.shape_str() +
                                 ", sequence length is " + std::to_string(n));
            for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = T(explicit_.data()[i]);
            break;
    }
    return m;
}

template Mat<double> MaskSpec::materialize<double>(std::size_t) const;
template Mat<float> MaskSpec::materialize<float>(std::size_t) const;

// ---------------------------------------------------------------------------
// Forward operations
// ---------------------------------------------------------------------------

template <typename T>
Mat<T> poly_features(const Mat<T>& X, const MixerConfig& cfg, const MixerParamsT<T>& params) {
    cfg.validate();
    params.validate(cfg);
    if (X.rows() != cfg.d)
        throw ShapeError("poly_features: X has " + std::to_string(X.rows()) + " rows, d = " +
                         std::to_string(cfg.d));
    const std::size_t n = X.cols();
    // Projection, activation and polynomial all share one buffer; the
    // elementwise kernels are alias-safe.
    Mat<T> F = num::matmul(params.W_h, X);
    switch (cfg.activation) {
        case Activation::Tanh: kern::ew_tanh(F.data(), F.data(), F.size()); break;
        case Activation::Identity: break;
        case Activation::Relu: kern::ew_relu(F.data(), F.data(), F.size()); break;
        case Activation::Gelu: kern::ew_gelu(F.data(), F.data(), F.size()); break;
    }
    for (std::size_t i = 0; i < cfg.D; ++i)
        kern::poly_eval_row(F.row(i), n, params.alpha.row(i), std::size_t(cfg.k), F.row(i));
    return F;
}

template <typename T>
Mat<T> state_full(const Mat<T>& X, const MixerConfig& cfg, const MixerParamsT<T>& params) {
    if (X.cols() == 0) throw EmptySequenceError("state_full: empty sequence");
    Mat<T> H = num::reduce_rows_sum(poly_features(X, cfg, params));
    if (cfg.aggregation == Aggregation::Mean) H = num::scale(H, T(1) / T(X.cols()));
    return H;
}

namespace {

// H(:,s) = sum of F columns visible to s under an explicit binary mask,
// ascending t. Mean aggregation divides by the visible count; a row with no
// visible token yields a zero column.
template <typename T>
Mat<T> state_explicit(const Mat<T>& F, const Matrix& M, Aggregation agg) {
    const std::size_t D = F.rows(), n = F.cols();
    Mat<T> H(D, n);
    for (std::size_t i = 0; i < D; ++i) {
        const T* frow = F.row(i);
        for (std::size_t s = 0; s < n; ++s) {
            T acc = T(0);
            for (std::size_t t = 0; t < n; ++t)
                if (M(s, t) != 0.0) acc = acc + frow[t];
            H(i, s) = acc;
        }
    }
    if (agg == Aggregation::Mean) {
        for (std::size_t s = 0; s < n; ++s) {
            std::size_t cnt = 0;
            for (std::size_t t = 0; t < n; ++t) cnt += M(s, t) != 0.0;
            if (cnt > 0) {
                const T inv = T(1) / T(cnt);
                for (std::size_t i = 0; i < D; ++i) H(i, s) = H(i, s) * inv;
            }
        }
    }
    return H;
}

}  // namespace

template <typename T>
Mat<T> state_masked(const Mat<T>& X, const MaskSpec& mask, const MixerConfig& cfg,
                    const MixerParamsT<T>& params) {
    if (X.cols() == 0) throw EmptySequenceError("state_masked: empty sequence");
    const std::size_t n = X.cols();

    if (mask.kind() == MaskSpec::Kind::Explicit) {
        if (mask.matrix().rows() != n)
            throw ShapeError("state_masked: mask is " + mask.matrix().shape_str() +
                             ", sequence length is " + std::to_string(n));
        Mat<T> F = poly_features(X, cfg, params);
        return state_explicit(F, mask.matrix(), cfg.aggregation);
    }

    if (mask.kind() == MaskSpec::Kind::Full) {
        Mat<T> h = state_full(X, cfg, params);
        Mat<T> H(cfg.D, n);
        for (std::size_t i = 0; i < cfg.D; ++i)
            for (std::size_t s = 0; s < n; ++s) H(i, s) = h(i, 0);
        return H;
    }

    Mat<T> F = poly_features(X, cfg, params);
    Mat<T> H(cfg.D, n);
    const std::size_t K = mask.kind() == MaskSpec::Kind::Causal ? 1 : mask.block_size();

    // Prefix fold over whole blocks: every token in block b reads the
    // cumulative feature sum through the end of its own block.
    Mat<T> cum(cfg.D, 1);
    for (std::size_t b0 = 0; b0 < n; b0 += K) {
        const std::size_t b1 = std::min(n, b0 + K);
        for (std::size_t i = 0; i < cfg.D; ++i) {
            const T* frow = F.row(i);
            T acc = cum(i, 0);
            for (std::size_t t = b0; t < b1; ++t) acc = acc + frow[t];
            cum(i, 0) = acc;
            T val = acc;
            if (cfg.aggregation == Aggregation::Mean) val = val / T(b1);
            for (std::size_t s = b0; s < b1; ++s) H(i, s) = val;
        }
    }
    return H;
}

template <typename T>
Mat<T> readout(const Mat<T>& X, const Mat<T>& H, const MixerConfig& cfg,
               const MixerParamsT<T>& params) {
    cfg.validate();
    params.validate(cfg);
    if (X.rows() != cfg.d) throw ShapeError("readout: X row count != d");
    if (H.rows() != cfg.D || (H.cols() != 1 && H.cols() != X.cols()))
        throw ShapeError("readout: H is " + H.shape_str() + ", expected " +
                         std::to_string(cfg.D) + "x1 or " + std::to_string(cfg.D) + "x" +
                         std::to_string(X.cols()));
    // Gate logits, sigmoid and the state product share one buffer.
    Mat<T> G = num::matmul(params.W_s, X);
    kern::ew_sigmoid(G.data(), G.data(), G.size());
    if (H.cols() == 1) {
        for (std::size_t i = 0; i < cfg.D; ++i)
            kern::ew_mul_scalar(G.row(i), H(i, 0), G.row(i), G.cols());
    } else {
        kern::ew_mul(G.data(), H.data(), G.data(), G.size());
    }
    return num::matmul(params.W_o, G);
}

template <typename T>
Mat<T> pom_forward(const Mat<T>& X, const MaskSpec& mask, const MixerConfig& cfg,
                   const MixerParamsT<T>& params) {
    if (mask.kind() == MaskSpec::Kind::Full)
        return readout(X, state_full(X, cfg, params), cfg, params);
    return readout(X, state_masked(X, mask, cfg, params), cfg, params);
}

// ---------------------------------------------------------------------------
// Streaming decode
// ---------------------------------------------------------------------------

namespace {

// The streaming recurrences fold raw sums; mean aggregation rescales by the
// visible-token count at readout time only.
template <typename T>
Mat<T> stream_readout_state(const StreamStateT<T>& state, const MixerConfig& cfg) {
    if (cfg.aggregation == Aggregation::Mean)
        return num::scale(state.h, T(1) / T(state.tokens_seen));
    return state.h;
}

}  // namespace

template <typename T>
StreamStateT<T> stream_init(const MixerConfig& cfg, const MixerParamsT<T>& params) {
    cfg.validate();
    params.validate(cfg);
    StreamStateT<T> s;
    s.h = Mat<T>(cfg.D, 1);
    s.block_accum = Mat<T>(cfg.D, 1);
    return s;
}

template <typename T>
Mat<T> stream_step(StreamStateT<T>& state, const Mat<T>& x_t, const MixerConfig& cfg,
                   const MixerParamsT<T>& params) {
    if (x_t.cols() != 1)
        throw ShapeError("stream_step: expected a single column, got " + x_t.shape_str());
    Mat<T> f = poly_features(x_t, cfg, params);
    state.h = num::add(state.h, f);
    state.tokens_seen += 1;
    return readout(x_t, stream_readout_state(state, cfg), cfg, params);
}

template <typename T>
Mat<T> stream_block_step(StreamStateT<T>& state, const Mat<T>& X_block, std::size_t K,
                         const MixerConfig& cfg, const MixerParamsT<T>& params) {
    const std::size_t m = X_block.cols();
    if (m == 0) throw EmptySequenceError("stream_block_step: empty block");
    if (K < 1) throw DomainError("stream_block_step: block size K must be >= 1");
    if (m > K)
        throw BlockSizeError("stream_block_step: block of " + std::to_string(m) +
                             " tokens exceeds K = " + std::to_string(K));

    state.block_accum = num::reduce_rows_sum(poly_features(X_block, cfg, params));
    state.block_fill = m;

    state.h = num::add(state.h, state.block_accum);
    state.tokens_seen += m;
    Mat<T> Y = readout(X_block, stream_readout_state(state, cfg), cfg, params);

    // Block is folded; clear the pending accumulator.
    state.block_accum = Mat<T>(cfg.D, 1);
    state.block_fill = 0;
    return Y;
}

// ---------------------------------------------------------------------------

#define POM_INSTANTIATE_MIXER(T)                                                               \
    template struct MixerParamsT<T>;                                                          \
    template MixerParamsT<T> init_mixer_params<T>(const MixerConfig&, std::uint64_t);         \
    template Mat<T> poly_features<T>(const Mat<T>&, const MixerConfig&, const MixerParamsT<T>&); \
    template Mat<T> state_full<T>(const Mat<T>&, const MixerConfig&, const MixerParamsT<T>&); \
    template Mat<T> state_masked<T>(const Mat<T>&, const MaskSpec&, const MixerConfig&,       \
                                    const MixerParamsT<T>&);                                  \
    template Mat<T> readout<T>(const Mat<T>&, const Mat<T>&, const MixerConfig&,              \
                               const MixerParamsT<T>&);                                       \
    template Mat<T> pom_forward<T>(const Mat<T>&, const MaskSpec&, const MixerConfig&,        \
                                   const MixerParamsT<T>&);                                   \
    template StreamStateT<T> stream_init<T>(const MixerConfig&, const MixerParamsT<T>&);      \
    template Mat<T> stream_step<T>(StreamStateT<T>&, const Mat<T>&, const MixerConfig&,       \
                                   const MixerParamsT<T>&);                                   \
    template Mat<T> stream_block_step<T>(StreamStateT<T>&, const Mat<T>&, std::size_t,        \
                                         const MixerConfig&, const MixerParamsT<T>&);

POM_INSTANTIATE_MIXER(double)
POM_INSTANTIATE_MIXER(float)

#undef POM_INSTANTIATE_MIXER

}  // namespace pom
