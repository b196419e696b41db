#include "pom/block.hpp"

#include <cmath>
#include <string>

#include "pom/rng.hpp"

namespace pom {

void FeedForwardParams::validate() const {
    const std::size_t m = W1.rows(), d = W1.cols();
    if (m < 1 || d < 1) throw DomainError("FeedForwardParams: empty weight");
    if (b1.rows() != m || b1.cols() != 1) throw ShapeError("FeedForwardParams: b1 shape");
    if (W2.rows() != d || W2.cols() != m) throw ShapeError("FeedForwardParams: W2 shape");
    if (b2.rows() != d || b2.cols() != 1) throw ShapeError("FeedForwardParams: b2 shape");
}

void PolyMorpherParams::validate() const {
    mixer_cfg.validate();
    mixer.validate(mixer_cfg);
    ff.validate();
    if (ff.dim() != mixer_cfg.d)
        throw ShapeError("PolyMorpherParams: feed-forward width " + std::to_string(ff.dim()) +
                         " != mixer d " + std::to_string(mixer_cfg.d));
}

void StackParams::validate() const {
    for (const auto& layer : layers) layer.validate();
    if (!layers.empty() && pos_encoding.rows() != layers.front().mixer_cfg.d)
        throw ShapeError("StackParams: positional table row count != d");
    if (pos_encoding.cols() != n_max) throw ShapeError("StackParams: positional table vs n_max");
}

FeedForwardParams init_ff_params(std::size_t d, std::size_t m, Activation act,
                                 std::uint64_t seed) {
    Rng rng(seed);
    const double b_in = 1.0 / std::sqrt(double(d));
    const double b_mid = 1.0 / std::sqrt(double(m));
    FeedForwardParams ff;
    ff.W1 = rng.uniform_matrix<double>(m, d, -b_in, b_in);
    ff.b1 = Matrix(m, 1);
    ff.W2 = rng.uniform_matrix<double>(d, m, -b_mid, b_mid);
    ff.b2 = Matrix(d, 1);
    ff.activation = act;
    return ff;
}

PolyMorpherParams init_polymorpher_params(const MixerConfig& cfg, std::size_t ff_hidden,
                                          std::uint64_t seed) {
    PolyMorpherParams p;
    p.mixer_cfg = cfg;
    p.mixer = init_mixer_params<double>(cfg, seed);
    if (ff_hidden == 0) ff_hidden = 4 * cfg.d;
    p.ff = init_ff_params(cfg.d, ff_hidden, Activation::Gelu, seed ^ 0x9E3779B97F4A7C15ull);
    return p;
}

StackParams init_stack_params(const MixerConfig& cfg, std::size_t num_layers, std::size_t n_max,
                              std::uint64_t seed) {
    StackParams s;
    s.n_max = n_max;
    Rng rng(seed);
    s.pos_encoding = rng.normal_matrix<double>(cfg.d, n_max, 0.0, 0.02);
    for (std::size_t l = 0; l < num_layers; ++l)
        s.layers.push_back(init_polymorpher_params(cfg, 0, seed + 1000 * (l + 1)));
    return s;
}

Matrix feed_forward(const Matrix& X, const FeedForwardParams& ff) {
    ff.validate();
    if (X.rows() != ff.dim())
        throw ShapeError("feed_forward: X has " + std::to_string(X.rows()) + " rows, expected " +
                         std::to_string(ff.dim()));
    Matrix hidden = num::apply_activation(num::add(num::matmul(ff.W1, X), ff.b1), ff.activation);
    return num::add(num::matmul(ff.W2, hidden), ff.b2);
}

Matrix layer_norm_cols(const Matrix& X, double eps) {
    const std::size_t d = X.rows(), n = X.cols();
    Matrix out(d, n);
    for (std::size_t t = 0; t < n; ++t) {
        double mean = 0.0;
        for (std::size_t i = 0; i < d; ++i) mean += X(i, t);
        mean /= double(d);
        double var = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double c = X(i, t) - mean;
            var += c * c;
        }
        var /= double(d);
        const double inv = 1.0 / std::sqrt(var + eps);
        for (std::size_t i = 0; i < d; ++i) out(i, t) = (X(i, t) - mean) * inv;
    }
    return out;
}

Matrix polymorpher_forward(const Matrix& X, const PolyMorpherParams& params,
                           const MaskSpec& mask) {
    params.validate();
    const Matrix& mix_in = X;
    Matrix pom_out =
        params.pre_norm
            ? pom_forward(layer_norm_cols(mix_in), mask, params.mixer_cfg, params.mixer)
            : pom_forward(mix_in, mask, params.mixer_cfg, params.mixer);
    Matrix resid = num::add(X, pom_out);
    Matrix ff_out = params.pre_norm ? feed_forward(layer_norm_cols(resid), params.ff)
                                    : feed_forward(resid, params.ff);
    return num::add(resid, ff_out);
}

Matrix stack_forward(const Matrix& X, const StackParams& stack, const MaskSpec& mask) {
    stack.validate();
    const std::size_t n = X.cols();
    if (n > stack.n_max)
        throw LengthError("stack_forward: sequence length " + std::to_string(n) +
                          " exceeds positional table n_max " + std::to_string(stack.n_max));
    if (X.rows() != stack.pos_encoding.rows())
        throw ShapeError("stack_forward: X row count != positional table");
    Matrix cur = num::add(X, stack.pos_encoding.cols_slice(0, n));
    for (const auto& layer : stack.layers) cur = polymorpher_forward(cur, layer, mask);
    return cur;
}

}  // namespace pom
