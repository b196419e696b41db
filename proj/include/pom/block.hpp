#pragma once

#include <cstdint>
#include <vector>

#include "pom/mixer.hpp"

namespace pom {

/** Two-layer feed-forward net applied per token. */
struct FeedForwardParams {
    Matrix W1;  // m x d
    Matrix b1;  // m x 1
    Matrix W2;  // d x m
    Matrix b2;  // d x 1
    Activation activation = Activation::Gelu;

    void validate() const;
    std::size_t dim() const { return W1.cols(); }
    std::size_t hidden() const { return W1.rows(); }
};

/** One PolyMorpher block: residual mixer followed by residual feed-forward. */
struct PolyMorpherParams {
    MixerConfig mixer_cfg;
    MixerParams mixer;
    FeedForwardParams ff;
    bool pre_norm = false;  // normalize branch inputs only; residual untouched

    void validate() const;
};

/** A stack of blocks behind a learned positional table. */
struct StackParams {
    std::vector<PolyMorpherParams> layers;
    Matrix pos_encoding;  // d x n_max
    std::size_t n_max = 0;

    void validate() const;
};

// ff hidden width m defaults to 4d.
FeedForwardParams init_ff_params(std::size_t d, std::size_t m, Activation act,
                                 std::uint64_t seed);
PolyMorpherParams init_polymorpher_params(const MixerConfig& cfg, std::size_t ff_hidden,
                                          std::uint64_t seed);
StackParams init_stack_params(const MixerConfig& cfg, std::size_t num_layers,
                              std::size_t n_max, std::uint64_t seed);

// W2 * act(W1 * X + b1) + b2, biases broadcast across columns.
Matrix feed_forward(const Matrix& X, const FeedForwardParams& ff);

// X + PoM(X) + FF(X + PoM(X)); with pre_norm, each branch sees a normalized
// copy of its input while the residual stream flows through unchanged.
Matrix polymorpher_forward(const Matrix& X, const PolyMorpherParams& params,
                           const MaskSpec& mask);

// Adds pos_encoding[:, 0..n) to X, then applies the layers in order.
Matrix stack_forward(const Matrix& X, const StackParams& stack, const MaskSpec& mask);

// Per-column layer normalization (zero mean, unit variance over the feature
// dimension); parameter-free.
Matrix layer_norm_cols(const Matrix& X, double eps = 1e-5);

}  // namespace pom
