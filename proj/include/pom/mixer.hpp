#pragma once

#include <cstdint>
#include <cstddef>

#include "pom/matrix.hpp"
#include "pom/numerics.hpp"

namespace pom {

/**
 * Hyperparameters of one Polynomial Mixer layer.
 *
 * d  — token (model) dimension
 * D  — internal feature dimension
 * k  — polynomial degree (>= 1)
 * activation  — the nonlinearity applied to W_h X before exponentiation
 * aggregation — how per-token features combine into the shared state
 */
struct MixerConfig {
    std::size_t d = 0;
    std::size_t D = 0;
    int k = 1;
    Activation activation = Activation::Tanh;
    Aggregation aggregation = Aggregation::Sum;

    void validate() const;
};

/** Learnable matrices of one mixer layer. */
template <typename T>
struct MixerParamsT {
    Mat<T> W_h;    // D x d, feature projection
    Mat<T> W_s;    // D x d, gate projection
    Mat<T> W_o;    // d x D, output projection
    Mat<T> alpha;  // D x k, polynomial coefficients; column p-1 scales degree p

    void validate(const MixerConfig& cfg) const;
};

using MixerParams = MixerParamsT<double>;
using MixerParamsF = MixerParamsT<float>;

// Deterministic init: projections i.i.d. uniform in [-1/sqrt(d), 1/sqrt(d)];
// alpha column for degree p is 1 at p=1 and 0.1^(p-1) above, so the linear
// term dominates at init.
template <typename T>
MixerParamsT<T> init_mixer_params(const MixerConfig& cfg, std::uint64_t seed);

/**
 * Visibility mask over token pairs. Entry (s, t) = 1 means token s may use
 * information from token t.
 *
 *   full          — every token sees the whole sequence
 *   causal        — s sees t iff t <= s (diagonal included)
 *   block_causal  — with 0-based positions and blocks [b*K, (b+1)*K), s sees
 *                   t iff t's block <= s's block (everything through the end
 *                   of s's own block)
 *   explicit      — caller-provided binary n x n matrix
 */
class MaskSpec {
public:
    enum class Kind { Full, Causal, BlockCausal, Explicit };

    static MaskSpec full() { return MaskSpec(Kind::Full, 0, {}); }
    static MaskSpec causal() { return MaskSpec(Kind::Causal, 0, {}); }
    static MaskSpec block_causal(std::size_t block_size);
    static MaskSpec explicit_mask(Matrix m);  // entries must be exactly 0 or 1

    Kind kind() const { return kind_; }
    std::size_t block_size() const { return block_size_; }
    const Matrix& matrix() const { return explicit_; }

    // Dense n x n realization. Explicit masks must already have size n.
    template <typename T>
    Mat<T> materialize(std::size_t n) const;

private:
    MaskSpec(Kind k, std::size_t bs, Matrix m)
        : kind_(k), block_size_(bs), explicit_(std::move(m)) {}

    Kind kind_;
    std::size_t block_size_;
    Matrix explicit_;
};

/**
 * Running state for causal / block-causal decoding. Single-owner: one stream
 * of tokens mutates it sequentially.
 */
template <typename T>
struct StreamStateT {
    Mat<T> h;                      // D x 1 state folded over completed tokens/blocks
    std::size_t tokens_seen = 0;
    Mat<T> block_accum;            // D x 1 feature sum of the block being processed
    std::size_t block_fill = 0;    // tokens in block_accum (cleared when folded)
};

using StreamState = StreamStateT<double>;

// ---------------------------------------------------------------------------
// Forward operations
// ---------------------------------------------------------------------------

// Per-token polynomial features: column t is sum_{p=1..k} alpha[:,p] ⊙
// h(W_h x_t)^p. Shape D x n.
template <typename T>
Mat<T> poly_features(const Mat<T>& X, const MixerConfig& cfg, const MixerParamsT<T>& params);

// Shared state over the whole sequence (sum or mean of poly_features
// columns). Shape D x 1. Empty sequences are an error.
template <typename T>
Mat<T> state_full(const Mat<T>& X, const MixerConfig& cfg, const MixerParamsT<T>& params);

// Per-token state under a mask: column s combines the features of exactly
// the tokens visible to s. Shape D x n. Causal and block-causal masks run in
// O(n D) via prefix folding; explicit masks accumulate densely.
template <typename T>
Mat<T> state_masked(const Mat<T>& X, const MaskSpec& mask, const MixerConfig& cfg,
                    const MixerParamsT<T>& params);

// Gated readout: W_o [ sigmoid(W_s X) ⊙ H ]. H is either D x 1 (broadcast)
// or D x n. Shape d x n.
template <typename T>
Mat<T> readout(const Mat<T>& X, const Mat<T>& H, const MixerConfig& cfg,
               const MixerParamsT<T>& params);

// Full layer: state under the mask, then readout.
template <typename T>
Mat<T> pom_forward(const Mat<T>& X, const MaskSpec& mask, const MixerConfig& cfg,
                   const MixerParamsT<T>& params);

// ---------------------------------------------------------------------------
// Streaming decode
// ---------------------------------------------------------------------------

template <typename T>
StreamStateT<T> stream_init(const MixerConfig& cfg, const MixerParamsT<T>& params);

// Consume one token; returns its output column. Constant work per call.
// After t calls the state matches column t-1 of the causal batched form.
template <typename T>
Mat<T> stream_step(StreamStateT<T>& state, const Mat<T>& x_t, const MixerConfig& cfg,
                   const MixerParamsT<T>& params);

// Consume one block of m <= K tokens (the final block may be partial; blocks
// arrive in order). Every token in the block reads the folded state plus the
// whole current block, then the block folds into the state.
template <typename T>
Mat<T> stream_block_step(StreamStateT<T>& state, const Mat<T>& X_block, std::size_t K,
                         const MixerConfig& cfg, const MixerParamsT<T>& params);

}  // namespace pom
