#pragma once

#include <cstdint>

#include "pom/mixer.hpp"

namespace pom {

/** Multi-head self-attention weights; heads must divide d. */
template <typename T>
struct AttentionParamsT {
    Mat<T> W_q, W_k, W_v;  // d x d
    Mat<T> W_o;            // d x d
    std::size_t heads = 1;

    void validate() const;
};

using AttentionParams = AttentionParamsT<double>;
using AttentionParamsF = AttentionParamsT<float>;

template <typename T>
AttentionParamsT<T> init_attention_params(std::size_t d, std::size_t heads, std::uint64_t seed);

/**
 * Reference scaled-dot-product multi-head attention. Masked positions get an
 * additive -1e30 before the softmax, which bounds the achievable tolerance
 * but keeps their weight at an exact 0 after exp underflow. A mask row with
 * no visible position is an error.
 */
template <typename T>
Mat<T> mha_forward(const Mat<T>& X, const AttentionParamsT<T>& params, const MaskSpec& mask);

// Post-softmax weights of one head (rows sum to 1 over visible positions).
// Test/diagnostic surface; the forward pass computes the same matrix.
template <typename T>
Mat<T> mha_head_weights(const Mat<T>& X, const AttentionParamsT<T>& params, const MaskSpec& mask,
                        std::size_t head);

}  // namespace pom
