#pragma once

#include <functional>

#include "pom/mixer.hpp"

namespace pom {

/** Gradients of sum(upstream ⊙ PoM(X)) with respect to each parameter and X. */
struct GradientBundle {
    Matrix d_W_h;   // D x d
    Matrix d_W_s;   // D x d
    Matrix d_W_o;   // d x D
    Matrix d_alpha; // D x k
    Matrix d_X;     // d x n
};

/**
 * Exact reverse-mode gradients through the masked mixer. Masked-out token
 * pairs contribute nothing, so their gradient paths are zero. upstream must
 * be d x n.
 */
GradientBundle pom_backward(const Matrix& X, const MaskSpec& mask, const MixerConfig& cfg,
                            const MixerParams& params, const Matrix& upstream);

/**
 * Central finite differences of a scalar function, entry by entry:
 * (fn(at + eps e_ij) - fn(at - eps e_ij)) / (2 eps). Throws NonFiniteError
 * if fn produces NaN/Inf.
 */
Matrix finite_difference(const std::function<double(const Matrix&)>& fn, const Matrix& at,
                         double eps);

// |a - b| / max(1, |a|, |b|), the metric the gradient checks use.
double grad_rel_error(double analytic, double numeric);

}  // namespace pom
