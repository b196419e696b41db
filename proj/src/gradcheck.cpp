#include "pom/gradcheck.hpp"

#include <cmath>

namespace pom {

namespace {

// d h(u) / du evaluated from u and v = h(u).
double activation_deriv(Activation a, double u, double v) {
    switch (a) {
        case Activation::Tanh: return 1.0 - v * v;
        case Activation::Identity: return 1.0;
        case Activation::Relu: return u > 0.0 ? 1.0 : 0.0;
        case Activation::Gelu: {
            constexpr double inv_sqrt2 = 0.70710678118654752440;
            constexpr double inv_sqrt2pi = 0.39894228040143267794;
            const double cdf = 0.5 * (1.0 + std::erf(u * inv_sqrt2));
            return cdf + u * inv_sqrt2pi * std::exp(-0.5 * u * u);
        }
    }
    return 0.0;
}

}  // namespace

GradientBundle pom_backward(const Matrix& X, const MaskSpec& mask, const MixerConfig& cfg,
                            const MixerParams& params, const Matrix& upstream) {
    cfg.validate();
    params.validate(cfg);
    const std::size_t d = cfg.d, D = cfg.D, n = X.cols();
    const int k = cfg.k;
    if (X.rows() != d) throw ShapeError("pom_backward: X row count != d");
    if (upstream.rows() != d || upstream.cols() != n)
        throw ShapeError("pom_backward: upstream must be " + std::to_string(d) + "x" +
                         std::to_string(n));
    if (n == 0) throw EmptySequenceError("pom_backward: empty sequence");

    // Recompute the forward intermediates.
    Matrix M = mask.materialize<double>(n);
    Matrix U = num::matmul(params.W_h, X);
    Matrix V = num::apply_activation(U, cfg.activation);
    Matrix F(D, n);
    for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t t = 0; t < n; ++t) {
            double vp = V(i, t), acc = 0.0;
            for (int p = 1; p <= k; ++p) {
                acc += params.alpha(i, p - 1) * vp;
                vp *= V(i, t);
            }
            F(i, t) = acc;
        }
    }
    std::vector<std::size_t> cnt(n, 0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t) cnt[s] += M(s, t) != 0.0;
    Matrix H(D, n);
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t s = 0; s < n; ++s) {
            double acc = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                if (M(s, t) != 0.0) acc += F(i, t);
            if (cfg.aggregation == Aggregation::Mean && cnt[s] > 0) acc /= double(cnt[s]);
            H(i, s) = acc;
        }
    Matrix S = num::sigmoid(num::matmul(params.W_s, X));
    Matrix G = num::hadamard(S, H);

    // Reverse pass.
    GradientBundle g;
    g.d_W_o = num::matmul(upstream, num::transpose(G));
    Matrix dG = num::matmul(num::transpose(params.W_o), upstream);
    Matrix dS = num::hadamard(dG, H);
    Matrix dH = num::hadamard(dG, S);

    // Through the masked aggregation: dF(:,t) = sum_s M(s,t) dH(:,s) / cnt_s.
    Matrix dF(D, n);
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t t = 0; t < n; ++t) {
            double acc = 0.0;
            for (std::size_t s = 0; s < n; ++s)
                if (M(s, t) != 0.0) {
                    double w = dH(i, s);
                    if (cfg.aggregation == Aggregation::Mean && cnt[s] > 0)
                        w /= double(cnt[s]);
                    acc += w;
                }
            dF(i, t) = acc;
        }

    // Through the polynomial: d alpha and dV.
    g.d_alpha = Matrix(D, std::size_t(k));
    Matrix dV(D, n);
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t t = 0; t < n; ++t) {
            const double v = V(i, t);
            double vp = v;           // v^p
            double vpm1 = 1.0;       // v^(p-1)
            double dv = 0.0;
            for (int p = 1; p <= k; ++p) {
                g.d_alpha(i, p - 1) += dF(i, t) * vp;
                dv += double(p) * params.alpha(i, p - 1) * vpm1;
                vpm1 = vp;
                vp *= v;
            }
            dV(i, t) = dF(i, t) * dv;
        }

    Matrix dU(D, n);
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t t = 0; t < n; ++t)
            dU(i, t) = dV(i, t) * activation_deriv(cfg.activation, U(i, t), V(i, t));

    // Through the gate.
    Matrix dZ(D, n);
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t t = 0; t < n; ++t)
            dZ(i, t) = dS(i, t) * S(i, t) * (1.0 - S(i, t));

    Matrix Xt = num::transpose(X);
    g.d_W_h = num::matmul(dU, Xt);
    g.d_W_s = num::matmul(dZ, Xt);
    g.d_X = num::add(num::matmul(num::transpose(params.W_h), dU),
                     num::matmul(num::transpose(params.W_s), dZ));
    return g;
}

Matrix finite_difference(const std::function<double(const Matrix&)>& fn, const Matrix& at,
                         double eps) {
    if (!(eps > 0.0)) throw DomainError("finite_difference: eps must be positive");
    Matrix grad(at.rows(), at.cols());
    Matrix probe = at;
    for (std::size_t idx = 0; idx < at.size(); ++idx) {
        const double orig = probe.data()[idx];
        probe.data()[idx] = orig + eps;
        const double fp = fn(probe);
        probe.data()[idx] = orig - eps;
        const double fm = fn(probe);
        probe.data()[idx] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NonFiniteError("finite_difference: function produced a non-finite value");
        grad.data()[idx] = (fp - fm) / (2.0 * eps);
    }
    return grad;
}

double grad_rel_error(double analytic, double numeric) {
    const double denom =
        std::max(1.0, std::max(std::fabs(analytic), std::fabs(numeric)));
    return std::fabs(analytic - numeric) / denom;
}

}  // namespace pom
