#include "pom/kernels.hpp"

#include <atomic>
#include <cmath>

#include "kernels_impl.hpp"
#include "pom/error.hpp"

namespace pom::kern {

bool cpu_has_avx2() {
#if POM_X86_64 && defined(__GNUC__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend preferred_backend() {
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

namespace {
std::atomic<Backend> g_backend{preferred_backend()};
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !cpu_has_avx2())
        throw DomainError("set_backend: AVX2 not supported on this CPU");
    g_backend.store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "?";
}

#if POM_X86_64
#define POM_DISPATCH(scalar_call, avx2_call)                   \
    if (active_backend() == Backend::Avx2) {                   \
        detail::avx2_call;                                     \
    } else {                                                   \
        detail::scalar_call;                                   \
    }
#else
#define POM_DISPATCH(scalar_call, avx2_call) detail::scalar_call;
#endif

template <typename T>
void matmul(const T* a, std::size_t m, std::size_t k, const T* b, std::size_t n, T* c) {
    POM_DISPATCH(matmul_scalar(a, m, k, b, n, c), matmul_avx2(a, m, k, b, n, c))
}

template <typename T>
void ew_add(const T* a, const T* b, T* out, std::size_t n) {
    POM_DISPATCH(ew_add_scalar_k(a, b, out, n), ew_add_avx2(a, b, out, n))
}

template <typename T>
void ew_mul(const T* a, const T* b, T* out, std::size_t n) {
    POM_DISPATCH(ew_mul_scalar_k(a, b, out, n), ew_mul_avx2(a, b, out, n))
}

template <typename T>
void ew_add_scalar(const T* a, T s, T* out, std::size_t n) {
    POM_DISPATCH(ew_adds_scalar_k(a, s, out, n), ew_adds_avx2(a, s, out, n))
}

template <typename T>
void ew_mul_scalar(const T* a, T s, T* out, std::size_t n) {
    POM_DISPATCH(ew_muls_scalar_k(a, s, out, n), ew_muls_avx2(a, s, out, n))
}

template <typename T>
void ew_pow(const T* a, int p, T* out, std::size_t n) {
    POM_DISPATCH(ew_pow_scalar_k(a, p, out, n), ew_pow_avx2(a, p, out, n))
}

template <typename T>
void ew_relu(const T* a, T* out, std::size_t n) {
    POM_DISPATCH(ew_relu_scalar_k(a, out, n), ew_relu_avx2(a, out, n))
}

template <typename T>
void poly_eval_row(const T* v, std::size_t n, const T* coeff, std::size_t k, T* out) {
    POM_DISPATCH(poly_eval_row_scalar(v, n, coeff, k, out),
                 poly_eval_row_avx2(v, n, coeff, k, out))
}

#undef POM_DISPATCH

// ----------------------------------------------------------------------------
// Order-fixed kernels, shared by all backends
// ----------------------------------------------------------------------------

template <typename T>
void row_sum(const T* a, std::size_t rows, std::size_t cols, const std::uint8_t* selector,
             T* out) {
    for (std::size_t i = 0; i < rows; ++i) {
        const T* arow = a + i * cols;
        T acc = T(0);
        if (selector) {
            for (std::size_t j = 0; j < cols; ++j)
                if (selector[j]) acc = acc + arow[j];
        } else {
            for (std::size_t j = 0; j < cols; ++j) acc = acc + arow[j];
        }
        out[i] = acc;
    }
}

template <typename T>
void ew_sigmoid(const T* a, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const T x = a[i];
        if (x >= T(0)) {
            const T e = std::exp(-x);
            out[i] = T(1) / (T(1) + e);
        } else {
            const T e = std::exp(x);
            out[i] = e / (T(1) + e);
        }
    }
}

template <typename T>
void ew_tanh(const T* a, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(a[i]);
}

template <typename T>
void ew_gelu(const T* a, T* out, std::size_t n) {
    constexpr T inv_sqrt2 = T(0.70710678118654752440);
    for (std::size_t i = 0; i < n; ++i) {
        const T x = a[i];
        out[i] = T(0.5) * x * (T(1) + std::erf(x * inv_sqrt2));
    }
}

#define POM_INSTANTIATE_DISPATCH(T)                                                      \
    template void matmul<T>(const T*, std::size_t, std::size_t, const T*, std::size_t, T*); \
    template void ew_add<T>(const T*, const T*, T*, std::size_t);                        \
    template void ew_mul<T>(const T*, const T*, T*, std::size_t);                        \
    template void ew_add_scalar<T>(const T*, T, T*, std::size_t);                        \
    template void ew_mul_scalar<T>(const T*, T, T*, std::size_t);                        \
    template void ew_pow<T>(const T*, int, T*, std::size_t);                             \
    template void ew_relu<T>(const T*, T*, std::size_t);                                 \
    template void poly_eval_row<T>(const T*, std::size_t, const T*, std::size_t, T*);    \
    template void row_sum<T>(const T*, std::size_t, std::size_t, const std::uint8_t*, T*); \
    template void ew_sigmoid<T>(const T*, T*, std::size_t);                              \
    template void ew_tanh<T>(const T*, T*, std::size_t);                                 \
    template void ew_gelu<T>(const T*, T*, std::size_t);

POM_INSTANTIATE_DISPATCH(double)
POM_INSTANTIATE_DISPATCH(float)

#undef POM_INSTANTIATE_DISPATCH

}  // namespace pom::kern
