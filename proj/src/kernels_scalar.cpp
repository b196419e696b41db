// Scalar reference kernels. These define the numerical semantics; the AVX2
// variants must reproduce them bit for bit.

#include <cmath>
#include <cstring>

#include "kernels_impl.hpp"

namespace pom::kern::detail {

template <typename T>
void matmul_scalar(const T* a, std::size_t m, std::size_t k, const T* b, std::size_t n, T* c) {
    std::memset(c, 0, m * n * sizeof(T));
    const std::size_t jb = matmul_block_cols(k, sizeof(T));
    for (std::size_t j0 = 0; j0 < n; j0 += jb) {
        const std::size_t j1 = std::min(n, j0 + jb);
        for (std::size_t i = 0; i < m; ++i) {
            const T* arow = a + i * k;
            T* crow = c + i * n;
            for (std::size_t kk = 0; kk < k; ++kk) {
                const T aik = arow[kk];
                const T* brow = b + kk * n;
                for (std::size_t j = j0; j < j1; ++j) {
                    crow[j] = crow[j] + aik * brow[j];
                }
            }
        }
    }
}

template <typename T>
void ew_add_scalar_k(const T* a, const T* b, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

template <typename T>
void ew_mul_scalar_k(const T* a, const T* b, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

template <typename T>
void ew_adds_scalar_k(const T* a, T s, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s;
}

template <typename T>
void ew_muls_scalar_k(const T* a, T s, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

template <typename T>
void ew_pow_scalar_k(const T* a, int p, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        T x = a[i];
        T acc = x;
        for (int q = 1; q < p; ++q) acc = acc * x;
        out[i] = acc;
    }
}

template <typename T>
void ew_relu_scalar_k(const T* a, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > T(0) ? a[i] : T(0);
}

template <typename T>
void poly_eval_row_scalar(const T* v, std::size_t n, const T* coeff, std::size_t k, T* out) {
    for (std::size_t t = 0; t < n; ++t) {
        const T x = v[t];
        T acc = coeff[k - 1];
        for (std::size_t j = k - 1; j-- > 0;) {
            acc = coeff[j] + x * acc;
        }
        out[t] = x * acc;
    }
}

#define POM_INSTANTIATE_SCALAR(T)                                                              \
    template void matmul_scalar<T>(const T*, std::size_t, std::size_t, const T*, std::size_t, \
                                   T*);                                                        \
    template void ew_add_scalar_k<T>(const T*, const T*, T*, std::size_t);                    \
    template void ew_mul_scalar_k<T>(const T*, const T*, T*, std::size_t);                    \
    template void ew_adds_scalar_k<T>(const T*, T, T*, std::size_t);                          \
    template void ew_muls_scalar_k<T>(const T*, T, T*, std::size_t);                          \
    template void ew_pow_scalar_k<T>(const T*, int, T*, std::size_t);                         \
    template void ew_relu_scalar_k<T>(const T*, T*, std::size_t);                             \
    template void poly_eval_row_scalar<T>(const T*, std::size_t, const T*, std::size_t, T*);

POM_INSTANTIATE_SCALAR(double)
POM_INSTANTIATE_SCALAR(float)

#undef POM_INSTANTIATE_SCALAR

}  // namespace pom::kern::detail
