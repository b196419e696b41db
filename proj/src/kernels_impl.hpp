#pragma once

// Internal: per-backend kernel entry points wired up by kernels_dispatch.cpp.

#include <cstddef>

#include <algorithm>

#if defined(__x86_64__) || defined(_M_X64)
#define POM_X86_64 1
#else
#define POM_X86_64 0
#endif

namespace pom::kern::detail {

// Column-block width for matmul: keeps a k x jb slab of B cache-resident so
// B is streamed from memory once instead of once per output row. Blocking
// only regroups the j loop; every c(i,j) still folds over k in ascending
// order, so results are independent of the block width.
inline std::size_t matmul_block_cols(std::size_t k, std::size_t elem_size) {
    std::size_t jb = (256 * 1024) / (elem_size * std::max<std::size_t>(k, 1));
    jb = std::max<std::size_t>(jb & ~std::size_t(15), 16);
    return jb;
}

template <typename T>
void matmul_scalar(const T* a, std::size_t m, std::size_t k, const T* b, std::size_t n, T* c);
template <typename T>
void ew_add_scalar_k(const T* a, const T* b, T* out, std::size_t n);
template <typename T>
void ew_mul_scalar_k(const T* a, const T* b, T* out, std::size_t n);
template <typename T>
void ew_adds_scalar_k(const T* a, T s, T* out, std::size_t n);
template <typename T>
void ew_muls_scalar_k(const T* a, T s, T* out, std::size_t n);
template <typename T>
void ew_pow_scalar_k(const T* a, int p, T* out, std::size_t n);
template <typename T>
void ew_relu_scalar_k(const T* a, T* out, std::size_t n);
template <typename T>
void poly_eval_row_scalar(const T* v, std::size_t n, const T* coeff, std::size_t k, T* out);

#if POM_X86_64
void matmul_avx2(const double* a, std::size_t m, std::size_t k, const double* b, std::size_t n,
                 double* c);
void matmul_avx2(const float* a, std::size_t m, std::size_t k, const float* b, std::size_t n,
                 float* c);
void ew_add_avx2(const double* a, const double* b, double* out, std::size_t n);
void ew_add_avx2(const float* a, const float* b, float* out, std::size_t n);
void ew_mul_avx2(const double* a, const double* b, double* out, std::size_t n);
void ew_mul_avx2(const float* a, const float* b, float* out, std::size_t n);
void ew_adds_avx2(const double* a, double s, double* out, std::size_t n);
void ew_adds_avx2(const float* a, float s, float* out, std::size_t n);
void ew_muls_avx2(const double* a, double s, double* out, std::size_t n);
void ew_muls_avx2(const float* a, float s, float* out, std::size_t n);
void ew_pow_avx2(const double* a, int p, double* out, std::size_t n);
void ew_pow_avx2(const float* a, int p, float* out, std::size_t n);
void ew_relu_avx2(const double* a, double* out, std::size_t n);
void ew_relu_avx2(const float* a, float* out, std::size_t n);
void poly_eval_row_avx2(const double* v, std::size_t n, const double* coeff, std::size_t k,
                        double* out);
void poly_eval_row_avx2(const float* v, std::size_t n, const float* coeff, std::size_t k,
                        float* out);
#endif

}  // namespace pom::kern::detail
