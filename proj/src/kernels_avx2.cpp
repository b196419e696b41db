// AVX2 kernel variants. Compiled with -mavx2 in its own TU; only reached
// when runtime detection says the CPU supports it.
//
// Bit-compatibility contract with the scalar reference: lanes carry
// independent output elements, every accumulation chain folds in the same
// ascending order, and multiply/add stay separate instructions (no FMA).

#include "kernels_impl.hpp"

#if POM_X86_64

#include <immintrin.h>

#include <cstring>

namespace pom::kern::detail {

// ----------------------------------------------------------------------------
// matmul: C(i,j) = fold over k of A(i,k)*B(k,j). Register-tiled over j; each
// output element keeps a single fold chain, so grouping matches the scalar
// memory-accumulated version exactly.
// ----------------------------------------------------------------------------

void matmul_avx2(const double* a, std::size_t m, std::size_t k, const double* b, std::size_t n,
                 double* c) {
    constexpr std::size_t W = 4;  // doubles per __m256d
    const std::size_t jb = matmul_block_cols(k, sizeof(double));
    for (std::size_t j0 = 0; j0 < n; j0 += jb) {
        const std::size_t j1 = std::min(n, j0 + jb);
        for (std::size_t i = 0; i < m; ++i) {
            const double* arow = a + i * k;
            double* crow = c + i * n;
            std::size_t j = j0;
            for (; j + 4 * W <= j1; j += 4 * W) {
                __m256d acc0 = _mm256_setzero_pd();
                __m256d acc1 = _mm256_setzero_pd();
                __m256d acc2 = _mm256_setzero_pd();
                __m256d acc3 = _mm256_setzero_pd();
                for (std::size_t kk = 0; kk < k; ++kk) {
                    const __m256d av = _mm256_set1_pd(arow[kk]);
                    const double* bp = b + kk * n + j;
                    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(av, _mm256_loadu_pd(bp)));
                    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(av, _mm256_loadu_pd(bp + W)));
                    acc2 = _mm256_add_pd(acc2, _mm256_mul_pd(av, _mm256_loadu_pd(bp + 2 * W)));
                    acc3 = _mm256_add_pd(acc3, _mm256_mul_pd(av, _mm256_loadu_pd(bp + 3 * W)));
                }
                _mm256_storeu_pd(crow + j, acc0);
                _mm256_storeu_pd(crow + j + W, acc1);
                _mm256_storeu_pd(crow + j + 2 * W, acc2);
                _mm256_storeu_pd(crow + j + 3 * W, acc3);
            }
            for (; j + W <= j1; j += W) {
                __m256d acc = _mm256_setzero_pd();
                for (std::size_t kk = 0; kk < k; ++kk) {
                    const __m256d av = _mm256_set1_pd(arow[kk]);
                    acc = _mm256_add_pd(acc, _mm256_mul_pd(av, _mm256_loadu_pd(b + kk * n + j)));
                }
                _mm256_storeu_pd(crow + j, acc);
            }
            for (; j < j1; ++j) {
                double acc = 0.0;
                for (std::size_t kk = 0; kk < k; ++kk) acc = acc + arow[kk] * b[kk * n + j];
                crow[j] = acc;
            }
        }
    }
}

void matmul_avx2(const float* a, std::size_t m, std::size_t k, const float* b, std::size_t n,
                 float* c) {
    constexpr std::size_t W = 8;  // floats per __m256
    const std::size_t jb = matmul_block_cols(k, sizeof(float));
    for (std::size_t j0 = 0; j0 < n; j0 += jb) {
        const std::size_t j1 = std::min(n, j0 + jb);
        for (std::size_t i = 0; i < m; ++i) {
            const float* arow = a + i * k;
            float* crow = c + i * n;
            std::size_t j = j0;
            for (; j + 2 * W <= j1; j += 2 * W) {
                __m256 acc0 = _mm256_setzero_ps();
                __m256 acc1 = _mm256_setzero_ps();
                for (std::size_t kk = 0; kk < k; ++kk) {
                    const __m256 av = _mm256_set1_ps(arow[kk]);
                    const float* bp = b + kk * n + j;
                    acc0 = _mm256_add_ps(acc0, _mm256_mul_ps(av, _mm256_loadu_ps(bp)));
                    acc1 = _mm256_add_ps(acc1, _mm256_mul_ps(av, _mm256_loadu_ps(bp + W)));
                }
                _mm256_storeu_ps(crow + j, acc0);
                _mm256_storeu_ps(crow + j + W, acc1);
            }
            for (; j + W <= j1; j += W) {
                __m256 acc = _mm256_setzero_ps();
                for (std::size_t kk = 0; kk < k; ++kk) {
                    const __m256 av = _mm256_set1_ps(arow[kk]);
                    acc = _mm256_add_ps(acc, _mm256_mul_ps(av, _mm256_loadu_ps(b + kk * n + j)));
                }
                _mm256_storeu_ps(crow + j, acc);
            }
            for (; j < j1; ++j) {
                float acc = 0.0f;
                for (std::size_t kk = 0; kk < k; ++kk) acc = acc + arow[kk] * b[kk * n + j];
                crow[j] = acc;
            }
        }
    }
}

// ----------------------------------------------------------------------------
// Elementwise maps
// ----------------------------------------------------------------------------

void ew_add_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void ew_add_avx2(const float* a, const float* b, float* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void ew_mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void ew_mul_avx2(const float* a, const float* b, float* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void ew_adds_avx2(const double* a, double s, double* out, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), sv));
    for (; i < n; ++i) out[i] = a[i] + s;
}

void ew_adds_avx2(const float* a, float s, float* out, std::size_t n) {
    const __m256 sv = _mm256_set1_ps(s);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(a + i), sv));
    for (; i < n; ++i) out[i] = a[i] + s;
}

void ew_muls_avx2(const double* a, double s, double* out, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), sv));
    for (; i < n; ++i) out[i] = a[i] * s;
}

void ew_muls_avx2(const float* a, float s, float* out, std::size_t n) {
    const __m256 sv = _mm256_set1_ps(s);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(a + i), sv));
    for (; i < n; ++i) out[i] = a[i] * s;
}

void ew_pow_avx2(const double* a, int p, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(a + i);
        __m256d acc = x;
        for (int q = 1; q < p; ++q) acc = _mm256_mul_pd(acc, x);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) {
        double x = a[i], acc = x;
        for (int q = 1; q < p; ++q) acc = acc * x;
        out[i] = acc;
    }
}

void ew_pow_avx2(const float* a, int p, float* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 x = _mm256_loadu_ps(a + i);
        __m256 acc = x;
        for (int q = 1; q < p; ++q) acc = _mm256_mul_ps(acc, x);
        _mm256_storeu_ps(out + i, acc);
    }
    for (; i < n; ++i) {
        float x = a[i], acc = x;
        for (int q = 1; q < p; ++q) acc = acc * x;
        out[i] = acc;
    }
}

// vmaxpd(a, 0) returns the second operand when a == ±0, matching the scalar
// (a > 0 ? a : 0) convention for negative zero.
void ew_relu_avx2(const double* a, double* out, std::size_t n) {
    const __m256d z = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(a + i), z));
    for (; i < n; ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void ew_relu_avx2(const float* a, float* out, std::size_t n) {
    const __m256 z = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_max_ps(_mm256_loadu_ps(a + i), z));
    for (; i < n; ++i) out[i] = a[i] > 0.0f ? a[i] : 0.0f;
}

void poly_eval_row_avx2(const double* v, std::size_t n, const double* coeff, std::size_t k,
                        double* out) {
    std::size_t t = 0;
    const __m256d ck = _mm256_set1_pd(coeff[k - 1]);
    for (; t + 4 <= n; t += 4) {
        const __m256d x = _mm256_loadu_pd(v + t);
        __m256d acc = ck;
        for (std::size_t j = k - 1; j-- > 0;)
            acc = _mm256_add_pd(_mm256_set1_pd(coeff[j]), _mm256_mul_pd(x, acc));
        _mm256_storeu_pd(out + t, _mm256_mul_pd(x, acc));
    }
    for (; t < n; ++t) {
        const double x = v[t];
        double acc = coeff[k - 1];
        for (std::size_t j = k - 1; j-- > 0;) acc = coeff[j] + x * acc;
        out[t] = x * acc;
    }
}

void poly_eval_row_avx2(const float* v, std::size_t n, const float* coeff, std::size_t k,
                        float* out) {
    std::size_t t = 0;
    const __m256 ck = _mm256_set1_ps(coeff[k - 1]);
    for (; t + 8 <= n; t += 8) {
        const __m256 x = _mm256_loadu_ps(v + t);
        __m256 acc = ck;
        for (std::size_t j = k - 1; j-- > 0;)
            acc = _mm256_add_ps(_mm256_set1_ps(coeff[j]), _mm256_mul_ps(x, acc));
        _mm256_storeu_ps(out + t, _mm256_mul_ps(x, acc));
    }
    for (; t < n; ++t) {
        const float x = v[t];
        float acc = coeff[k - 1];
        for (std::size_t j = k - 1; j-- > 0;) acc = coeff[j] + x * acc;
        out[t] = x * acc;
    }
}

}  // namespace pom::kern::detail

#endif  // POM_X86_64
