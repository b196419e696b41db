#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace pom::kern {

// ============================================================================
// Backend selection
// ============================================================================
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The two are bit-identical by construction: vector lanes only ever
// carry independent output elements, and each element's accumulation chain
// runs in the same ascending order as the scalar code (no FMA, contraction
// disabled project-wide). Reductions across a contiguous axis (row sums,
// masked sums, softmax normalizers) are order-fixed and therefore stay on the
// shared scalar path in every backend.

enum class Backend { Scalar, Avx2 };

bool cpu_has_avx2();

// Best backend this binary + CPU supports.
Backend preferred_backend();

// Process-wide active backend. Defaults to preferred_backend() on first use.
Backend active_backend();

// Throws DomainError if the requested backend is not usable here.
void set_backend(Backend b);

std::string backend_name(Backend b);

// RAII override used by the equivalence tests.
class BackendGuard {
public:
    explicit BackendGuard(Backend b) : saved_(active_backend()) { set_backend(b); }
    ~BackendGuard() { set_backend(saved_); }
    BackendGuard(const BackendGuard&) = delete;
    BackendGuard& operator=(const BackendGuard&) = delete;

private:
    Backend saved_;
};

// ============================================================================
// Dispatched kernels (scalar + AVX2 variants)
// ============================================================================

// c[m x n] = a[m x k] * b[k x n], all row-major. c is overwritten. Each
// c(i,j) is a fold over k in ascending order starting from 0.
template <typename T>
void matmul(const T* a, std::size_t m, std::size_t k, const T* b, std::size_t n, T* c);

// out[i] = a[i] + b[i]
template <typename T>
void ew_add(const T* a, const T* b, T* out, std::size_t n);

// out[i] = a[i] * b[i]
template <typename T>
void ew_mul(const T* a, const T* b, T* out, std::size_t n);

// out[i] = a[i] + s
template <typename T>
void ew_add_scalar(const T* a, T s, T* out, std::size_t n);

// out[i] = a[i] * s
template <typename T>
void ew_mul_scalar(const T* a, T s, T* out, std::size_t n);

// out[i] = a[i]^p by p-1 successive multiplies; p >= 1.
template <typename T>
void ew_pow(const T* a, int p, T* out, std::size_t n);

// out[i] = max(a[i], 0)
template <typename T>
void ew_relu(const T* a, T* out, std::size_t n);

// Horner evaluation of sum_{p=1..k} coeff[p-1] * v[i]^p per element.
// coeff is ascending in degree (coeff[0] multiplies v, coeff[k-1] v^k).
template <typename T>
void poly_eval_row(const T* v, std::size_t n, const T* coeff, std::size_t k, T* out);

// ============================================================================
// Order-fixed kernels (shared scalar path, all backends)
// ============================================================================

// out[i] = sum_j a(i, j) over selected columns, j ascending.
// selector may be null (all columns).
template <typename T>
void row_sum(const T* a, std::size_t rows, std::size_t cols, const std::uint8_t* selector,
             T* out);

// out[i] = 1 / (1 + exp(-a[i])), computed without overflow for any finite a.
template <typename T>
void ew_sigmoid(const T* a, T* out, std::size_t n);

template <typename T>
void ew_tanh(const T* a, T* out, std::size_t n);

// Exact erf-based GELU.
template <typename T>
void ew_gelu(const T* a, T* out, std::size_t n);

}  // namespace pom::kern
