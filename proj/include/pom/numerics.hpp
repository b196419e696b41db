#pragma once

#include <cstdint>
#include <vector>

#include "pom/kernels.hpp"
#include "pom/matrix.hpp"

namespace pom {

enum class Activation { Tanh, Identity, Relu, Gelu };
enum class Aggregation { Sum, Mean };

const char* activation_name(Activation a);
const char* aggregation_name(Aggregation a);
Activation activation_from_name(const std::string& s);
Aggregation aggregation_from_name(const std::string& s);

namespace num {

/**
 * Matrix product a*b. Requires a.cols == b.rows. Inner accumulation is a
 * fold over the shared dimension in ascending order, so the result is
 * bit-reproducible across runs and backends.
 */
template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b);

// Entrywise sum. b must match a's shape, or be a single column that is
// broadcast across a's columns (the only broadcast form the mixer needs).
template <typename T>
Mat<T> add(const Mat<T>& a, const Mat<T>& b);

template <typename T>
Mat<T> add(const Mat<T>& a, T scalar);

// Hadamard product, same broadcast rule as add.
template <typename T>
Mat<T> hadamard(const Mat<T>& a, const Mat<T>& b);

template <typename T>
Mat<T> scale(const Mat<T>& a, T scalar);

// Entrywise integer power, p >= 1 (p < 1 is a domain error).
template <typename T>
Mat<T> pow_int(const Mat<T>& a, int p);

// Entrywise logistic sigmoid. Strictly inside (0,1) for inputs of magnitude
// up to ~36 (beyond that the result saturates to an exact 0.0 or 1.0).
template <typename T>
Mat<T> sigmoid(const Mat<T>& a);

template <typename T>
Mat<T> apply_activation(const Mat<T>& a, Activation h);

/**
 * Per-row sum over selected columns (all columns when selector is empty),
 * ascending column order. Returns rows x 1.
 */
template <typename T>
Mat<T> reduce_rows_sum(const Mat<T>& a, const std::vector<std::uint8_t>& selector = {});

template <typename T>
Mat<T> transpose(const Mat<T>& a);

}  // namespace num
}  // namespace pom
