#pragma once

#include <cmath>
#include <cstddef>
#include <cstring>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "pom/error.hpp"

namespace pom {

/**
 * Dense real matrix, row-major. Value type, deep copies.
 *
 * Entry (i, j) lives at data()[i * cols() + j]. Operations in numerics.hpp
 * keep every per-entry accumulation in ascending index order, so results are
 * bit-reproducible for a given precision and stay finite for finite inputs
 * of moderate magnitude (|x| well below sqrt(DBL_MAX) for products, and
 * |x| <= ~700 wherever an exponential is involved).
 */
template <typename T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}

    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    Mat(std::size_t rows, std::size_t cols, std::vector<T> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        if (data_.size() != rows_ * cols_) {
            throw ShapeError("Mat: data length " + std::to_string(data_.size()) +
                             " != rows*cols " + std::to_string(rows_ * cols_));
        }
    }

    // Row-of-rows literal, convenient in tests: Mat<double>({{1,2},{3,4}}).
    Mat(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw ShapeError("Mat: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Mat ones(std::size_t rows, std::size_t cols) {
        Mat m(rows, cols);
        for (auto& x : m.data_) x = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    T operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    T* row(std::size_t i) { return data_.data() + i * cols_; }
    const T* row(std::size_t i) const { return data_.data() + i * cols_; }

    Mat col(std::size_t j) const {
        Mat c(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }

    // Columns [j0, j1), as a new matrix.
    Mat cols_slice(std::size_t j0, std::size_t j1) const {
        if (j0 > j1 || j1 > cols_) throw ShapeError("Mat::cols_slice: bad range");
        Mat s(rows_, j1 - j0);
        for (std::size_t i = 0; i < rows_; ++i)
            std::memcpy(s.row(i), row(i) + j0, (j1 - j0) * sizeof(T));
        return s;
    }

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    // Bitwise equality (exact representation, not numeric closeness).
    bool bit_equal(const Mat& o) const {
        return same_shape(o) &&
               std::memcmp(data_.data(), o.data_.data(), data_.size() * sizeof(T)) == 0;
    }

    bool all_finite() const {
        for (T x : data_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using Matrix = Mat<double>;
using MatrixF = Mat<float>;

template <typename T>
T max_abs_diff(const Mat<T>& a, const Mat<T>& b) {
    if (!a.same_shape(b))
        throw ShapeError("max_abs_diff: " + a.shape_str() + " vs " + b.shape_str());
    T m = T(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        T d = std::fabs(a.data()[i] - b.data()[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace pom
