#include "pom/numerics.hpp"

#include <string>

namespace pom {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::Gelu: return "gelu";
    }
    return "?";
}

const char* aggregation_name(Aggregation a) {
    return a == Aggregation::Sum ? "sum" : "mean";
}

Activation activation_from_name(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "identity") return Activation::Identity;
    if (s == "relu") return Activation::Relu;
    if (s == "gelu") return Activation::Gelu;
    throw DomainError("unknown activation: " + s);
}

Aggregation aggregation_from_name(const std::string& s) {
    if (s == "sum") return Aggregation::Sum;
    if (s == "mean") return Aggregation::Mean;
    throw DomainError("unknown aggregation: " + s);
}

namespace num {

template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows())
        throw ShapeError("matmul: " + a.shape_str() + " * " + b.shape_str());
    Mat<T> c(a.rows(), b.cols());
    kern::matmul(a.data(), a.rows(), a.cols(), b.data(), b.cols(), c.data());
    return c;
}

namespace {

enum class BinKind { SameShape, BroadcastCol };

template <typename T>
BinKind classify(const Mat<T>& a, const Mat<T>& b, const char* what) {
    if (a.same_shape(b)) return BinKind::SameShape;
    if (b.cols() == 1 && b.rows() == a.rows()) return BinKind::BroadcastCol;
    throw ShapeError(std::string(what) + ": incompatible shapes " + a.shape_str() + " vs " +
                     b.shape_str());
}

}  // namespace

template <typename T>
Mat<T> add(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> out(a.rows(), a.cols());
    if (classify(a, b, "add") == BinKind::SameShape) {
        kern::ew_add(a.data(), b.data(), out.data(), a.size());
    } else {
        for (std::size_t i = 0; i < a.rows(); ++i)
            kern::ew_add_scalar(a.row(i), b(i, 0), out.row(i), a.cols());
    }
    return out;
}

template <typename T>
Mat<T> add(const Mat<T>& a, T scalar) {
    Mat<T> out(a.rows(), a.cols());
    kern::ew_add_scalar(a.data(), scalar, out.data(), a.size());
    return out;
}

template <typename T>
Mat<T> hadamard(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> out(a.rows(), a.cols());
    if (classify(a, b, "hadamard") == BinKind::SameShape) {
        kern::ew_mul(a.data(), b.data(), out.data(), a.size());
    } else {
        for (std::size_t i = 0; i < a.rows(); ++i)
            kern::ew_mul_scalar(a.row(i), b(i, 0), out.row(i), a.cols());
    }
    return out;
}

template <typename T>
Mat<T> scale(const Mat<T>& a, T scalar) {
    Mat<T> out(a.rows(), a.cols());
    kern::ew_mul_scalar(a.data(), scalar, out.data(), a.size());
    return out;
}

template <typename T>
Mat<T> pow_int(const Mat<T>& a, int p) {
    if (p < 1) throw DomainError("pow_int: exponent must be a positive integer, got " +
                                 std::to_string(p));
    Mat<T> out(a.rows(), a.cols());
    kern::ew_pow(a.data(), p, out.data(), a.size());
    return out;
}

template <typename T>
Mat<T> sigmoid(const Mat<T>& a) {
    Mat<T> out(a.rows(), a.cols());
    kern::ew_sigmoid(a.data(), out.data(), a.size());
    return out;
}

template <typename T>
Mat<T> apply_activation(const Mat<T>& a, Activation h) {
    Mat<T> out(a.rows(), a.cols());
    switch (h) {
        case Activation::Tanh: kern::ew_tanh(a.data(), out.data(), a.size()); break;
        case Activation::Identity: out = a; break;
        case Activation::Relu: kern::ew_relu(a.data(), out.data(), a.size()); break;
        case Activation::Gelu: kern::ew_gelu(a.data(), out.data(), a.size()); break;
    }
    return out;
}

template <typename T>
Mat<T> reduce_rows_sum(const Mat<T>& a, const std::vector<std::uint8_t>& selector) {
    const std::uint8_t* sel = nullptr;
    if (!selector.empty()) {
        if (selector.size() != a.cols())
            throw ShapeError("reduce_rows_sum: selector length " +
                             std::to_string(selector.size()) + " != cols " +
                             std::to_string(a.cols()));
        sel = selector.data();
    }
    Mat<T> out(a.rows(), 1);
    kern::row_sum(a.data(), a.rows(), a.cols(), sel, out.data());
    return out;
}

template <typename T>
Mat<T> transpose(const Mat<T>& a) {
    Mat<T> t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

#define POM_INSTANTIATE_NUM(T)                                                   \
    template Mat<T> matmul<T>(const Mat<T>&, const Mat<T>&);                     \
    template Mat<T> add<T>(const Mat<T>&, const Mat<T>&);                        \
    template Mat<T> add<T>(const Mat<T>&, T);                                    \
    template Mat<T> hadamard<T>(const Mat<T>&, const Mat<T>&);                   \
    template Mat<T> scale<T>(const Mat<T>&, T);                                  \
    template Mat<T> pow_int<T>(const Mat<T>&, int);                              \
    template Mat<T> sigmoid<T>(const Mat<T>&);                                   \
    template Mat<T> apply_activation<T>(const Mat<T>&, Activation);              \
    template Mat<T> reduce_rows_sum<T>(const Mat<T>&, const std::vector<std::uint8_t>&); \
    template Mat<T> transpose<T>(const Mat<T>&);

POM_INSTANTIATE_NUM(double)
POM_INSTANTIATE_NUM(float)

#undef POM_INSTANTIATE_NUM

}  // namespace num
}  // namespace pom
