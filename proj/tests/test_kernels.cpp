#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <vector>

#include "pom/kernels.hpp"
#include "pom/rng.hpp"

using namespace pom;

// Scalar and AVX2 backends must agree bit for bit: lanes carry independent
// elements and every accumulation chain folds in the same order. Sizes are
// chosen to exercise the vector remainder paths.

namespace {

template <typename T>
std::vector<T> random_vec(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
    std::vector<T> v(n);
    for (auto& x : v) x = T(rng.uniform(lo, hi));
    return v;
}

template <typename T>
bool bits_equal(const std::vector<T>& a, const std::vector<T>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

template <typename T, typename Fn>
void check_backends_agree(Fn&& run) {
    std::vector<T> scalar_out, simd_out;
    {
        kern::BackendGuard g(kern::Backend::Scalar);
        scalar_out = run();
    }
    {
        kern::BackendGuard g(kern::Backend::Avx2);
        simd_out = run();
    }
    CHECK(bits_equal(scalar_out, simd_out));
}

}  // namespace

TEST_CASE("backend plumbing") {
    CHECK(kern::backend_name(kern::Backend::Scalar) == "scalar");
    CHECK(kern::backend_name(kern::Backend::Avx2) == "avx2");
    if (!kern::cpu_has_avx2()) {
        CHECK_THROWS_AS(kern::set_backend(kern::Backend::Avx2), DomainError);
        CHECK(kern::preferred_backend() == kern::Backend::Scalar);
    } else {
        kern::Backend before = kern::active_backend();
        {
            kern::BackendGuard g(kern::Backend::Scalar);
            CHECK(kern::active_backend() == kern::Backend::Scalar);
        }
        CHECK(kern::active_backend() == before);
    }
}

TEST_CASE_TEMPLATE("matmul scalar vs avx2 bitwise", T, double, float) {
    if (!kern::cpu_has_avx2()) return;
    Rng rng(101);
    for (auto [m, k, n] : {std::array<std::size_t, 3>{1, 1, 1},
                           std::array<std::size_t, 3>{3, 5, 7},
                           std::array<std::size_t, 3>{8, 16, 33},
                           std::array<std::size_t, 3>{13, 9, 64},
                           std::array<std::size_t, 3>{4, 31, 18}}) {
        auto a = random_vec<T>(rng, m * k);
        auto b = random_vec<T>(rng, k * n);
        check_backends_agree<T>([&] {
            std::vector<T> c(m * n);
            kern::matmul(a.data(), m, k, b.data(), n, c.data());
            return c;
        });
    }
}

TEST_CASE_TEMPLATE("elementwise kernels scalar vs avx2 bitwise", T, double, float) {
    if (!kern::cpu_has_avx2()) return;
    Rng rng(102);
    for (std::size_t n : {std::size_t(1), std::size_t(7), std::size_t(8), std::size_t(64),
                          std::size_t(129)}) {
        auto a = random_vec<T>(rng, n);
        auto b = random_vec<T>(rng, n);
        check_backends_agree<T>([&] {
            std::vector<T> out(n);
            kern::ew_add(a.data(), b.data(), out.data(), n);
            return out;
        });
        check_backends_agree<T>([&] {
            std::vector<T> out(n);
            kern::ew_mul(a.data(), b.data(), out.data(), n);
            return out;
        });
        check_backends_agree<T>([&] {
            std::vector<T> out(n);
            kern::ew_add_scalar(a.data(), T(0.375), out.data(), n);
            return out;
        });
        check_backends_agree<T>([&] {
            std::vector<T> out(n);
            kern::ew_mul_scalar(a.data(), T(-1.25), out.data(), n);
            return out;
        });
        for (int p : {1, 2, 3, 5}) {
            check_backends_agree<T>([&] {
                std::vector<T> out(n);
                kern::ew_pow(a.data(), p, out.data(), n);
                return out;
            });
        }
        check_backends_agree<T>([&] {
            std::vector<T> out(n);
            kern::ew_relu(a.data(), out.data(), n);
            return out;
        });
    }
}

TEST_CASE_TEMPLATE("poly_eval_row scalar vs avx2 bitwise", T, double, float) {
    if (!kern::cpu_has_avx2()) return;
    Rng rng(103);
    for (std::size_t n : {std::size_t(1), std::size_t(6), std::size_t(37)}) {
        for (std::size_t k : {std::size_t(1), std::size_t(2), std::size_t(4)}) {
            auto v = random_vec<T>(rng, n, -1.0, 1.0);
            auto coeff = random_vec<T>(rng, k, -1.0, 1.0);
            check_backends_agree<T>([&] {
                std::vector<T> out(n);
                kern::poly_eval_row(v.data(), n, coeff.data(), k, out.data());
                return out;
            });
        }
    }
}

TEST_CASE("relu treats negative zero like the scalar reference") {
    if (!kern::cpu_has_avx2()) return;
    std::vector<double> a = {-0.0, 0.0, -1.0, 1.0, -0.0, 0.0, -2.0, 2.0, -0.0};
    check_backends_agree<double>([&] {
        std::vector<double> out(a.size());
        kern::ew_relu(a.data(), out.data(), a.size());
        return out;
    });
}
