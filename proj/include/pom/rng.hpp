#pragma once

#include <cmath>
#include <cstdint>

#include "pom/matrix.hpp"

namespace pom {

/**
 * Deterministic generator used for weight init and test data. splitmix64
 * core with bit-level uniform/normal mappings, so the same seed produces the
 * same stream on every platform (std::*_distribution is implementation
 * defined and would not).
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; one value per call, the twin is discarded.
    double normal(double mean, double stddev) {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    Mat<T> uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi) {
        Mat<T> m(rows, cols);
        for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = T(uniform(lo, hi));
        return m;
    }

    template <typename T>
    Mat<T> normal_matrix(std::size_t rows, std::size_t cols, double mean, double stddev) {
        Mat<T> m(rows, cols);
        for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = T(normal(mean, stddev));
        return m;
    }

private:
    std::uint64_t state_;
};

}  // namespace pom
