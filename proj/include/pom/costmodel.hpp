#pragma once

#include <cstdint>

namespace pom {

/** Multiplication counts for both mixers at one operating point. */
struct CostReport {
    std::int64_t n = 0, d = 0, D = 0, k = 0;
    std::int64_t pom_mults = 0;
    std::int64_t mha_mults = 0;
    std::int64_t crossover_n = 0;
};

// Multiplications for one PoM forward pass: 3*n*d*D + (k+1)*n*D
// (projections, polynomial, gate, output; additions not counted).
std::int64_t flops_pom(std::int64_t n, std::int64_t d, std::int64_t D, std::int64_t k);

// Multiplications for one attention forward pass: 4*n*d^2 + 2*d*n^2.
std::int64_t flops_mha(std::int64_t n, std::int64_t d);

// Smallest sequence length n >= 1 with flops_pom <= flops_mha, i.e. the
// least integer n with n >= (D(3d+k+1) - 4d^2) / (2d), clamped to 1 when the
// bound is non-positive. At an exact integer bound the two counts tie.
std::int64_t crossover_n(std::int64_t d, std::int64_t D, std::int64_t k);

CostReport cost_report(std::int64_t n, std::int64_t d, std::int64_t D, std::int64_t k);

}  // namespace pom
