#include "pom/costmodel.hpp"

#include "pom/error.hpp"

namespace pom {

namespace {

void check_dims(std::int64_t n, std::int64_t d, std::int64_t D, std::int64_t k) {
    if (n < 1 || d < 1 || D < 1 || k < 1)
        throw DomainError("cost model: all dimensions must be >= 1");
}

}  // namespace

std::int64_t flops_pom(std::int64_t n, std::int64_t d, std::int64_t D, std::int64_t k) {
    check_dims(n, d, D, k);
    return 3 * n * d * D + (k + 1) * n * D;
}

std::int64_t flops_mha(std::int64_t n, std::int64_t d) {
    check_dims(n, d, 1, 1);
    return 4 * n * d * d + 2 * d * n * n;
}

std::int64_t crossover_n(std::int64_t d, std::int64_t D, std::int64_t k) {
    check_dims(1, d, D, k);
    const std::int64_t num = D * (3 * d + k + 1) - 4 * d * d;
    const std::int64_t den = 2 * d;
    if (num <= 0) return 1;
    const std::int64_t c = (num + den - 1) / den;  // ceil for positive num
    return c < 1 ? 1 : c;
}

CostReport cost_report(std::int64_t n, std::int64_t d, std::int64_t D, std::int64_t k) {
    CostReport r;
    r.n = n;
    r.d = d;
    r.D = D;
    r.k = k;
    r.pom_mults = flops_pom(n, d, D, k);
    r.mha_mults = flops_mha(n, d);
    r.crossover_n = crossover_n(d, D, k);
    return r;
}

}  // namespace pom
