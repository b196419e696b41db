#pragma once

#include <cstdint>
#include <string>

namespace pom {

/** Outcome of one property suite. */
struct CheckResult {
    std::string name;
    bool ok = false;
    std::size_t passed = 0;
    std::size_t total = 0;
    double worst = 0.0;  // worst metric observed (max abs diff / rel error)
    std::string detail;
};

// 100 random (X, P): || PoM(XP) - PoM(X) P ||_inf <= 1e-10, d,D <= 16, n <= 32.
CheckResult check_equivariance(std::uint64_t seed, std::size_t cases = 100);

// 50 random configs: token-by-token causal stream vs the masked batch, and
// block streaming (K in {1,2,4,8}) vs the explicit block-causal mask, all to
// 1e-10 per entry.
CheckResult check_streaming_equivalence(std::uint64_t seed, std::size_t cases = 50);

// 20 random configs over k in {1,2,3}, tanh/identity, full/causal masks,
// d,D <= 8, n <= 6: analytic gradients vs central differences (eps = 1e-6)
// at relative tolerance 1e-5.
CheckResult check_gradients(std::uint64_t seed, std::size_t cases = 20);

// 1000 scalar-token sequence pairs differing in exactly one token, pushed
// through the injective degree-2 configuration (identity weights, identity
// activation, tokens drawn from a positive range so x + x^2 stays
// injective): every output entry of the two sequences must be pairwise
// distinct beyond 1e-9. Failures are reported in the detail string.
CheckResult check_contextual_probe(std::uint64_t seed, std::size_t pairs = 1000);

}  // namespace pom
