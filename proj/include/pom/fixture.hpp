#pragma once

#include <cstdint>
#include <string>

#include "pom/block.hpp"
#include "pom/mixer.hpp"

namespace pom {

/**
 * Golden regression record: everything needed to recompute one forward pass
 * and compare against the stored expectation. Serialized as a single
 * self-describing text document; values are printed with 17 significant
 * digits so 64-bit doubles round-trip exactly.
 */
struct Fixture {
    int schema_version = 1;
    std::string kind = "mixer";  // "mixer" or "polymorpher"
    MixerConfig cfg;
    std::uint64_t seed = 0;
    MixerParams mixer;

    // polymorpher extras (ignored for kind == "mixer")
    FeedForwardParams ff;
    bool pre_norm = false;

    std::string mask_kind = "full";  // full | causal | block_causal | explicit
    std::size_t mask_block = 0;
    Matrix mask_matrix;  // explicit masks only

    Matrix input;
    Matrix expected;
    double tolerance = 1e-10;

    MaskSpec mask() const;
};

struct FixtureGenOptions {
    std::string kind = "mixer";
    std::size_t d = 4, D = 8, n = 6;
    int k = 2;
    Activation activation = Activation::Tanh;
    Aggregation aggregation = Aggregation::Sum;
    std::string mask_kind = "causal";
    std::size_t mask_block = 4;
    double tolerance = 1e-10;
    // Compute the expectation with the streaming decoder instead of the
    // batched path (causal masks only); verification always recomputes
    // batched, which makes the fixture a streaming-vs-batched cross-check.
    bool expected_via_streaming = false;
};

Fixture generate_fixture(const FixtureGenOptions& opt, std::uint64_t seed);

void save_fixture(const Fixture& fx, const std::string& path);

// Throws FixtureSchemaError on malformed input.
Fixture load_fixture(const std::string& path);

struct VerifyReport {
    double max_abs_diff = 0.0;
    double tolerance = 0.0;
    std::size_t values = 0;
};

// Recomputes the fixture's forward pass and compares against the stored
// expectation. Throws ToleranceError when the difference exceeds the stored
// tolerance.
VerifyReport verify_fixture(const Fixture& fx);

// load + verify in one step (the CLI's `fixture verify`).
VerifyReport fixture_roundtrip(const std::string& path);

// 17-significant-digit decimal rendering used throughout the fixture format.
std::string format_double(double v);

}  // namespace pom
