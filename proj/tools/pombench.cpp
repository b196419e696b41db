// pombench: scaling benchmarks, analytic cost model queries, property
// checks, and golden-fixture tooling for the polynomial mixer library.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pom/bench.hpp"
#include "pom/checks.hpp"
#include "pom/costmodel.hpp"
#include "pom/fixture.hpp"
#include "pom/kernels.hpp"

namespace {

std::vector<std::size_t> parse_n_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    if (out.empty()) throw CLI::ValidationError("--n", "expected a comma-separated list");
    return out;
}

void apply_backend(const std::string& name) {
    if (name == "auto") return;
    if (name == "scalar") {
        pom::kern::set_backend(pom::kern::Backend::Scalar);
    } else if (name == "avx2") {
        pom::kern::set_backend(pom::kern::Backend::Avx2);
    }
}

int run_check() {
    using pom::CheckResult;
    const std::uint64_t seed = 20260808;
    std::vector<CheckResult> results = {
        pom::check_equivariance(seed),
        pom::check_streaming_equivalence(seed + 1),
        pom::check_gradients(seed + 2),
        pom::check_contextual_probe(seed + 3),
    };
    bool all_ok = true;
    for (const auto& r : results) {
        std::printf("%-24s %s  (%s)\n", r.name.c_str(), r.ok ? "PASS" : "FAIL",
                    r.detail.c_str());
        all_ok = all_ok && r.ok;
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polynomial mixer benchmarks and checks"};
    app.require_subcommand(1);

    std::string backend = "auto";
    app.add_option("--backend", backend, "Kernel backend: auto, scalar, avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    // bench ------------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Wall-clock scaling sweep, CSV output");
    std::string variant = "pom", n_list, out_path, precision = "f64";
    pom::BenchSpec spec;
    bench->add_option("--variant", variant, "pom or mha")
        ->required()
        ->check(CLI::IsMember({"pom", "mha"}));
    bench->add_option("--d", spec.d, "Token dimension")->required();
    bench->add_option("--D", spec.D, "Mixer internal dimension")->required();
    bench->add_option("--k", spec.k, "Polynomial degree")->required();
    bench->add_option("--n", n_list, "Comma-separated sequence lengths, ascending")->required();
    bench->add_option("--repeats", spec.repeats, "Timed repeats per point (>= 3)")->required();
    bench->add_option("--seed", spec.seed, "Seed for weights and inputs")->required();
    bench->add_option("--out", out_path, "CSV output path")->required();
    bench->add_option("--precision", precision, "f64 (default) or f32")
        ->check(CLI::IsMember({"f64", "f32"}));
    bench->add_option("--budget", spec.point_budget_seconds, "Per-point time budget, seconds");

    // crossover --------------------------------------------------------------
    auto* crossover = app.add_subcommand("crossover", "Analytic crossover length");
    std::int64_t cd = 0, cD = 0, ck = 0;
    crossover->add_option("--d", cd, "Token dimension")->required();
    crossover->add_option("--D", cD, "Mixer internal dimension")->required();
    crossover->add_option("--k", ck, "Polynomial degree")->required();

    // check ------------------------------------------------------------------
    app.add_subcommand("check", "Run the property suite; nonzero exit on failure");

    // fixture ----------------------------------------------------------------
    auto* fixture = app.add_subcommand("fixture", "Golden fixture tooling");
    fixture->require_subcommand(1);
    std::string fx_path;
    std::uint64_t fx_seed = 1;
    pom::FixtureGenOptions gen_opt;
    std::string fx_activation = "tanh", fx_aggregation = "sum";
    bool fx_streaming = false;

    auto* fx_gen = fixture->add_subcommand("gen", "Generate a fixture");
    fx_gen->add_option("--path", fx_path, "Output file")->required();
    fx_gen->add_option("--seed", fx_seed, "Generation seed");
    fx_gen->add_option("--kind", gen_opt.kind, "mixer or polymorpher")
        ->check(CLI::IsMember({"mixer", "polymorpher"}));
    fx_gen->add_option("--d", gen_opt.d, "Token dimension");
    fx_gen->add_option("--D", gen_opt.D, "Internal dimension");
    fx_gen->add_option("--k", gen_opt.k, "Polynomial degree");
    fx_gen->add_option("--len", gen_opt.n, "Sequence length");
    fx_gen->add_option("--mask", gen_opt.mask_kind,
                       "full, causal, block_causal or explicit")
        ->check(CLI::IsMember({"full", "causal", "block_causal", "explicit"}));
    fx_gen->add_option("--block", gen_opt.mask_block, "Block size for block_causal");
    fx_gen->add_option("--tolerance", gen_opt.tolerance, "Verification tolerance");
    fx_gen->add_option("--activation", fx_activation, "tanh, identity, relu");
    fx_gen->add_option("--aggregation", fx_aggregation, "sum or mean");
    fx_gen->add_flag("--via-streaming", fx_streaming,
                     "Compute the expectation with the streaming decoder (causal only)");

    auto* fx_verify = fixture->add_subcommand("verify", "Verify a fixture");
    fx_verify->add_option("--path", fx_path, "Fixture file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        apply_backend(backend);

        if (*bench) {
            spec.variant = variant == "pom" ? pom::BenchVariant::Pom : pom::BenchVariant::Mha;
            spec.n_values = parse_n_list(n_list);
            spec.use_f32 = precision == "f32";
            auto records = pom::run_bench(spec);
            const std::string csv = pom::bench_records_csv(records, spec);
            std::ofstream os(out_path);
            if (!os) throw pom::Error("cannot open " + out_path);
            os << csv;
            for (const auto& r : records) {
                if (r.skipped)
                    std::printf("%s n=%zu skipped: %s\n", pom::bench_variant_name(r.variant),
                                r.n, r.skip_reason.c_str());
                else
                    std::printf("%s n=%zu median %.6f s\n", pom::bench_variant_name(r.variant),
                                r.n, r.wall_seconds);
            }
            if (records.size() >= 2) {
                try {
                    std::printf("log-log slope: %.3f\n", pom::bench_slope(records));
                } catch (const pom::Error&) {
                    // fewer than two usable points; nothing to fit
                }
            }
            return 0;
        }

        if (*crossover) {
            const std::int64_t c = pom::crossover_n(cd, cD, ck);
            std::printf("crossover n = %lld\n", static_cast<long long>(c));
            std::printf("pom multiplications at n = %lld: %lld\n", static_cast<long long>(c),
                        static_cast<long long>(pom::flops_pom(c, cd, cD, ck)));
            std::printf("mha multiplications at n = %lld: %lld\n", static_cast<long long>(c),
                        static_cast<long long>(pom::flops_mha(c, cd)));
            return 0;
        }

        if (app.got_subcommand("check")) return run_check();

        if (*fx_gen) {
            gen_opt.activation = pom::activation_from_name(fx_activation);
            gen_opt.aggregation = pom::aggregation_from_name(fx_aggregation);
            gen_opt.expected_via_streaming = fx_streaming;
            pom::Fixture fx = pom::generate_fixture(gen_opt, fx_seed);
            pom::save_fixture(fx, fx_path);
            std::printf("wrote %s (%s, %zux%zu tokens, mask %s)\n", fx_path.c_str(),
                        fx.kind.c_str(), fx.cfg.d, fx.input.cols(), fx.mask_kind.c_str());
            return 0;
        }

        if (*fx_verify) {
            pom::VerifyReport rep = pom::fixture_roundtrip(fx_path);
            std::printf("%s: OK, max abs diff %s (tolerance %s, %zu values)\n", fx_path.c_str(),
                        pom::format_double(rep.max_abs_diff).c_str(),
                        pom::format_double(rep.tolerance).c_str(), rep.values);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
