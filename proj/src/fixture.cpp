#include "pom/fixture.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "pom/rng.hpp"

namespace pom {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

MaskSpec Fixture::mask() const {
    if (mask_kind == "full") return MaskSpec::full();
    if (mask_kind == "causal") return MaskSpec::causal();
    if (mask_kind == "block_causal") return MaskSpec::block_causal(mask_block);
    if (mask_kind == "explicit") return MaskSpec::explicit_mask(mask_matrix);
    throw FixtureSchemaError("fixture: unknown mask kind '" + mask_kind + "'");
}

Fixture generate_fixture(const FixtureGenOptions& opt, std::uint64_t seed) {
    Fixture fx;
    fx.kind = opt.kind;
    fx.cfg = MixerConfig{opt.d, opt.D, opt.k, opt.activation, opt.aggregation};
    fx.cfg.validate();
    fx.seed = seed;
    fx.mixer = init_mixer_params<double>(fx.cfg, seed);
    fx.mask_kind = opt.mask_kind;
    fx.mask_block = opt.mask_block;
    fx.tolerance = opt.tolerance;

    Rng rng(seed + 17);
    fx.input = rng.uniform_matrix<double>(opt.d, opt.n, -1.0, 1.0);
    if (opt.mask_kind == "explicit") {
        Matrix m(opt.n, opt.n);
        for (std::size_t s = 0; s < opt.n; ++s) {
            for (std::size_t t = 0; t < opt.n; ++t) m(s, t) = rng.uniform01() < 0.5 ? 1.0 : 0.0;
            m(s, s) = 1.0;  // keep every row non-empty
        }
        fx.mask_matrix = m;
    }

    if (fx.kind == "polymorpher") {
        fx.ff = init_ff_params(opt.d, 4 * opt.d, Activation::Gelu, seed + 31);
        PolyMorpherParams p{fx.cfg, fx.mixer, fx.ff, fx.pre_norm};
        fx.expected = polymorpher_forward(fx.input, p, fx.mask());
    } else if (opt.expected_via_streaming) {
        if (opt.mask_kind != "causal")
            throw DomainError("generate_fixture: streaming expectation needs a causal mask");
        StreamState st = stream_init(fx.cfg, fx.mixer);
        fx.expected = Matrix(opt.d, opt.n);
        for (std::size_t t = 0; t < opt.n; ++t) {
            Matrix y = stream_step(st, fx.input.col(t), fx.cfg, fx.mixer);
            for (std::size_t i = 0; i < opt.d; ++i) fx.expected(i, t) = y(i, 0);
        }
    } else {
        fx.expected = pom_forward(fx.input, fx.mask(), fx.cfg, fx.mixer);
    }
    return fx;
}

namespace {

void write_matrix(std::ostream& os, const std::string& name, const Matrix& m) {
    os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_double(m(i, j));
        }
        os << '\n';
    }
}

class TokenReader {
public:
    explicit TokenReader(std::istream& is) : is_(is) {}

    std::string word() {
        std::string w;
        if (!(is_ >> w)) throw FixtureSchemaError("fixture: unexpected end of file");
        return w;
    }

    std::string expect(const std::string& want) {
        std::string w = word();
        if (w != want)
            throw FixtureSchemaError("fixture: expected '" + want + "', found '" + w + "'");
        return w;
    }

    double number() {
        std::string w = word();
        char* end = nullptr;
        double v = std::strtod(w.c_str(), &end);
        if (end == w.c_str() || *end != '\0')
            throw FixtureSchemaError("fixture: bad number '" + w + "'");
        return v;
    }

    long long integer() {
        std::string w = word();
        char* end = nullptr;
        long long v = std::strtoll(w.c_str(), &end, 10);
        if (end == w.c_str() || *end != '\0')
            throw FixtureSchemaError("fixture: bad integer '" + w + "'");
        return v;
    }

private:
    std::istream& is_;
};

Matrix read_matrix(TokenReader& r) {
    const long long rows = r.integer();
    const long long cols = r.integer();
    if (rows < 0 || cols < 0) throw FixtureSchemaError("fixture: negative matrix dims");
    Matrix m{std::size_t(rows), std::size_t(cols)};
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = r.number();
    return m;
}

}  // namespace

void save_fixture(const Fixture& fx, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("save_fixture: cannot open " + path);
    os << "pom_fixture\n";
    os << "schema_version " << fx.schema_version << '\n';
    os << "kind " << fx.kind << '\n';
    os << "d " << fx.cfg.d << '\n';
    os << "D " << fx.cfg.D << '\n';
    os << "k " << fx.cfg.k << '\n';
    os << "activation " << activation_name(fx.cfg.activation) << '\n';
    os << "aggregation " << aggregation_name(fx.cfg.aggregation) << '\n';
    os << "seed " << fx.seed << '\n';
    os << "mask " << fx.mask_kind;
    if (fx.mask_kind == "block_causal") os << ' ' << fx.mask_block;
    os << '\n';
    os << "tolerance " << format_double(fx.tolerance) << '\n';
    if (fx.kind == "polymorpher") {
        os << "ff_hidden " << fx.ff.hidden() << '\n';
        os << "ff_activation " << activation_name(fx.ff.activation) << '\n';
        os << "pre_norm " << (fx.pre_norm ? 1 : 0) << '\n';
    }
    write_matrix(os, "W_h", fx.mixer.W_h);
    write_matrix(os, "W_s", fx.mixer.W_s);
    write_matrix(os, "W_o", fx.mixer.W_o);
    write_matrix(os, "alpha", fx.mixer.alpha);
    if (fx.kind == "polymorpher") {
        write_matrix(os, "W1", fx.ff.W1);
        write_matrix(os, "b1", fx.ff.b1);
        write_matrix(os, "W2", fx.ff.W2);
        write_matrix(os, "b2", fx.ff.b2);
    }
    if (fx.mask_kind == "explicit") write_matrix(os, "mask", fx.mask_matrix);
    write_matrix(os, "X", fx.input);
    write_matrix(os, "expected", fx.expected);
    os << "end\n";
    if (!os) throw Error("save_fixture: write failed for " + path);
}

Fixture load_fixture(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FixtureSchemaError("load_fixture: cannot open " + path);
    TokenReader r(is);
    r.expect("pom_fixture");

    Fixture fx;
    std::map<std::string, Matrix> mats;
    for (;;) {
        const std::string key = r.word();
        if (key == "end") {
            break;
        } else if (key == "schema_version") {
            fx.schema_version = int(r.integer());
            if (fx.schema_version != 1)
                throw FixtureSchemaError("fixture: unsupported schema_version");
        } else if (key == "kind") {
            fx.kind = r.word();
            if (fx.kind != "mixer" && fx.kind != "polymorpher")
                throw FixtureSchemaError("fixture: unknown kind '" + fx.kind + "'");
        } else if (key == "d") {
            fx.cfg.d = std::size_t(r.integer());
        } else if (key == "D") {
            fx.cfg.D = std::size_t(r.integer());
        } else if (key == "k") {
            fx.cfg.k = int(r.integer());
        } else if (key == "activation") {
            fx.cfg.activation = activation_from_name(r.word());
        } else if (key == "aggregation") {
            fx.cfg.aggregation = aggregation_from_name(r.word());
        } else if (key == "seed") {
            fx.seed = std::uint64_t(r.integer());
        } else if (key == "mask") {
            fx.mask_kind = r.word();
            if (fx.mask_kind == "block_causal") fx.mask_block = std::size_t(r.integer());
        } else if (key == "tolerance") {
            fx.tolerance = r.number();
        } else if (key == "ff_hidden") {
            r.integer();  // implied by the W1 matrix; kept readable in the file
        } else if (key == "ff_activation") {
            fx.ff.activation = activation_from_name(r.word());
        } else if (key == "pre_norm") {
            fx.pre_norm = r.integer() != 0;
        } else if (key == "matrix") {
            const std::string name = r.word();
            mats[name] = read_matrix(r);
        } else {
            throw FixtureSchemaError("fixture: unknown field '" + key + "'");
        }
    }

    auto take = [&mats](const std::string& name) {
        auto it = mats.find(name);
        if (it == mats.end())
            throw FixtureSchemaError("fixture: missing matrix '" + name + "'");
        return std::move(it->second);
    };
    fx.mixer.W_h = take("W_h");
    fx.mixer.W_s = take("W_s");
    fx.mixer.W_o = take("W_o");
    fx.mixer.alpha = take("alpha");
    if (fx.kind == "polymorpher") {
        fx.ff.W1 = take("W1");
        fx.ff.b1 = take("b1");
        fx.ff.W2 = take("W2");
        fx.ff.b2 = take("b2");
    }
    if (fx.mask_kind == "explicit") fx.mask_matrix = take("mask");
    fx.input = take("X");
    fx.expected = take("expected");

    try {
        fx.cfg.validate();
        fx.mixer.validate(fx.cfg);
    } catch (const Error& e) {
        throw FixtureSchemaError(std::string("fixture: inconsistent contents: ") + e.what());
    }
    if (!(fx.tolerance > 0.0)) throw FixtureSchemaError("fixture: tolerance must be positive");
    return fx;
}

VerifyReport verify_fixture(const Fixture& fx) {
    Matrix actual = fx.kind == "polymorpher"
                        ? polymorpher_forward(
                              fx.input, PolyMorpherParams{fx.cfg, fx.mixer, fx.ff, fx.pre_norm},
                              fx.mask())
                        : pom_forward(fx.input, fx.mask(), fx.cfg, fx.mixer);
    if (!actual.same_shape(fx.expected))
        throw FixtureSchemaError("fixture: expected shape " + fx.expected.shape_str() +
                                 " does not match recomputed " + actual.shape_str());
    VerifyReport rep;
    rep.tolerance = fx.tolerance;
    rep.values = actual.size();
    rep.max_abs_diff = max_abs_diff(actual, fx.expected);
    if (rep.max_abs_diff > fx.tolerance) {
        std::ostringstream msg;
        msg << "fixture verification failed: max abs diff " << format_double(rep.max_abs_diff)
            << " exceeds tolerance " << format_double(fx.tolerance);
        throw ToleranceError(msg.str());
    }
    return rep;
}

VerifyReport fixture_roundtrip(const std::string& path) {
    return verify_fixture(load_fixture(path));
}

}  // namespace pom
