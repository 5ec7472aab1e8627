#include "fqt/config.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fqt/errors.h"

namespace fqt {

InputQubit named_qubit(const std::string &name) {
    const double r = 1.0 / std::numbers::sqrt2;
    if (name == "H") {
        return InputQubit{{1, 0}, {0, 0}};
    }
    if (name == "V") {
        return InputQubit{{0, 0}, {1, 0}};
    }
    if (name == "+x") {
        return InputQubit{{r, 0}, {r, 0}};
    }
    if (name == "-x") {
        return InputQubit{{r, 0}, {-r, 0}};
    }
    if (name == "+y") {
        return InputQubit{{r, 0}, {0, r}};
    }
    if (name == "-y") {
        return InputQubit{{r, 0}, {0, -r}};
    }
    throw ConfigError("unknown named state '" + name + "' (expected H, V, +x, -x, +y, -y)");
}

InputQubit InputSpec::resolve() const {
    return named ? named_qubit(*named) : amplitudes;
}

void ExperimentConfig::validate() const {
    if (trials < 1) {
        config_fail("trials", "must be at least 1");
    }
    if (!(fidelity_tolerance > 0 && fidelity_tolerance < 1)) {
        config_fail("fidelity_tolerance", "must lie in (0, 1)");
    }
    try {
        fqt::validate(input.resolve());
    } catch (const Error &e) {
        config_fail("input", e.what());
    }
    if (!std::isfinite(pm_mode.static_phase)) {
        config_fail("pm_mode.static", "phase must be finite");
    }
    if (qkd && qkd->n_bits < 1) {
        config_fail("qkd.n_bits", "must be at least 1");
    }
    try {
        auto m = noise.realize(0, seed, scheme_channels(scheme), scheme_bins(scheme));
        for (const auto &c : scheme_channels(scheme)) {
            for (auto b : scheme_bins(scheme)) {
                m.resolve(c, b);
            }
        }
    } catch (const Error &e) {
        config_fail("noise", e.what());
    }
}

ExperimentConfig ExperimentConfig::resolved() const {
    ExperimentConfig c = *this;
    if (c.noise.kind == NoiseKind::haar && !c.noise.seed) {
        c.noise.seed = c.seed;
    }
    return c;
}

ExperimentConfig config_from_json(const Json &j) {
    ObjectReader r(j, "");
    ExperimentConfig c;
    if (const Json *s = r.optional("scheme")) {
        try {
            c.scheme = parse_scheme(read_string(*s, "scheme"));
        } catch (const ConfigError &e) {
            config_fail("scheme", e.what());
        }
    }
    if (const Json *in = r.optional("input")) {
        if (in->is_string()) {
            c.input = InputSpec{in->get<std::string>(), {}};
            try {
                named_qubit(*c.input.named);
            } catch (const ConfigError &e) {
                config_fail("input", e.what());
            }
        } else {
            ObjectReader q(*in, "input");
            c.input.named.reset();
            c.input.amplitudes.alpha = read_complex(q.required("alpha"), q.field("alpha"));
            c.input.amplitudes.beta = read_complex(q.required("beta"), q.field("beta"));
            q.finish();
        }
    }
    if (const Json *n = r.optional("noise")) {
        c.noise = noise_spec_from_json(*n, "noise");
    }
    if (const Json *p = r.optional("pm_mode")) {
        c.pm_mode = pm_mode_from_json(*p, "pm_mode");
    }
    if (const Json *t = r.optional("trials")) {
        c.trials = read_u64(*t, "trials");
    }
    if (const Json *s = r.optional("seed")) {
        c.seed = Seed{read_u64(*s, "seed")};
    }
    if (const Json *f = r.optional("fidelity_tolerance")) {
        c.fidelity_tolerance = read_double(*f, "fidelity_tolerance");
    }
    if (const Json *o = r.optional("output")) {
        ObjectReader out(*o, "output");
        if (const Json *p = out.optional("path")) {
            c.output.path = read_string(*p, out.field("path"));
        }
        if (const Json *f = out.optional("format")) {
            auto fmt = read_string(*f, out.field("format"));
            if (fmt == "json") {
                c.output.format = OutputFormat::json;
            } else if (fmt == "csv") {
                c.output.format = OutputFormat::csv;
            } else {
                config_fail(out.field("format"), "expected json or csv");
            }
        }
        out.finish();
    }
    if (const Json *q = r.optional("qkd")) {
        ObjectReader qr(*q, "qkd");
        QkdSpec spec;
        if (const Json *b = qr.optional("n_bits")) {
            spec.n_bits = read_u64(*b, qr.field("n_bits"));
        }
        if (const Json *p = qr.optional("protected")) {
            spec.protected_transmission = read_bool(*p, qr.field("protected"));
        }
        qr.finish();
        c.qkd = spec;
    }
    if (const Json *circ = r.optional("circuit")) {
        c.circuit = circuit_from_json(*circ, "circuit");
    }
    r.finish();
    c.validate();
    return c;
}

Json config_to_json(const ExperimentConfig &c) {
    Json out;
    out["scheme"] = to_string(c.scheme);
    if (c.input.named) {
        out["input"] = *c.input.named;
    } else {
        out["input"] = qubit_to_json(c.input.amplitudes);
    }
    out["noise"] = noise_spec_to_json(c.noise);
    out["pm_mode"] = pm_mode_to_json(c.pm_mode);
    out["trials"] = c.trials;
    out["seed"] = c.seed.value;
    out["fidelity_tolerance"] = c.fidelity_tolerance;
    Json o;
    if (c.output.path) {
        o["path"] = *c.output.path;
    }
    o["format"] = c.output.format == OutputFormat::json ? "json" : "csv";
    out["output"] = std::move(o);
    if (c.qkd) {
        Json q;
        q["n_bits"] = c.qkd->n_bits;
        q["protected"] = c.qkd->protected_transmission;
        out["qkd"] = std::move(q);
    }
    if (c.circuit) {
        out["circuit"] = circuit_to_json(*c.circuit);
    }
    return out;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config: cannot read '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Json j;
    try {
        j = Json::parse(buf.str());
    } catch (const Json::parse_error &e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

MonteCarloInput monte_carlo_input(const ExperimentConfig &c, unsigned threads) {
    MonteCarloInput in;
    in.input = c.input.resolve();
    in.scheme = c.scheme;
    in.noise = c.noise;
    in.pm_mode = c.pm_mode;
    in.trials = c.trials;
    in.seed = c.seed;
    in.fidelity_tolerance = c.fidelity_tolerance;
    in.threads = threads;
    return in;
}

QkdInput qkd_input(const ExperimentConfig &c) {
    QkdSpec spec = c.qkd.value_or(QkdSpec{});
    QkdInput in;
    in.n_bits = spec.n_bits;
    in.protected_transmission = spec.protected_transmission;
    in.noise = c.noise;
    in.scheme = c.scheme;
    in.pm_mode = c.pm_mode;
    in.seed = c.seed;
    return in;
}

}  // namespace fqt
