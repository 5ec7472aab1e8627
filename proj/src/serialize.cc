#include "fqt/serialize.h"

#include <fmt/format.h>

#include <sstream>

#include "fqt/errors.h"

namespace fqt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

PathLabel read_path(const Json &j, const std::string &field) {
    auto s = read_string(j, field);
    if (s.empty()) {
        config_fail(field, "path label must not be empty");
    }
    return PathLabel{s};
}

Frequency read_frequency(const Json &j, const std::string &field) {
    try {
        return parse_frequency(read_string(j, field));
    } catch (const ValidationError &e) {
        config_fail(field, e.what());
    }
}

uint32_t read_u32(const Json &j, const std::string &field) {
    auto v = read_u64(j, field);
    if (v > UINT32_MAX) {
        config_fail(field, "value out of range");
    }
    return static_cast<uint32_t>(v);
}

}  // namespace

void config_fail(const std::string &field, const std::string &message) {
    throw ConfigError(field + ": " + message);
}

ObjectReader::ObjectReader(const Json &j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) {
        config_fail(where_, "expected an object");
    }
}

std::string ObjectReader::field(const std::string &key) const {
    return where_.empty() ? key : where_ + "." + key;
}

const Json &ObjectReader::required(const std::string &key) {
    auto it = j_.find(key);
    if (it == j_.end()) {
        config_fail(field(key), "missing required field");
    }
    seen_.insert(key);
    return *it;
}

const Json *ObjectReader::optional(const std::string &key) {
    auto it = j_.find(key);
    if (it == j_.end()) {
        return nullptr;
    }
    seen_.insert(key);
    return &*it;
}

void ObjectReader::finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
        if (!seen_.contains(it.key())) {
            config_fail(field(it.key()), "unknown field");
        }
    }
}

std::string read_string(const Json &j, const std::string &field) {
    if (!j.is_string()) {
        config_fail(field, "expected a string");
    }
    return j.get<std::string>();
}

double read_double(const Json &j, const std::string &field) {
    if (!j.is_number()) {
        config_fail(field, "expected a number");
    }
    return j.get<double>();
}

uint64_t read_u64(const Json &j, const std::string &field) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<int64_t>() < 0)) {
        config_fail(field, "expected a non-negative integer");
    }
    return j.get<uint64_t>();
}

bool read_bool(const Json &j, const std::string &field) {
    if (!j.is_boolean()) {
        config_fail(field, "expected true or false");
    }
    return j.get<bool>();
}

Amplitude read_complex(const Json &j, const std::string &field) {
    if (j.is_number()) {
        return Amplitude{j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Amplitude{j[0].get<double>(), j[1].get<double>()};
    }
    config_fail(field, "expected a number or an [re, im] pair");
}

Json complex_to_json(Amplitude a) {
    return Json::array({a.real(), a.imag()});
}

std::string format_number(double x) {
    return fmt::format("{}", x);
}

Json state_to_json(const PhotonState &s) {
    Json out = Json::array();
    for (const auto &[k, a] : s) {
        Json rec;
        rec["pol"] = to_string(k.pol);
        rec["freq"] = to_string(k.freq);
        rec["path"] = k.path.name;
        rec["timebin"] = k.bin.index;
        rec["re"] = a.real();
        rec["im"] = a.imag();
        out.push_back(std::move(rec));
    }
    return out;
}

PhotonState state_from_json(const Json &j, const std::string &where) {
    if (!j.is_array()) {
        config_fail(where, "expected an array of ket records");
    }
    StateBuilder b;
    for (size_t i = 0; i < j.size(); i++) {
        ObjectReader r(j[i], where + "[" + std::to_string(i) + "]");
        Polarization pol;
        try {
            pol = parse_polarization(read_string(r.required("pol"), r.field("pol")));
        } catch (const ValidationError &e) {
            config_fail(r.field("pol"), e.what());
        }
        ModeKet k{pol, read_frequency(r.required("freq"), r.field("freq")), read_path(r.required("path"), r.field("path")),
                  TimeBin{read_u32(r.required("timebin"), r.field("timebin"))}};
        Amplitude a{read_double(r.required("re"), r.field("re")), read_double(r.required("im"), r.field("im"))};
        r.finish();
        b.add(k, a);
    }
    return std::move(b).build();
}

std::string state_to_csv(const PhotonState &s) {
    std::ostringstream out;
    out << "pol,freq,path,timebin,re,im\n";
    for (const auto &[k, a] : s) {
        out << to_string(k.pol) << "," << to_string(k.freq) << "," << k.path.name << "," << k.bin.index << ","
            << format_number(a.real()) << "," << format_number(a.imag()) << "\n";
    }
    return out.str();
}

Json pm_schedule_to_json(const PmSchedule &s) {
    Json out;
    out["default_phase"] = s.default_phase;
    Json bins = Json::object();
    for (const auto &[bin, phi] : s.per_bin) {
        bins[std::to_string(bin.index)] = phi;
    }
    out["per_bin"] = std::move(bins);
    return out;
}

PmSchedule pm_schedule_from_json(const Json &j, const std::string &where) {
    ObjectReader r(j, where);
    PmSchedule s;
    s.default_phase = read_double(r.required("default_phase"), r.field("default_phase"));
    if (const Json *bins = r.optional("per_bin")) {
        if (!bins->is_object()) {
            config_fail(r.field("per_bin"), "expected an object of bin -> phase");
        }
        for (auto it = bins->begin(); it != bins->end(); ++it) {
            const std::string &key = it.key();
            std::string f = r.field("per_bin") + "." + key;
            if (key.empty() || key.size() > 9 || key.find_first_not_of("0123456789") != std::string::npos) {
                config_fail(f, "time-bin keys must be non-negative integers");
            }
            s.per_bin[TimeBin{static_cast<uint32_t>(std::stoul(key))}] = read_double(it.value(), f);
        }
    }
    r.finish();
    return s;
}

Json element_to_json(const Element &e) {
    Json out;
    out["kind"] = kind_name(e);
    std::visit(overloaded{
                   [&](const Pbs &x) {
                       out["in1"] = x.in1.name;
                       if (x.in2) {
                           out["in2"] = x.in2->name;
                       }
                       out["transmit"] = x.transmit.name;
                       out["reflect"] = x.reflect.name;
                   },
                   [&](const BeamSplitter &x) {
                       out["in1"] = x.in1.name;
                       out["in2"] = x.in2.name;
                       out["out_a"] = x.out_a.name;
                       out["out_b"] = x.out_b.name;
                   },
                   [&](const HalfWavePlate &x) { out["path"] = x.path.name; },
                   [&](const FrequencyShifter &x) {
                       out["path"] = x.path.name;
                       out["from"] = to_string(x.from);
                       out["to"] = to_string(x.to);
                   },
                   [&](const Wdm &x) {
                       out["in"] = x.in.name;
                       Json routes = Json::object();
                       for (const auto &[f, p] : x.routes) {
                           routes[to_string(f)] = p.name;
                       }
                       out["routes"] = std::move(routes);
                   },
                   [&](const PhaseModulator &x) {
                       out["path"] = x.path.name;
                       out["schedule"] = pm_schedule_to_json(x.schedule);
                   },
                   [&](const Delay &x) {
                       out["path"] = x.path.name;
                       out["bins"] = x.bins;
                   },
               },
               e);
    return out;
}

Element element_from_json(const Json &j, const std::string &where) {
    ObjectReader r(j, where);
    auto kind = read_string(r.required("kind"), r.field("kind"));
    auto path = [&](const std::string &key) { return read_path(r.required(key), r.field(key)); };
    Element e;
    if (kind == "PBS") {
        Pbs x;
        x.in1 = path("in1");
        if (const Json *in2 = r.optional("in2")) {
            x.in2 = read_path(*in2, r.field("in2"));
        }
        x.transmit = path("transmit");
        x.reflect = path("reflect");
        e = x;
    } else if (kind == "BS") {
        e = BeamSplitter{path("in1"), path("in2"), path("out_a"), path("out_b")};
    } else if (kind == "HWP") {
        e = HalfWavePlate{path("path")};
    } else if (kind == "FS") {
        auto p = path("path");
        e = FrequencyShifter{p, read_frequency(r.required("from"), r.field("from")),
                             read_frequency(r.required("to"), r.field("to"))};
    } else if (kind == "WDM") {
        Wdm x;
        x.in = path("in");
        const Json &routes = r.required("routes");
        if (!routes.is_object()) {
            config_fail(r.field("routes"), "expected an object of frequency -> path");
        }
        for (auto it = routes.begin(); it != routes.end(); ++it) {
            std::string f = r.field("routes") + "." + it.key();
            Frequency freq;
            try {
                freq = parse_frequency(it.key());
            } catch (const ValidationError &err) {
                config_fail(f, err.what());
            }
            x.routes[freq] = read_path(it.value(), f);
        }
        e = x;
    } else if (kind == "PM") {
        auto p = path("path");
        e = PhaseModulator{p, pm_schedule_from_json(r.required("schedule"), r.field("schedule"))};
    } else if (kind == "Delay") {
        auto p = path("path");
        e = Delay{p, read_u32(r.required("bins"), r.field("bins"))};
    } else {
        config_fail(r.field("kind"), "unknown element kind '" + kind + "'");
    }
    r.finish();
    try {
        validate(e);
    } catch (const WiringError &err) {
        config_fail(where, err.what());
    }
    return e;
}

Json circuit_to_json(const Circuit &c) {
    Json out;
    out["name"] = c.name;
    Json ins = Json::array();
    for (const auto &p : c.inputs) {
        ins.push_back(p.name);
    }
    out["inputs"] = std::move(ins);
    Json outs = Json::array();
    for (const auto &p : c.outputs) {
        outs.push_back(p.name);
    }
    out["outputs"] = std::move(outs);
    Json elems = Json::array();
    for (const auto &e : c.elements) {
        elems.push_back(element_to_json(e));
    }
    out["elements"] = std::move(elems);
    return out;
}

Circuit circuit_from_json(const Json &j, const std::string &where) {
    if (j.is_string()) {
        return builtin_circuit(j.get<std::string>());
    }
    ObjectReader r(j, where);
    Circuit c;
    c.name = read_string(r.required("name"), r.field("name"));
    auto read_paths = [&](const std::string &key) {
        const Json &arr = r.required(key);
        if (!arr.is_array()) {
            config_fail(r.field(key), "expected an array of path labels");
        }
        std::vector<PathLabel> out;
        for (size_t i = 0; i < arr.size(); i++) {
            out.push_back(read_path(arr[i], r.field(key) + "[" + std::to_string(i) + "]"));
        }
        return out;
    };
    c.inputs = read_paths("inputs");
    c.outputs = read_paths("outputs");
    const Json &elems = r.required("elements");
    if (!elems.is_array()) {
        config_fail(r.field("elements"), "expected an array");
    }
    for (size_t i = 0; i < elems.size(); i++) {
        c.elements.push_back(element_from_json(elems[i], r.field("elements") + "[" + std::to_string(i) + "]"));
    }
    r.finish();
    try {
        c.validate();
    } catch (const WiringError &err) {
        config_fail(where, err.what());
    }
    return c;
}

namespace {

Json fixed_params_to_json(NoiseKind kind, const FixedNoise &f) {
    Json p = Json::object();
    if (kind == NoiseKind::rotation) {
        p["theta"] = f.theta;
    } else if (kind == NoiseKind::column) {
        p["delta"] = complex_to_json(f.delta);
        p["eta"] = complex_to_json(f.eta);
    }
    return p;
}

FixedNoise fixed_from_json(NoiseKind kind, const Json *params, const std::string &where) {
    FixedNoise f;
    f.kind = kind;
    static const Json empty = Json::object();
    ObjectReader r(params ? *params : empty, where);
    if (kind == NoiseKind::rotation) {
        f.theta = read_double(r.required("theta"), r.field("theta"));
    } else if (kind == NoiseKind::column) {
        f.delta = read_complex(r.required("delta"), r.field("delta"));
        f.eta = read_complex(r.required("eta"), r.field("eta"));
        try {
            complete_from_column(f.delta, f.eta);
        } catch (const ValidationError &e) {
            config_fail(where, e.what());
        }
    }
    r.finish();
    return f;
}

NoiseKind read_kind(const Json &j, const std::string &field) {
    try {
        return parse_noise_kind(read_string(j, field));
    } catch (const ConfigError &e) {
        config_fail(field, e.what());
    }
}

}  // namespace

Json noise_spec_to_json(const NoiseSpec &n) {
    Json out;
    out["kind"] = to_string(n.kind);
    out["params"] = fixed_params_to_json(n.kind, n.fixed);
    out["placement"] = to_string(n.placement);
    if (n.seed) {
        out["seed"] = n.seed->value;
    }
    if (!n.overrides.empty()) {
        Json arr = Json::array();
        for (const auto &o : n.overrides) {
            Json rec;
            if (o.slot.channel) {
                rec["channel"] = o.slot.channel->name;
            }
            if (o.slot.bin) {
                rec["timebin"] = o.slot.bin->index;
            }
            rec["kind"] = to_string(o.noise.kind);
            rec["params"] = fixed_params_to_json(o.noise.kind, o.noise);
            arr.push_back(std::move(rec));
        }
        out["assignments"] = std::move(arr);
    }
    return out;
}

NoiseSpec noise_spec_from_json(const Json &j, const std::string &where) {
    ObjectReader r(j, where);
    NoiseSpec n;
    n.kind = read_kind(r.required("kind"), r.field("kind"));
    const Json *params = r.optional("params");
    if (n.kind == NoiseKind::haar) {
        fixed_from_json(NoiseKind::identity, params, r.field("params"));
    } else {
        n.fixed = fixed_from_json(n.kind, params, r.field("params"));
    }
    if (const Json *p = r.optional("placement")) {
        try {
            n.placement = parse_noise_placement(read_string(*p, r.field("placement")));
        } catch (const ConfigError &e) {
            config_fail(r.field("placement"), e.what());
        }
    }
    if (const Json *s = r.optional("seed")) {
        n.seed = Seed{read_u64(*s, r.field("seed"))};
    }
    if (const Json *arr = r.optional("assignments")) {
        if (!arr->is_array()) {
            config_fail(r.field("assignments"), "expected an array");
        }
        for (size_t i = 0; i < arr->size(); i++) {
            std::string w = r.field("assignments") + "[" + std::to_string(i) + "]";
            ObjectReader a((*arr)[i], w);
            NoiseOverride o;
            if (const Json *c = a.optional("channel")) {
                o.slot.channel = read_path(*c, a.field("channel"));
            }
            if (const Json *b = a.optional("timebin")) {
                o.slot.bin = TimeBin{read_u32(*b, a.field("timebin"))};
            }
            NoiseKind k = read_kind(a.required("kind"), a.field("kind"));
            if (k == NoiseKind::haar) {
                config_fail(a.field("kind"), "assignments take identity, rotation or column noise");
            }
            o.noise = fixed_from_json(k, a.optional("params"), a.field("params"));
            a.finish();
            n.overrides.push_back(o);
        }
    }
    r.finish();
    return n;
}

Json unitary_to_json(const PolarizationUnitary &u) {
    Json rows = Json::array();
    for (size_t i = 0; i < 2; i++) {
        rows.push_back(Json::array({complex_to_json(u.at(i, 0)), complex_to_json(u.at(i, 1))}));
    }
    return rows;
}

Json noise_model_to_json(const NoiseModel &m) {
    Json arr = Json::array();
    for (const auto &[slot, u] : m.assignments) {
        Json rec;
        rec["channel"] = slot.channel ? Json(slot.channel->name) : Json("*");
        rec["timebin"] = slot.bin ? Json(slot.bin->index) : Json("*");
        rec["matrix"] = unitary_to_json(u);
        arr.push_back(std::move(rec));
    }
    return arr;
}

Json pm_mode_to_json(const PmMode &m) {
    if (m.time_gated) {
        return "time_gated";
    }
    Json out;
    out["static"] = m.static_phase;
    return out;
}

PmMode pm_mode_from_json(const Json &j, const std::string &where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "time_gated") {
            return PmMode::gated();
        }
        config_fail(where, "expected \"time_gated\" or {\"static\": phase}");
    }
    ObjectReader r(j, where);
    PmMode m = PmMode::fixed(read_double(r.required("static"), r.field("static")));
    r.finish();
    return m;
}

Json qubit_to_json(const InputQubit &q) {
    Json out;
    out["alpha"] = complex_to_json(q.alpha);
    out["beta"] = complex_to_json(q.beta);
    return out;
}

Json branch_to_json(const BranchOutcome &b, double tol) {
    Json out;
    out["port"] = b.port.name;
    out["timebin"] = b.bin.index;
    out["probability"] = b.probability;
    out["fidelity"] = b.fidelity;
    out["success"] = b.fidelity >= 1.0 - tol;
    out["state"] = state_to_json(b.conditional_state);
    return out;
}

Json run_report_to_json(const RunReport &r) {
    Json out;
    out["input"] = qubit_to_json(r.input);
    out["scheme"] = to_string(r.scheme);
    out["noise"] = r.noise;
    out["pm_mode"] = pm_mode_to_json(r.pm_mode);
    out["fidelity_tolerance"] = r.fidelity_tolerance;
    out["min_branch_probability"] = kMinBranchProbability;
    out["success_probability"] = r.success_probability;
    out["min_fidelity"] = r.min_fidelity;
    out["probability_sum"] = r.probability_sum;
    out["dropped_branches"] = r.dropped_branches;
    Json branches = Json::array();
    for (const auto &b : r.branches) {
        branches.push_back(branch_to_json(b, r.fidelity_tolerance));
    }
    out["branches"] = std::move(branches);
    out["notes"] = r.notes;
    return out;
}

Json monte_carlo_to_json(const MonteCarloStats &s) {
    Json out;
    out["trials"] = s.trials;
    out["seed"] = s.seed.value;
    out["mean_fidelity"] = s.mean_fidelity;
    out["min_fidelity"] = s.min_fidelity;
    out["mean_success_probability"] = s.mean_success_probability;
    out["min_success_probability"] = s.min_success_probability;
    out["max_probability_defect"] = s.max_probability_defect;
    Json means = Json::object();
    for (const auto &[k, p] : s.branch_probability_means) {
        means[k] = p;
    }
    out["branch_probability_means"] = std::move(means);
    return out;
}

Json qkd_report_to_json(const QkdReport &r) {
    Json out;
    out["raw_bits"] = r.raw_bits;
    out["sifted_bits"] = r.sifted_bits;
    out["sifted_fraction"] = r.sifted_fraction();
    out["errors"] = r.errors;
    out["qber"] = r.qber;
    out["protected"] = r.protected_transmission;
    out["scheme"] = to_string(r.scheme);
    out["noise"] = r.noise;
    out["seed"] = r.seed.value;
    out["min_branch_fidelity"] = r.min_branch_fidelity;
    Json per = Json::object();
    for (auto [name, t] : {std::pair{"X", r.x}, std::pair{"Y", r.y}}) {
        Json b;
        b["sifted"] = t.sifted;
        b["errors"] = t.errors;
        b["error_rate"] = t.error_rate();
        per[name] = std::move(b);
    }
    out["per_basis"] = std::move(per);
    return out;
}

}  // namespace fqt
