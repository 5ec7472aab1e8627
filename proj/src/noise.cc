#include "fqt/noise.h"

#include <cmath>
#include <sstream>

#include "fqt/errors.h"

namespace fqt {

namespace {

constexpr double kUnitaryTolerance = 1e-12;

}  // namespace

double unitarity_defect(const PolarizationUnitary::Matrix &u) {
    double defect = 0;
    for (size_t i = 0; i < 2; i++) {
        for (size_t j = 0; j < 2; j++) {
            Amplitude g = std::conj(u[0][i]) * u[0][j] + std::conj(u[1][i]) * u[1][j];
            if (i == j) {
                g -= 1.0;
            }
            defect = std::max(defect, std::abs(g));
        }
    }
    return defect;
}

PolarizationUnitary::PolarizationUnitary() : u_{{{1.0, 0.0}, {0.0, 1.0}}} {
}

PolarizationUnitary::PolarizationUnitary(const Matrix &u) : u_(u) {
    double d = fqt::unitarity_defect(u);
    if (!(d <= kUnitaryTolerance)) {
        throw ValidationError("matrix is not unitary (defect " + std::to_string(d) + ")");
    }
}

PolarizationUnitary PolarizationUnitary::rotation(double theta) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    return PolarizationUnitary(Matrix{{{c, -s}, {s, c}}});
}

double PolarizationUnitary::unitarity_defect() const {
    return fqt::unitarity_defect(u_);
}

PolarizationUnitary complete_from_column(Amplitude delta, Amplitude eta) {
    double n2 = std::norm(delta) + std::norm(eta);
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kUnitaryTolerance) {
        throw ValidationError("noise column is not normalized: |delta|^2 + |eta|^2 = " + std::to_string(n2));
    }
    return PolarizationUnitary(PolarizationUnitary::Matrix{{{delta, -std::conj(eta)}, {eta, std::conj(delta)}}});
}

PolarizationUnitary sample_haar_su2(Seed seed, uint64_t index) {
    Rng rng(seed, index);
    Amplitude a{rng.normal(), rng.normal()};
    Amplitude b{rng.normal(), rng.normal()};
    double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    return PolarizationUnitary(PolarizationUnitary::Matrix{{{a, -std::conj(b)}, {b, std::conj(a)}}});
}

std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::identity:
            return "identity";
        case NoiseKind::rotation:
            return "rotation";
        case NoiseKind::column:
            return "column";
        case NoiseKind::haar:
            return "haar";
    }
    return "?";
}

std::string to_string(NoisePlacement p) {
    switch (p) {
        case NoisePlacement::per_channel:
            return "per_channel";
        case NoisePlacement::per_timebin:
            return "per_timebin";
        case NoisePlacement::global:
            return "global";
    }
    return "?";
}

NoiseKind parse_noise_kind(const std::string &text) {
    for (auto k : {NoiseKind::identity, NoiseKind::rotation, NoiseKind::column, NoiseKind::haar}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw ConfigError("unknown noise kind '" + text + "'");
}

NoisePlacement parse_noise_placement(const std::string &text) {
    for (auto p : {NoisePlacement::per_channel, NoisePlacement::per_timebin, NoisePlacement::global}) {
        if (to_string(p) == text) {
            return p;
        }
    }
    throw ConfigError("unknown noise placement '" + text + "'");
}

NoiseModel NoiseModel::identity() {
    return uniform(PolarizationUnitary::identity(), NoiseKind::identity);
}

NoiseModel NoiseModel::uniform(const PolarizationUnitary &u, NoiseKind kind) {
    NoiseModel m;
    m.kind = kind;
    m.placement = NoisePlacement::global;
    m.assignments.emplace(NoiseSlot{}, u);
    return m;
}

const PolarizationUnitary &NoiseModel::resolve(const PathLabel &channel, TimeBin bin) const {
    for (const NoiseSlot &slot : {NoiseSlot{channel, bin}, NoiseSlot{channel, std::nullopt},
                                  NoiseSlot{std::nullopt, bin}, NoiseSlot{}}) {
        auto it = assignments.find(slot);
        if (it != assignments.end()) {
            return it->second;
        }
    }
    throw ConfigError("no noise unitary for channel '" + channel.name + "' at time-bin " +
                      std::to_string(bin.index));
}

PhotonState apply_noise(const NoiseModel &m, const PhotonState &s, const PathLabel &channel) {
    StateBuilder b;
    for (const auto &[k, a] : s) {
        if (k.path != channel) {
            b.add(k, a);
            continue;
        }
        const auto &u = m.resolve(channel, k.bin);
        size_t col = k.pol == Polarization::H ? 0 : 1;
        b.add(ModeKet{Polarization::H, k.freq, k.path, k.bin}, a * u.at(0, col));
        b.add(ModeKet{Polarization::V, k.freq, k.path, k.bin}, a * u.at(1, col));
    }
    return std::move(b).build();
}

PolarizationUnitary FixedNoise::unitary() const {
    switch (kind) {
        case NoiseKind::identity:
            return PolarizationUnitary::identity();
        case NoiseKind::rotation:
            return PolarizationUnitary::rotation(theta);
        case NoiseKind::column:
            return complete_from_column(delta, eta);
        case NoiseKind::haar:
            break;
    }
    throw ConfigError("haar noise has no fixed unitary");
}

NoiseModel NoiseSpec::realize(uint64_t trial, Seed fallback_seed, const std::vector<PathLabel> &channels,
                              const std::vector<TimeBin> &bins) const {
    NoiseModel m;
    m.kind = kind;
    m.placement = placement;

    std::vector<NoiseSlot> slots;
    switch (placement) {
        case NoisePlacement::global:
            slots.push_back(NoiseSlot{});
            break;
        case NoisePlacement::per_channel:
            for (const auto &c : channels) {
                slots.push_back(NoiseSlot{c, std::nullopt});
            }
            break;
        case NoisePlacement::per_timebin:
            for (const auto &c : channels) {
                for (auto b : bins) {
                    slots.push_back(NoiseSlot{c, b});
                }
            }
            break;
    }
    if (slots.size() > kHaarStride) {
        throw ConfigError("too many noise slots (" + std::to_string(slots.size()) + ")");
    }

    if (kind == NoiseKind::haar) {
        Seed s = seed.value_or(fallback_seed);
        for (size_t i = 0; i < slots.size(); i++) {
            m.assignments.emplace(slots[i], sample_haar_su2(s, trial * kHaarStride + i));
        }
    } else {
        FixedNoise f = fixed;
        f.kind = kind;
        auto u = f.unitary();
        for (const auto &slot : slots) {
            m.assignments.emplace(slot, u);
        }
    }
    // Overrides also land on every concrete (channel, bin) they match so they
    // outrank the base slots during lookup.
    for (const auto &o : overrides) {
        auto u = o.noise.unitary();
        m.assignments.insert_or_assign(o.slot, u);
        for (const auto &c : channels) {
            for (auto b : bins) {
                if ((!o.slot.channel || *o.slot.channel == c) && (!o.slot.bin || *o.slot.bin == b)) {
                    m.assignments.insert_or_assign(NoiseSlot{c, b}, u);
                }
            }
        }
    }
    return m;
}

std::string NoiseSpec::describe() const {
    std::ostringstream out;
    out.precision(17);
    out << to_string(kind);
    switch (kind) {
        case NoiseKind::rotation:
            out << "(theta=" << fixed.theta << ")";
            break;
        case NoiseKind::column:
            out << "(delta=" << fixed.delta << ", eta=" << fixed.eta << ")";
            break;
        case NoiseKind::haar:
            if (seed) {
                out << "(seed=" << seed->value << ")";
            }
            break;
        case NoiseKind::identity:
            break;
    }
    out << " " << to_string(placement);
    if (!overrides.empty()) {
        out << " +" << overrides.size() << " override(s)";
    }
    return out.str();
}

}  // namespace fqt
