#include "fqt/state_space.h"

#include <algorithm>
#include <cmath>

#include "fqt/errors.h"

namespace fqt {

std::strong_ordering ModeKet::operator<=>(const ModeKet &other) const {
    if (auto c = path <=> other.path; c != 0) {
        return c;
    }
    if (auto c = bin <=> other.bin; c != 0) {
        return c;
    }
    if (auto c = freq <=> other.freq; c != 0) {
        return c;
    }
    return pol <=> other.pol;
}

std::string to_string(Polarization p) {
    return p == Polarization::H ? "H" : "V";
}

std::string to_string(Frequency f) {
    return "omega" + std::to_string(f.index);
}

std::string to_string(const ModeKet &k) {
    return "|" + to_string(k.pol) + "," + to_string(k.freq) + "," + k.path.name + ",t" + std::to_string(k.bin.index) +
           ">";
}

Polarization parse_polarization(const std::string &text) {
    if (text == "H") {
        return Polarization::H;
    }
    if (text == "V") {
        return Polarization::V;
    }
    throw ValidationError("unknown polarization '" + text + "'");
}

Frequency parse_frequency(const std::string &text) {
    static const std::string prefix = "omega";
    if (text.size() > prefix.size() && text.compare(0, prefix.size(), prefix) == 0) {
        auto digits = text.substr(prefix.size());
        if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
            digits.size() < 10) {
            return Frequency{static_cast<uint32_t>(std::stoul(digits))};
        }
    }
    throw ValidationError("unknown frequency '" + text + "' (expected omega<N>)");
}

namespace {

void prune(PhotonState::Map &m) {
    std::erase_if(m, [](const auto &kv) { return std::abs(kv.second) < kPruneThreshold; });
}

}  // namespace

PhotonState::PhotonState(std::initializer_list<std::pair<ModeKet, Amplitude>> terms) {
    for (const auto &[k, a] : terms) {
        amplitudes_[k] += a;
    }
    prune(amplitudes_);
}

PhotonState::PhotonState(Map amplitudes) : amplitudes_(std::move(amplitudes)) {
    prune(amplitudes_);
}

Amplitude PhotonState::amplitude(const ModeKet &k) const {
    auto it = amplitudes_.find(k);
    return it == amplitudes_.end() ? Amplitude{} : it->second;
}

double PhotonState::norm_squared() const {
    double total = 0;
    for (const auto &[k, a] : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

PhotonState PhotonState::scaled(Amplitude factor) const {
    Map out;
    for (const auto &[k, a] : amplitudes_) {
        out.emplace_hint(out.end(), k, a * factor);
    }
    return PhotonState(std::move(out));
}

PhotonState PhotonState::normalized() const {
    double n2 = norm_squared();
    if (n2 <= 0) {
        throw ValidationError("cannot normalize a zero-norm state");
    }
    return scaled(1.0 / std::sqrt(n2));
}

bool StateBuilder::add(const ModeKet &k, Amplitude a) {
    auto [it, inserted] = acc_.try_emplace(k, a);
    if (!inserted) {
        it->second += a;
    }
    return !inserted;
}

PhotonState StateBuilder::build() && {
    return PhotonState(std::move(acc_));
}

void validate(const InputQubit &q) {
    double n2 = std::norm(q.alpha) + std::norm(q.beta);
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTolerance) {
        throw ValidationError("input qubit is not normalized: |alpha|^2 + |beta|^2 = " + std::to_string(n2));
    }
}

PhotonState prepare_input(const InputQubit &q, Frequency freq, const PathLabel &path) {
    validate(q);
    return PhotonState{
        {ModeKet{Polarization::H, freq, path, TimeBin{0}}, q.alpha},
        {ModeKet{Polarization::V, freq, path, TimeBin{0}}, q.beta},
    };
}

Amplitude inner_product(const PhotonState &s1, const PhotonState &s2) {
    // Walk both ordered maps together.
    Amplitude total{};
    auto i = s1.begin();
    auto j = s2.begin();
    while (i != s1.end() && j != s2.end()) {
        auto c = i->first <=> j->first;
        if (c < 0) {
            ++i;
        } else if (c > 0) {
            ++j;
        } else {
            total += std::conj(i->second) * j->second;
            ++i;
            ++j;
        }
    }
    return total;
}

double fidelity(const PhotonState &s, const PhotonState &ideal) {
    double ns = s.norm_squared();
    double ni = ideal.norm_squared();
    if (ns <= 0 || ni <= 0) {
        throw ValidationError("fidelity of a zero-norm state is undefined");
    }
    double f = std::norm(inner_product(ideal, s)) / (ns * ni);
    return std::clamp(f, 0.0, 1.0);
}

Conditioned condition(const PhotonState &s, const std::function<bool(const ModeKet &)> &keep) {
    PhotonState::Map kept;
    for (const auto &[k, a] : s) {
        if (keep(k)) {
            kept.emplace_hint(kept.end(), k, a);
        }
    }
    Conditioned out;
    out.sub = PhotonState(std::move(kept));
    out.empty_branch = out.sub.empty();
    double total = s.norm_squared();
    out.probability = (out.empty_branch || total <= 0) ? 0.0 : out.sub.norm_squared() / total;
    return out;
}

PhotonState relocate(const PhotonState &s, const PathLabel &path, TimeBin bin) {
    StateBuilder b;
    for (const auto &[k, a] : s) {
        b.add(ModeKet{k.pol, k.freq, path, bin}, a);
    }
    return std::move(b).build();
}

double max_amplitude_deviation(const PhotonState &a, const PhotonState &b) {
    double worst = 0;
    for (const auto &[k, amp] : a) {
        worst = std::max(worst, std::abs(amp - b.amplitude(k)));
    }
    for (const auto &[k, amp] : b) {
        worst = std::max(worst, std::abs(amp - a.amplitude(k)));
    }
    return worst;
}

}  // namespace fqt
