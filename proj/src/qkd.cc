#include "fqt/qkd.h"

#include <cmath>
#include <numbers>

#include "fqt/analysis.h"
#include "fqt/errors.h"

namespace fqt {

namespace {

constexpr double kSnap = 1e-12;
// Keeps the per-bit streams apart from the Haar streams when both use one seed.
constexpr uint64_t kQkdStreamTag = 0x42423834'71626b64ULL;

}  // namespace

std::string to_string(Basis b) {
    return b == Basis::X ? "X" : "Y";
}

InputQubit basis_state(Basis b, int bit) {
    const double r = 1.0 / std::numbers::sqrt2;
    double sign = bit == 0 ? 1.0 : -1.0;
    if (b == Basis::X) {
        return InputQubit{Amplitude{r, 0}, Amplitude{sign * r, 0}};
    }
    return InputQubit{Amplitude{r, 0}, Amplitude{0, sign * r}};
}

std::array<double, 2> measurement_probabilities(const PhotonState &s, Basis b) {
    if (s.empty()) {
        throw ValidationError("cannot measure an empty state");
    }
    const auto &first = s.begin()->first;
    Amplitude h{};
    Amplitude v{};
    for (const auto &[k, a] : s) {
        if (k.path != first.path || k.bin != first.bin || k.freq != first.freq) {
            throw ValidationError("measurement needs a state conditioned on one port, time-bin and frequency; found " +
                                  to_string(first) + " and " + to_string(k));
        }
        (k.pol == Polarization::H ? h : v) = a;
    }
    double n2 = std::norm(h) + std::norm(v);
    if (std::abs(n2 - 1.0) > 1e-9) {
        throw ValidationError("measurement needs a normalized state (norm^2 = " + std::to_string(n2) + ")");
    }
    std::array<double, 2> p{};
    for (int bit = 0; bit < 2; bit++) {
        auto e = basis_state(b, bit);
        p[bit] = std::norm(std::conj(e.alpha) * h + std::conj(e.beta) * v);
        if (p[bit] < kSnap) {
            p[bit] = 0.0;
        }
    }
    double total = p[0] + p[1];
    return {p[0] / total, p[1] / total};
}

int measure(const PhotonState &s, Basis b, Rng &rng) {
    auto p = measurement_probabilities(s, b);
    return rng.uniform() < p[0] ? 0 : 1;
}

QkdReport bb84_run(const QkdInput &in) {
    if (in.n_bits < 1) {
        throw ConfigError("qkd.n_bits must be at least 1");
    }
    auto channels = scheme_channels(in.scheme);
    auto bins = scheme_bins(in.scheme);

    QkdReport r;
    r.raw_bits = in.n_bits;
    r.protected_transmission = in.protected_transmission;
    r.scheme = in.scheme;
    r.noise = in.noise.describe();
    r.seed = in.seed;

    const Seed stream_seed{in.seed.value ^ kQkdStreamTag};
    for (uint64_t i = 0; i < in.n_bits; i++) {
        Rng rng(stream_seed, i);
        Basis sender_basis = rng.coin() ? Basis::Y : Basis::X;
        int sender_bit = rng.coin() ? 1 : 0;
        Basis receiver_basis = rng.coin() ? Basis::Y : Basis::X;
        InputQubit q = basis_state(sender_basis, sender_bit);
        NoiseModel model = in.noise.realize(i, in.seed, channels, bins);

        PhotonState received;
        if (in.protected_transmission) {
            auto out = run_scheme(q, in.scheme, model, in.pm_mode);
            auto branches = decompose(out, prepare_input(q, kOmega2, kInputPath));
            double u = rng.uniform();
            double total = 0;
            for (const auto &b : branches) {
                total += b.probability;
            }
            const BranchOutcome *chosen = &branches.back();
            double acc = 0;
            for (const auto &b : branches) {
                acc += b.probability / total;
                if (u < acc) {
                    chosen = &b;
                    break;
                }
            }
            r.min_branch_fidelity = std::min(r.min_branch_fidelity, chosen->fidelity);
            received = chosen->conditional_state;
        } else {
            received = apply_noise(model, prepare_input(q, kOmega2, channels.front()), channels.front());
        }

        int outcome = measure(received, receiver_basis, rng);
        if (receiver_basis != sender_basis) {
            continue;
        }
        BasisTally &tally = sender_basis == Basis::X ? r.x : r.y;
        tally.sifted++;
        r.sifted_bits++;
        if (outcome != sender_bit) {
            tally.errors++;
            r.errors++;
        }
    }
    r.qber = r.sifted_bits == 0 ? 0.0 : static_cast<double>(r.errors) / r.sifted_bits;
    return r;
}

}  // namespace fqt
