#include "fqt/reference_states.h"

#include <cmath>
#include <numbers>

#include "fqt/circuits.h"
#include "fqt/errors.h"

namespace fqt {

namespace {

constexpr Amplitude kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
const TimeBin kBin0{0};
const TimeBin kBin1{1};

Amplitude need(const std::optional<Amplitude> &v, const char *symbol) {
    if (!v) {
        throw ValidationError(std::string("closed form needs symbol '") + symbol + "'");
    }
    return *v;
}

ModeKet ket(Polarization p, Frequency f, const PathLabel &path, TimeBin bin = kBin0) {
    return ModeKet{p, f, path, bin};
}

constexpr auto H = Polarization::H;
constexpr auto V = Polarization::V;

/// (1/sqrt2)(alpha|H,w1> + i beta|H,w2>)_a + (1/sqrt2)(i alpha|H,w1> + beta|H,w2>)_b
PhotonState two_channel_encoded(Amplitude alpha, Amplitude beta) {
    return PhotonState{
        {ket(H, kOmega1, kChannelA), kInvSqrt2 * alpha},
        {ket(H, kOmega2, kChannelA), kInvSqrt2 * kI * beta},
        {ket(H, kOmega1, kChannelB), kInvSqrt2 * kI * alpha},
        {ket(H, kOmega2, kChannelB), kInvSqrt2 * beta},
    };
}

/// (1/sqrt2)(alpha delta|H,w1> + alpha eta|V,w1> + i beta delta|H,w2> + i beta eta|V,w2>)_a
PhotonState channel_a_noisy(Amplitude alpha, Amplitude beta, Amplitude delta, Amplitude eta) {
    return PhotonState{
        {ket(H, kOmega1, kChannelA), kInvSqrt2 * alpha * delta},
        {ket(V, kOmega1, kChannelA), kInvSqrt2 * alpha * eta},
        {ket(H, kOmega2, kChannelA), kInvSqrt2 * kI * beta * delta},
        {ket(V, kOmega2, kChannelA), kInvSqrt2 * kI * beta * eta},
    };
}

/// prefactor * [delta (alpha|H,w2> + beta|V,w2>)_d + eta (alpha|H,w2> + beta|V,w2>)_c]
PhotonState decoded_pair(Amplitude prefactor, Amplitude alpha, Amplitude beta, Amplitude delta, Amplitude eta,
                         TimeBin bin) {
    return PhotonState{
        {ket(H, kOmega2, "d", bin), prefactor * delta * alpha},
        {ket(V, kOmega2, "d", bin), prefactor * delta * beta},
        {ket(H, kOmega2, "c", bin), prefactor * eta * alpha},
        {ket(V, kOmega2, "c", bin), prefactor * eta * beta},
    };
}

/// (1/sqrt2)[(alpha|H,w1> + i beta|H,w2>)_{t+dT} + (i alpha|V,w1> + beta|V,w2>)_t]
PhotonState single_channel_encoded(Amplitude alpha, Amplitude beta) {
    return PhotonState{
        {ket(H, kOmega1, kSingleChannel, kBin1), kInvSqrt2 * alpha},
        {ket(H, kOmega2, kSingleChannel, kBin1), kInvSqrt2 * kI * beta},
        {ket(V, kOmega1, kSingleChannel, kBin0), kInvSqrt2 * kI * alpha},
        {ket(V, kOmega2, kSingleChannel, kBin0), kInvSqrt2 * beta},
    };
}

PhotonState sum(const PhotonState &x, const PhotonState &y) {
    StateBuilder b;
    for (const auto &[k, a] : x) {
        b.add(k, a);
    }
    for (const auto &[k, a] : y) {
        b.add(k, a);
    }
    return std::move(b).build();
}

}  // namespace

std::string to_string(ReferenceState r) {
    switch (r) {
        case ReferenceState::two_channel_encoded:
            return "two_channel_encoded";
        case ReferenceState::channel_a_noisy:
            return "channel_a_noisy";
        case ReferenceState::channel_a_decoded:
            return "channel_a_decoded";
        case ReferenceState::channel_b_decoded:
            return "channel_b_decoded";
        case ReferenceState::single_channel_encoded:
            return "single_channel_encoded";
        case ReferenceState::single_channel_decoded:
            return "single_channel_decoded";
    }
    return "?";
}

std::vector<ReferenceState> all_reference_states() {
    return {ReferenceState::two_channel_encoded,    ReferenceState::channel_a_noisy,
            ReferenceState::channel_a_decoded,      ReferenceState::channel_b_decoded,
            ReferenceState::single_channel_encoded, ReferenceState::single_channel_decoded};
}

ReferenceState parse_reference_state(const std::string &text) {
    for (auto r : all_reference_states()) {
        if (to_string(r) == text) {
            return r;
        }
    }
    throw ValidationError("unknown reference state '" + text + "'");
}

// Symbols are read one statement at a time so the first missing one is the one reported.
PhotonState closed_form(ReferenceState which, const Symbols &sym) {
    Amplitude alpha = need(sym.alpha, "alpha");
    Amplitude beta = need(sym.beta, "beta");
    switch (which) {
        case ReferenceState::two_channel_encoded:
            return two_channel_encoded(alpha, beta);
        case ReferenceState::channel_a_noisy: {
            Amplitude delta = need(sym.delta, "delta");
            Amplitude eta = need(sym.eta, "eta");
            return channel_a_noisy(alpha, beta, delta, eta);
        }
        case ReferenceState::channel_a_decoded: {
            Amplitude delta = need(sym.delta, "delta");
            Amplitude eta = need(sym.eta, "eta");
            return decoded_pair(kInvSqrt2, alpha, beta, delta, eta, kBin0);
        }
        case ReferenceState::channel_b_decoded: {
            Amplitude delta = need(sym.delta_b, "delta_b");
            Amplitude eta = need(sym.eta_b, "eta_b");
            return decoded_pair(kI * kInvSqrt2, alpha, beta, delta, eta, kBin0);
        }
        case ReferenceState::single_channel_encoded:
            return single_channel_encoded(alpha, beta);
        case ReferenceState::single_channel_decoded: {
            Amplitude delta1 = need(sym.delta1, "delta1");
            Amplitude eta1 = need(sym.eta1, "eta1");
            Amplitude delta2 = need(sym.delta2, "delta2");
            Amplitude eta2 = need(sym.eta2, "eta2");
            auto late = decoded_pair(kInvSqrt2, alpha, beta, delta1, eta1, kBin1);
            auto early = decoded_pair(kI * kInvSqrt2, alpha, beta, delta2, eta2, kBin0);
            return sum(late, early);
        }
    }
    throw ValidationError("unknown reference state");
}

}  // namespace fqt
