#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "fqt/noise.h"
#include "fqt/state_space.h"

namespace fqt::testing {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
inline const Amplitude kI{0.0, 1.0};

inline ModeKet ket(Polarization p, Frequency f, const PathLabel &path, uint32_t bin = 0) {
    return ModeKet{p, f, path, TimeBin{bin}};
}

/// Uniform on the Bloch sphere, drawn with a generator independent of the library's.
inline InputQubit random_qubit(std::mt19937_64 &gen) {
    std::normal_distribution<double> n;
    Amplitude a{n(gen), n(gen)};
    Amplitude b{n(gen), n(gen)};
    double norm = std::sqrt(std::norm(a) + std::norm(b));
    return InputQubit{a / norm, b / norm};
}

/// Random 2x2 unitary built from Euler angles and a global phase.
inline PolarizationUnitary random_unitary(std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
    double theta = u(gen) / 4, phi = u(gen), chi = u(gen), g = u(gen);
    Amplitude e = std::polar(1.0, g);
    PolarizationUnitary::Matrix m{{
        {e * std::polar(std::cos(theta), phi), -e * std::polar(std::sin(theta), -chi)},
        {e * std::polar(std::sin(theta), chi), e * std::polar(std::cos(theta), -phi)},
    }};
    return PolarizationUnitary(m);
}

/// Random state with `n` kets spread over the given paths, bins and both frequencies.
inline PhotonState random_state(std::mt19937_64 &gen, const std::vector<PathLabel> &paths,
                                const std::vector<uint32_t> &bins = {0}) {
    std::normal_distribution<double> n;
    PhotonState::Map m;
    for (const auto &p : paths) {
        for (auto b : bins) {
            for (auto f : {kOmega1, kOmega2}) {
                for (auto pol : {Polarization::H, Polarization::V}) {
                    m[ket(pol, f, p, b)] = Amplitude{n(gen), n(gen)};
                }
            }
        }
    }
    return PhotonState(m).normalized();
}

}  // namespace fqt::testing
