#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fqt/errors.h"
#include "fqt/qkd.h"
#include "test_support.h"

namespace fqt {
namespace {

using namespace fqt::testing;
using P = Polarization;

PhotonState polar(const InputQubit &q) {
    return prepare_input(q, kOmega2, "d");
}

TEST(BasisStates, OrthogonalWithinBasis) {
    for (auto b : {Basis::X, Basis::Y}) {
        EXPECT_NEAR(std::abs(inner_product(polar(basis_state(b, 0)), polar(basis_state(b, 1)))), 0.0, 1e-15);
    }
}

TEST(Measure, Probabilities) {
    auto plus_x = polar(basis_state(Basis::X, 0));
    auto p = measurement_probabilities(plus_x, Basis::X);
    EXPECT_EQ(p[0], 1.0);
    EXPECT_EQ(p[1], 0.0);

    auto h = polar({1.0, 0.0});
    p = measurement_probabilities(h, Basis::X);
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);

    // |<+-x|+y>|^2 = |1 +- i|^2 / 4 = 1/2.
    p = measurement_probabilities(polar(basis_state(Basis::Y, 0)), Basis::X);
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(Measure, ProbabilitiesSumToOne) {
    std::mt19937_64 gen(51);
    for (int i = 0; i < 200; i++) {
        auto s = polar(random_qubit(gen));
        for (auto b : {Basis::X, Basis::Y}) {
            auto p = measurement_probabilities(s, b);
            EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
        }
    }
}

TEST(Measure, SampledFrequencies) {
    Rng rng(Seed{3}, 0);
    auto h = polar({1.0, 0.0});
    int zeros = 0;
    for (int i = 0; i < 10000; i++) {
        zeros += measure(h, Basis::X, rng) == 0;
    }
    EXPECT_NEAR(zeros / 10000.0, 0.5, 0.02);
    auto plus_y = polar(basis_state(Basis::Y, 0));
    for (int i = 0; i < 1000; i++) {
        ASSERT_EQ(measure(plus_y, Basis::Y, rng), 0);
    }
}

TEST(Measure, RejectsSpreadOrUnnormalizedStates) {
    PhotonState two_ports{{ket(P::H, kOmega2, "c"), kInvSqrt2}, {ket(P::H, kOmega2, "d"), kInvSqrt2}};
    EXPECT_THROW(measurement_probabilities(two_ports, Basis::X), ValidationError);
    PhotonState two_bins{{ket(P::H, kOmega2, "d", 0), kInvSqrt2}, {ket(P::V, kOmega2, "d", 1), kInvSqrt2}};
    EXPECT_THROW(measurement_probabilities(two_bins, Basis::X), ValidationError);
    EXPECT_THROW(measurement_probabilities(PhotonState{{ket(P::H, kOmega2, "d"), 0.5}}, Basis::X), ValidationError);
    EXPECT_THROW(measurement_probabilities(PhotonState{}, Basis::X), ValidationError);
}

QkdInput rotation_input(bool protect, double theta, uint64_t bits) {
    QkdInput in;
    in.n_bits = bits;
    in.noise.kind = NoiseKind::rotation;
    in.noise.fixed = FixedNoise{NoiseKind::rotation, theta, 1.0, 0.0};
    in.protected_transmission = protect;
    in.seed = Seed{0};
    return in;
}

TEST(Bb84, ProtectedRotationHasZeroQber) {
    auto r = bb84_run(rotation_input(true, std::numbers::pi / 6, 10000));
    EXPECT_EQ(r.errors, 0u);
    EXPECT_EQ(r.qber, 0.0);
    EXPECT_GE(r.min_branch_fidelity, 1.0 - 1e-12);
    EXPECT_NEAR(r.sifted_fraction(), 0.5, 0.02);
}

TEST(Bb84, ProtectedHaarHasZeroQberOnBothSchemes) {
    for (auto scheme : {SchemeKind::two_channel, SchemeKind::single_channel}) {
        QkdInput in;
        in.n_bits = 2000;
        in.scheme = scheme;
        in.noise = NoiseSpec{NoiseKind::haar,
                             {},
                             scheme == SchemeKind::two_channel ? NoisePlacement::per_channel : NoisePlacement::per_timebin,
                             Seed{9},
                             {}};
        auto r = bb84_run(in);
        EXPECT_EQ(r.errors, 0u) << to_string(scheme);
    }
}

TEST(Bb84, UnprotectedIdentityHasZeroQber) {
    auto r = bb84_run(rotation_input(false, 0.0, 5000));
    EXPECT_EQ(r.errors, 0u);
}

TEST(Bb84, UnprotectedRotationMatchesAnalyticRates) {
    double theta = std::numbers::pi / 6;
    // Real rotation: <-x|U|+x> = sin(theta) (up to sign); <-y|U|+y> = 0.
    double x_rate = std::pow(std::sin(theta), 2);
    auto r = bb84_run(rotation_input(false, theta, 10000));
    EXPECT_NEAR(r.x.error_rate(), x_rate, 0.02);
    EXPECT_NEAR(r.y.error_rate(), 0.0, 0.01);
    EXPECT_NEAR(r.qber, x_rate / 2, 0.02);
    EXPECT_NEAR(r.sifted_fraction(), 0.5, 0.02);
    EXPECT_EQ(r.sifted_bits, r.x.sifted + r.y.sifted);
    EXPECT_LE(r.sifted_bits, r.raw_bits);
    EXPECT_DOUBLE_EQ(r.qber, static_cast<double>(r.errors) / r.sifted_bits);
}

TEST(Bb84, UnprotectedRateIsUnbiasedAcrossSeeds) {
    // 20 x 10^4 bits pins the X-basis mean much tighter than one run can.
    double theta = std::numbers::pi / 6;
    double sum = 0;
    for (uint64_t seed = 100; seed < 120; seed++) {
        auto in = rotation_input(false, theta, 10000);
        in.seed = Seed{seed};
        sum += bb84_run(in).x.error_rate();
    }
    EXPECT_NEAR(sum / 20, std::pow(std::sin(theta), 2), 0.006);
}

TEST(Bb84, DeterministicForSeed) {
    auto a = bb84_run(rotation_input(false, 0.4, 3000));
    auto b = bb84_run(rotation_input(false, 0.4, 3000));
    EXPECT_EQ(a.errors, b.errors);
    EXPECT_EQ(a.sifted_bits, b.sifted_bits);
    auto in = rotation_input(false, 0.4, 3000);
    in.seed = Seed{1};
    auto c = bb84_run(in);
    EXPECT_TRUE(c.errors != a.errors || c.sifted_bits != a.sifted_bits);
}

TEST(Bb84, RejectsZeroBits) {
    EXPECT_THROW(bb84_run(rotation_input(true, 0.1, 0)), ConfigError);
}

}  // namespace
}  // namespace fqt
