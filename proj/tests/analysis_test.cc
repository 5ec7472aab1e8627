#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "fqt/analysis.h"
#include "fqt/errors.h"
#include "test_support.h"

namespace fqt {
namespace {

using namespace fqt::testing;
using P = Polarization;

PhotonState input(const InputQubit &q) {
    return prepare_input(q, kOmega2, kInputPath);
}

std::map<std::string, double> by_key(const std::vector<BranchOutcome> &branches) {
    std::map<std::string, double> out;
    for (const auto &b : branches) {
        out[b.key()] = b.probability;
    }
    return out;
}

TEST(Decompose, TwoChannelThreeFourFiveNoise) {
    InputQubit q{kInvSqrt2, Amplitude{0.0, kInvSqrt2}};
    auto out = run_scheme(q, SchemeKind::two_channel, NoiseModel::uniform(complete_from_column(0.6, 0.8)),
                          PmMode::gated());
    auto branches = decompose(out, input(q));
    ASSERT_EQ(branches.size(), 4u);
    auto p = by_key(branches);
    // Per channel: |delta|^2/2 on d, |eta|^2/2 on c.
    EXPECT_NEAR(p["d_a@0"] + p["d_b@0"], 0.36, 1e-12);
    EXPECT_NEAR(p["c_a@0"] + p["c_b@0"], 0.64, 1e-12);
    EXPECT_NEAR(p["d_a@0"], 0.18, 1e-12);
    for (const auto &b : branches) {
        EXPECT_NEAR(b.fidelity, 1.0, 1e-12);
    }
}

TEST(Decompose, TwoChannelIdentityNoiseUsesOnlyPortD) {
    InputQubit q{0.6, 0.8};
    auto branches = decompose(run_scheme(q, SchemeKind::two_channel, NoiseModel::identity(), PmMode::gated()), input(q));
    double on_d = 0;
    for (const auto &b : branches) {
        EXPECT_EQ(b.port.name[0], 'd');
        on_d += b.probability;
    }
    EXPECT_NEAR(on_d, 1.0, 1e-12);
}

TEST(Decompose, SingleChannelColumnNoiseFourBranches) {
    // Column (3/5, 4/5) completes to second column (-4/5, 3/5).
    InputQubit q{0.6, Amplitude{0.0, 0.8}};
    auto out = run_scheme(q, SchemeKind::single_channel, NoiseModel::uniform(complete_from_column(0.6, 0.8)),
                          PmMode::gated());
    auto branches = decompose(out, input(q));
    ASSERT_EQ(branches.size(), 4u);
    std::vector<std::string> keys;
    for (const auto &b : branches) {
        keys.push_back(b.key());
        EXPECT_NEAR(b.fidelity, 1.0, 1e-12);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"c@0", "c@1", "d@0", "d@1"}));
    auto p = by_key(branches);
    EXPECT_NEAR(p["d@1"], 0.36 / 2, 1e-12);
    EXPECT_NEAR(p["c@1"], 0.64 / 2, 1e-12);
    EXPECT_NEAR(p["d@0"], 0.64 / 2, 1e-12);
    EXPECT_NEAR(p["c@0"], 0.36 / 2, 1e-12);
}

TEST(Decompose, DropsNegligibleBranches) {
    PhotonState s{{ket(P::H, kOmega2, "d"), 1.0}, {ket(P::H, kOmega2, "c"), 1e-8}};
    auto d = decompose_detailed(s, input({1.0, 0.0}));
    ASSERT_EQ(d.branches.size(), 1u);
    EXPECT_EQ(d.dropped_branches, 1u);
    EXPECT_GT(d.dropped_probability, 0.0);
}

TEST(Decompose, GlobalPhaseOnOneBranchChangesNothing) {
    std::mt19937_64 gen(41);
    auto q = random_qubit(gen);
    auto out = run_scheme(q, SchemeKind::single_channel, NoiseModel::uniform(random_unitary(gen)), PmMode::gated());
    PhotonState::Map rotated;
    for (const auto &[k, a] : out) {
        rotated[k] = k.path.name == "c" && k.bin.index == 0 ? a * std::polar(1.0, 1.234) : a;
    }
    auto before = decompose(out, input(q));
    auto after = decompose(PhotonState(rotated), input(q));
    ASSERT_EQ(before.size(), after.size());
    for (size_t i = 0; i < before.size(); i++) {
        EXPECT_EQ(before[i].key(), after[i].key());
        EXPECT_NEAR(before[i].probability, after[i].probability, 1e-15);
        EXPECT_NEAR(before[i].fidelity, after[i].fidelity, 1e-12);
    }
}

TEST(SuccessProbability, Examples) {
    EXPECT_EQ(success_probability({}), 0.0);
    InputQubit q{0.6, 0.8};
    auto ok = decompose(run_scheme(q, SchemeKind::two_channel, NoiseModel::identity(), PmMode::gated()), input(q));
    EXPECT_NEAR(success_probability(ok), 1.0, 1e-12);
}

TEST(SuccessProbability, StaticPhaseSingleChannelIsHalf) {
    InputQubit q{std::sqrt(0.8), std::sqrt(0.2)};
    std::mt19937_64 gen(42);
    for (int i = 0; i < 20; i++) {
        NoiseModel m;
        m.assignments.emplace(NoiseSlot{kSingleChannel, TimeBin{0}}, random_unitary(gen));
        m.assignments.emplace(NoiseSlot{kSingleChannel, TimeBin{1}}, random_unitary(gen));
        auto branches = decompose(run_scheme(q, SchemeKind::single_channel, m, PmMode::fixed(kDecoderPhase)), input(q));
        EXPECT_NEAR(success_probability(branches, 1e-6), 0.5, 1e-12);
    }
}

TEST(RunReport, FlagsDegradedBranchesUnderStaticPhase) {
    InputQubit q{std::sqrt(0.8), std::sqrt(0.2)};
    auto r = run_report(q, SchemeKind::single_channel, NoiseModel::uniform(complete_from_column(0.6, 0.8)), "column",
                        PmMode::fixed(std::numbers::pi / 2));
    ASSERT_FALSE(r.notes.empty());
    EXPECT_NE(r.notes.back().find("2 degraded"), std::string::npos);
    EXPECT_NE(r.notes.back().find("time_gated"), std::string::npos);
    EXPECT_NEAR(r.probability_sum, 1.0, 1e-12);
    EXPECT_NEAR(r.success_probability, 0.5, 1e-12);
}

MonteCarloInput haar_input(SchemeKind scheme, NoisePlacement placement, uint64_t trials) {
    MonteCarloInput in;
    in.input = InputQubit{0.6, Amplitude{0.0, 0.8}};
    in.scheme = scheme;
    in.noise = NoiseSpec{NoiseKind::haar, {}, placement, std::nullopt, {}};
    in.trials = trials;
    in.seed = Seed{123};
    return in;
}

TEST(MonteCarlo, TwoChannelHaarFidelityOne) {
    auto st = monte_carlo(haar_input(SchemeKind::two_channel, NoisePlacement::per_channel, 2000));
    EXPECT_EQ(st.trials, 2000u);
    EXPECT_GE(st.min_fidelity, 1.0 - 1e-10);
    EXPECT_NEAR(st.mean_success_probability, 1.0, 1e-10);
    EXPECT_LT(st.max_probability_defect, 1e-10);
}

TEST(MonteCarlo, DeterministicAndThreadIndependent) {
    auto in = haar_input(SchemeKind::single_channel, NoisePlacement::per_timebin, 300);
    in.pm_mode = PmMode::fixed(kDecoderPhase);
    auto a = monte_carlo(in);
    auto b = monte_carlo(in);
    in.threads = 7;
    auto c = monte_carlo(in);
    for (const auto *other : {&b, &c}) {
        EXPECT_EQ(a.mean_fidelity, other->mean_fidelity);
        EXPECT_EQ(a.min_fidelity, other->min_fidelity);
        EXPECT_EQ(a.mean_success_probability, other->mean_success_probability);
        EXPECT_EQ(a.branch_probability_means, other->branch_probability_means);
        ASSERT_EQ(a.per_trial.size(), other->per_trial.size());
        for (size_t i = 0; i < a.per_trial.size(); i++) {
            EXPECT_EQ(a.per_trial[i].min_fidelity, other->per_trial[i].min_fidelity);
        }
    }
    EXPECT_NEAR(a.mean_success_probability, 0.5, 1e-12);
}

TEST(MonteCarlo, ChunkedAggregationMatchesSequential) {
    auto in = haar_input(SchemeKind::two_channel, NoisePlacement::per_channel, 50);
    auto stats = monte_carlo(in);
    std::vector<TrialResult> trials;
    for (uint64_t t = 0; t < in.trials; t++) {
        auto m = in.noise.realize(t, in.seed, scheme_channels(in.scheme), scheme_bins(in.scheme));
        auto branches = decompose(run_scheme(in.input, in.scheme, m, in.pm_mode), input(in.input));
        trials.push_back(summarize_trial(t, branches, in.fidelity_tolerance));
    }
    auto seq = aggregate(trials, in.seed);
    EXPECT_EQ(seq.mean_fidelity, stats.mean_fidelity);
    EXPECT_EQ(seq.mean_success_probability, stats.mean_success_probability);
    EXPECT_EQ(seq.branch_probability_means, stats.branch_probability_means);
}

TEST(MonteCarlo, SingleIdentityTrialMatchesRunReport) {
    MonteCarloInput in;
    in.input = InputQubit{0.6, 0.8};
    auto st = monte_carlo(in);
    auto r = run_report(in.input, in.scheme, NoiseModel::identity(), "identity", in.pm_mode);
    EXPECT_EQ(st.trials, 1u);
    EXPECT_EQ(st.min_fidelity, r.min_fidelity);
    EXPECT_EQ(st.mean_success_probability, r.success_probability);
    for (const auto &b : r.branches) {
        EXPECT_EQ(st.branch_probability_means.at(b.key()), b.probability);
    }
}

TEST(MonteCarlo, RejectsBadInputBeforeRunning) {
    auto in = haar_input(SchemeKind::two_channel, NoisePlacement::per_channel, 0);
    EXPECT_THROW(monte_carlo(in), ConfigError);
    in.trials = 1;
    in.fidelity_tolerance = 0;
    EXPECT_THROW(monte_carlo(in), ConfigError);
    in.fidelity_tolerance = 1e-9;
    in.input = InputQubit{1.0, 1.0};
    EXPECT_THROW(monte_carlo(in), ValidationError);
}

}  // namespace
}  // namespace fqt
