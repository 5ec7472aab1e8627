#pragma once

#include <map>
#include <string>
#include <vector>

#include "fqt/circuits.h"
#include "fqt/noise.h"
#include "fqt/rng.h"
#include "fqt/state_space.h"

namespace fqt {

/// Default fidelity tolerance for counting a branch as a success.
inline constexpr double kFidelityTolerance = 1e-9;
/// Branches lighter than this are left out of reports.
inline constexpr double kMinBranchProbability = 1e-14;

/// One (port, arrival slot) component of a decoded state.
struct BranchOutcome {
    PathLabel port;
    TimeBin bin;
    double probability = 0.0;
    PhotonState conditional_state;  // normalized
    double fidelity = 0.0;          // against the ideal polarization/frequency content

    std::string key() const;  // "port@bin"
};

struct Decomposition {
    std::vector<BranchOutcome> branches;
    size_t dropped_branches = 0;
    double dropped_probability = 0.0;
};

/// Splits `s` by (path, bin) in ModeKet order, dropping branches below
/// kMinBranchProbability. Fidelity compares each branch with `ideal` after
/// moving both to a common path and bin.
Decomposition decompose_detailed(const PhotonState &s, const PhotonState &ideal);
std::vector<BranchOutcome> decompose(const PhotonState &s, const PhotonState &ideal);

/// Sum of probabilities of branches with fidelity >= 1 - tol.
double success_probability(const std::vector<BranchOutcome> &branches, double tol = kFidelityTolerance);

struct RunReport {
    InputQubit input;
    SchemeKind scheme = SchemeKind::two_channel;
    std::string noise;
    PmMode pm_mode;
    std::vector<BranchOutcome> branches;
    size_t dropped_branches = 0;
    double probability_sum = 0.0;
    double success_probability = 0.0;
    double min_fidelity = 1.0;
    double fidelity_tolerance = kFidelityTolerance;
    std::vector<std::string> notes;
};

/// run_scheme + decompose, with notes explaining degraded branches.
RunReport run_report(const InputQubit &q, SchemeKind scheme, const NoiseModel &m, const std::string &noise_description,
                     const PmMode &pm, double tol = kFidelityTolerance);

/// Same bookkeeping for an already computed output state.
RunReport report_from_state(const PhotonState &out, const InputQubit &q, double tol = kFidelityTolerance);

struct MonteCarloInput {
    InputQubit input;
    SchemeKind scheme = SchemeKind::two_channel;
    NoiseSpec noise;
    PmMode pm_mode;
    uint64_t trials = 1;
    Seed seed;
    double fidelity_tolerance = kFidelityTolerance;
    unsigned threads = 1;  // affects wall time only
};

struct TrialSummary {
    uint64_t trial = 0;
    double success_probability = 0.0;
    double min_fidelity = 1.0;
    double mean_fidelity = 1.0;  // probability-weighted over branches
    double probability_sum = 0.0;
};

struct MonteCarloStats {
    uint64_t trials = 0;
    Seed seed;
    double mean_fidelity = 0.0;
    double min_fidelity = 1.0;
    double mean_success_probability = 0.0;
    double min_success_probability = 1.0;
    double max_probability_defect = 0.0;  // max |sum of branch probabilities - 1|
    std::map<std::string, double> branch_probability_means;
    std::vector<TrialSummary> per_trial;
};

struct TrialResult {
    TrialSummary summary;
    std::vector<std::pair<std::string, double>> branch_probabilities;
};

TrialResult summarize_trial(uint64_t trial, const std::vector<BranchOutcome> &branches, double tol);

/// Trials are independent and keyed by index; aggregation runs sequentially in
/// trial order, so results do not depend on `threads`. Throws ConfigError
/// before running anything if the input is invalid.
MonteCarloStats monte_carlo(const MonteCarloInput &in);

/// Folds per-trial results in index order. Exposed for the chunked-vs-sequential check.
MonteCarloStats aggregate(const std::vector<TrialResult> &trials, Seed seed);

}  // namespace fqt
