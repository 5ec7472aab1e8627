#include "fqt/analysis.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "fqt/errors.h"

namespace fqt {

namespace {

const PathLabel kComparePath{"ref"};

}  // namespace

std::string BranchOutcome::key() const {
    return port.name + "@" + std::to_string(bin.index);
}

Decomposition decompose_detailed(const PhotonState &s, const PhotonState &ideal) {
    Decomposition out;
    double total = s.norm_squared();
    if (total <= 0) {
        return out;
    }
    PhotonState ideal_here = relocate(ideal, kComparePath, TimeBin{0});

    auto it = s.begin();
    while (it != s.end()) {
        // Kets are ordered by (path, bin, ...), so each branch is a contiguous run.
        const PathLabel port = it->first.path;
        const TimeBin bin = it->first.bin;
        PhotonState::Map group;
        while (it != s.end() && it->first.path == port && it->first.bin == bin) {
            group.emplace_hint(group.end(), it->first, it->second);
            ++it;
        }
        PhotonState sub(std::move(group));
        double p = sub.norm_squared() / total;
        if (sub.empty() || p < kMinBranchProbability) {
            out.dropped_branches++;
            out.dropped_probability += p;
            continue;
        }
        BranchOutcome b;
        b.port = port;
        b.bin = bin;
        b.probability = p;
        b.conditional_state = sub.normalized();
        b.fidelity = fidelity(relocate(b.conditional_state, kComparePath, TimeBin{0}), ideal_here);
        out.branches.push_back(std::move(b));
    }
    return out;
}

std::vector<BranchOutcome> decompose(const PhotonState &s, const PhotonState &ideal) {
    return decompose_detailed(s, ideal).branches;
}

double success_probability(const std::vector<BranchOutcome> &branches, double tol) {
    double total = 0;
    for (const auto &b : branches) {
        if (b.fidelity >= 1.0 - tol) {
            total += b.probability;
        }
    }
    return total;
}

RunReport report_from_state(const PhotonState &out, const InputQubit &q, double tol) {
    RunReport r;
    r.input = q;
    r.fidelity_tolerance = tol;
    auto d = decompose_detailed(out, prepare_input(q, kOmega2, kInputPath));
    r.branches = std::move(d.branches);
    r.dropped_branches = d.dropped_branches;
    r.success_probability = success_probability(r.branches, tol);
    for (const auto &b : r.branches) {
        r.probability_sum += b.probability;
        r.min_fidelity = std::min(r.min_fidelity, b.fidelity);
    }
    if (d.dropped_branches > 0) {
        r.notes.push_back(std::to_string(d.dropped_branches) + " branch(es) below probability " +
                          std::to_string(kMinBranchProbability) + " omitted");
    }
    return r;
}

RunReport run_report(const InputQubit &q, SchemeKind scheme, const NoiseModel &m, const std::string &noise_description,
                     const PmMode &pm, double tol) {
    RunReport r = report_from_state(run_scheme(q, scheme, m, pm), q, tol);
    r.scheme = scheme;
    r.noise = noise_description;
    r.pm_mode = pm;

    std::vector<std::string> degraded;
    for (const auto &b : r.branches) {
        if (b.fidelity < 1.0 - tol) {
            degraded.push_back(b.key());
        }
    }
    if (!degraded.empty()) {
        std::ostringstream note;
        note << degraded.size() << " degraded branch(es):";
        for (const auto &k : degraded) {
            note << " " << k;
        }
        if (!pm.time_gated) {
            note << ". A static decoder phase cannot serve both packets: the port-a packet (channel a, time-bin 1) "
                    "needs -pi/2 and the port-b packet (channel b, time-bin 0) needs +pi/2. Either phase alone "
                    "leaves the other packet with a relative H/V sign flip; use pm_mode time_gated.";
        }
        r.notes.push_back(note.str());
    }
    return r;
}

TrialResult summarize_trial(uint64_t trial, const std::vector<BranchOutcome> &branches, double tol) {
    TrialResult r;
    r.summary.trial = trial;
    r.summary.success_probability = success_probability(branches, tol);
    double weighted = 0;
    for (const auto &b : branches) {
        r.summary.probability_sum += b.probability;
        r.summary.min_fidelity = std::min(r.summary.min_fidelity, b.fidelity);
        weighted += b.probability * b.fidelity;
        r.branch_probabilities.emplace_back(b.key(), b.probability);
    }
    r.summary.mean_fidelity = r.summary.probability_sum > 0 ? weighted / r.summary.probability_sum : 0.0;
    return r;
}

MonteCarloStats aggregate(const std::vector<TrialResult> &trials, Seed seed) {
    MonteCarloStats st;
    st.trials = trials.size();
    st.seed = seed;
    if (trials.empty()) {
        return st;
    }
    double fid_sum = 0;
    double success_sum = 0;
    std::map<std::string, double> prob_sums;
    for (const auto &t : trials) {
        fid_sum += t.summary.mean_fidelity;
        success_sum += t.summary.success_probability;
        st.min_fidelity = std::min(st.min_fidelity, t.summary.min_fidelity);
        st.min_success_probability = std::min(st.min_success_probability, t.summary.success_probability);
        st.max_probability_defect = std::max(st.max_probability_defect, std::abs(t.summary.probability_sum - 1.0));
        for (const auto &[k, p] : t.branch_probabilities) {
            prob_sums[k] += p;
        }
        st.per_trial.push_back(t.summary);
    }
    double n = static_cast<double>(trials.size());
    st.mean_fidelity = fid_sum / n;
    st.mean_success_probability = success_sum / n;
    for (const auto &[k, p] : prob_sums) {
        st.branch_probability_means[k] = p / n;
    }
    return st;
}

MonteCarloStats monte_carlo(const MonteCarloInput &in) {
    if (in.trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (!(in.fidelity_tolerance > 0 && in.fidelity_tolerance < 1)) {
        throw ConfigError("fidelity tolerance must lie in (0, 1)");
    }
    validate(in.input);
    auto channels = scheme_channels(in.scheme);
    auto bins = scheme_bins(in.scheme);
    {
        auto probe = in.noise.realize(0, in.seed, channels, bins);
        for (const auto &c : channels) {
            for (auto b : bins) {
                probe.resolve(c, b);
            }
        }
    }

    std::vector<TrialResult> results(in.trials);
    auto run_range = [&](uint64_t begin, uint64_t end) {
        for (uint64_t t = begin; t < end; t++) {
            auto model = in.noise.realize(t, in.seed, channels, bins);
            auto out = run_scheme(in.input, in.scheme, model, in.pm_mode);
            auto branches = decompose(out, prepare_input(in.input, kOmega2, kInputPath));
            results[t] = summarize_trial(t, branches, in.fidelity_tolerance);
        }
    };

    unsigned threads = std::max(1u, std::min<unsigned>(in.threads, static_cast<unsigned>(in.trials)));
    if (threads == 1) {
        run_range(0, in.trials);
    } else {
        std::vector<std::exception_ptr> failures(threads);
        {
            std::vector<std::jthread> pool;
            uint64_t chunk = (in.trials + threads - 1) / threads;
            for (unsigned i = 0; i < threads; i++) {
                uint64_t begin = i * chunk;
                uint64_t end = std::min<uint64_t>(in.trials, begin + chunk);
                if (begin < end) {
                    pool.emplace_back([&, i, begin, end] {
                        try {
                            run_range(begin, end);
                        } catch (...) {
                            failures[i] = std::current_exception();
                        }
                    });
                }
            }
        }
        for (const auto &f : failures) {
            if (f) {
                std::rethrow_exception(f);
            }
        }
    }
    return aggregate(results, in.seed);
}

}  // namespace fqt
