#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fqt/state_space.h"

namespace fqt {

/// Phase applied by a modulator, possibly depending on the arrival slot.
struct PmSchedule {
    double default_phase = 0.0;
    std::map<TimeBin, double> per_bin;

    double phase_for(TimeBin bin) const;
    /// Compares phases modulo 2*pi.
    bool equivalent(const PmSchedule &other, double tol = 1e-12) const;
    bool operator==(const PmSchedule &) const = default;
};

/// Polarizing beam splitter. H entering on `in1` is transmitted to `transmit`,
/// V is reflected to `reflect`. The optional second input sees the mirrored
/// rule (H to `reflect`, V to `transmit`), which is the merge orientation.
/// No reflection phase.
struct Pbs {
    PathLabel in1;
    std::optional<PathLabel> in2;
    PathLabel transmit;
    PathLabel reflect;
    bool operator==(const Pbs &) const = default;
};

/// Symmetric 50/50 splitter with factor i on reflection:
/// in1 -> (out_a + i out_b)/sqrt2, in2 -> (i out_a + out_b)/sqrt2.
struct BeamSplitter {
    PathLabel in1;
    PathLabel in2;
    PathLabel out_a;
    PathLabel out_b;
    bool operator==(const BeamSplitter &) const = default;
};

/// Bit flip H <-> V on one path.
struct HalfWavePlate {
    PathLabel path;
    bool operator==(const HalfWavePlate &) const = default;
};

/// Ideal relabeling of one frequency to another on one path.
struct FrequencyShifter {
    PathLabel path;
    Frequency from;
    Frequency to;
    bool operator==(const FrequencyShifter &) const = default;
};

/// Polarization-independent frequency router.
struct Wdm {
    PathLabel in;
    std::map<Frequency, PathLabel> routes;
    bool operator==(const Wdm &) const = default;
};

struct PhaseModulator {
    PathLabel path;
    PmSchedule schedule;
    bool operator==(const PhaseModulator &) const = default;
};

struct Delay {
    PathLabel path;
    uint32_t bins = 1;
    bool operator==(const Delay &) const = default;
};

using Element = std::variant<Pbs, BeamSplitter, HalfWavePlate, FrequencyShifter, Wdm, PhaseModulator, Delay>;

std::string kind_name(const Element &e);
std::string describe(const Element &e);

/// Paths an element reads from and writes to. In-place elements list the same
/// path in both.
std::vector<PathLabel> input_paths(const Element &e);
std::vector<PathLabel> output_paths(const Element &e);

/// Throws WiringError when port bindings are not distinct, or an element is
/// otherwise malformed (zero delay, FS with from == to, empty WDM map).
void validate(const Element &e);

/// Optional sink for diagnostics raised while applying elements.
struct Trace {
    struct Step {
        std::string element;
        PhotonState state;
        std::vector<std::string> notes;
    };
    std::vector<Step> steps;
};

PhotonState apply_pbs(const Pbs &e, const PhotonState &s);
PhotonState apply_bs(const BeamSplitter &e, const PhotonState &s);
PhotonState apply_hwp(const HalfWavePlate &e, const PhotonState &s);
PhotonState apply_fs(const FrequencyShifter &e, const PhotonState &s, std::vector<std::string> *notes = nullptr);
PhotonState apply_wdm(const Wdm &e, const PhotonState &s);
PhotonState apply_pm(const PhaseModulator &e, const PhotonState &s);
PhotonState apply_delay(const Delay &e, const PhotonState &s);

/// Dispatches on the element kind. When `trace` is set, records the output
/// state and any collision notes.
PhotonState apply(const Element &e, const PhotonState &s, Trace *trace = nullptr);

/// Builds the matrix of `e` from `basis` (columns) onto the sorted set of image
/// kets (rows) and returns max |M^dagger M - I| entrywise. Throws DimensionError
/// when the image set is not the same size as the basis.
double element_unitary_defect(const Element &e, const std::vector<ModeKet> &basis);

/// Every ket on the element's input paths for the given polarizations,
/// frequencies and bins. Convenience for unitarity checks.
std::vector<ModeKet> input_basis(const Element &e, const std::vector<Frequency> &freqs,
                                 const std::vector<TimeBin> &bins);

}  // namespace fqt
