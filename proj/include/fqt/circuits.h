#pragma once

#include <string>
#include <vector>

#include "fqt/noise.h"
#include "fqt/optics.h"
#include "fqt/state_space.h"

namespace fqt {

inline const PathLabel kInputPath{"in"};
inline const PathLabel kChannelA{"a"};
inline const PathLabel kChannelB{"b"};
inline const PathLabel kSingleChannel{"ch"};

inline constexpr double kDecoderPhase = -1.5707963267948966;  // -pi/2
inline constexpr double kLatePacketPhase = kDecoderPhase;      // port-a packet, arrives in bin 1
inline constexpr double kEarlyPacketPhase = -kDecoderPhase;    // port-b packet, arrives in bin 0

/// An ordered list of elements with declared input and output paths.
struct Circuit {
    std::string name;
    std::vector<Element> elements;
    std::vector<PathLabel> inputs;
    std::vector<PathLabel> outputs;

    /// Throws WiringError unless every element consumes only paths that are
    /// circuit inputs or were produced earlier, and every declared output
    /// exists at the end.
    void validate() const;

    /// Applies the elements in order. Amplitude on paths the circuit does not
    /// touch passes through; amplitude already sitting on an internal path is
    /// a WiringError.
    PhotonState run(const PhotonState &s, Trace *trace = nullptr) const;

    bool operator==(const Circuit &) const = default;
};

struct DecoderPorts {
    PathLabel c{"c"};
    PathLabel d{"d"};
};

/// PBS split, FS(omega2 -> omega1) on path 1, HWP on path 2, BS onto a/b.
Circuit two_channel_encoder_circuit();
/// WDM by frequency, FS(omega1 -> omega2) on path 1, HWP + PM on path 2,
/// merge PBS (transmit side d, reflect side c), HWP on c.
Circuit decoder_circuit(const PathLabel &channel, const PmSchedule &pm, const DecoderPorts &ports = {});
/// The encoder with an unbalanced interferometer: BS port a is delayed one
/// bin, port b is flipped to V, and both merge onto one channel at a PBS.
Circuit single_channel_encoder_circuit();

/// "two-channel-encoder", "two-channel-decoder" (channel a, PM -pi/2) or
/// "single-channel-encoder".
Circuit builtin_circuit(const std::string &name);
std::vector<std::string> builtin_circuit_names();

enum class SchemeKind { two_channel, single_channel };

std::string to_string(SchemeKind k);
SchemeKind parse_scheme(const std::string &text);
std::vector<PathLabel> scheme_channels(SchemeKind k);
std::vector<TimeBin> scheme_bins(SchemeKind k);

/// How the decoder phase modulator is driven. Static applies one phase
/// everywhere. Gated matches the phase to the packet: -pi/2 for the port-a
/// packet (channel a, or bin 1) and +pi/2 for the port-b packet (channel b,
/// or bin 0).
struct PmMode {
    bool time_gated = true;
    double static_phase = kDecoderPhase;

    static PmMode gated() { return PmMode{true, kDecoderPhase}; }
    static PmMode fixed(double phase) { return PmMode{false, phase}; }
    bool operator==(const PmMode &) const = default;
};

std::string describe(const PmMode &m);

/// The schedule the decoder on `channel` uses under `mode`.
PmSchedule decoder_schedule(SchemeKind scheme, const PmMode &mode, const PathLabel &channel);

/// Ports of the decoder on `channel` within a scheme: c/d for the single
/// channel, c_a/d_a and c_b/d_b for two channels.
DecoderPorts scheme_ports(SchemeKind scheme, const PathLabel &channel);

PhotonState encode_two_channel(const PhotonState &s);
PhotonState decode(const PhotonState &s, const PathLabel &channel, const PmSchedule &pm,
                   const DecoderPorts &ports = {});
PhotonState encode_single_channel(const PhotonState &s);

/// prepare -> encode -> noise -> decode.
PhotonState run_scheme(const InputQubit &q, SchemeKind scheme, const NoiseModel &m, const PmMode &pm);

}  // namespace fqt
