#include "fqt/circuits.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "fqt/errors.h"

namespace fqt {

namespace {

bool contains(const std::vector<PathLabel> &v, const PathLabel &p) {
    return std::find(v.begin(), v.end(), p) != v.end();
}

void require_encoder_input(const PhotonState &s) {
    if (s.empty()) {
        throw ValidationError("encoder input is empty");
    }
    for (const auto &[k, a] : s) {
        if (k.path != kInputPath || k.freq != kOmega2 || k.bin != TimeBin{0}) {
            throw ValidationError("encoder input must be prepared at omega2 on path '" + kInputPath.name +
                                  "', found " + to_string(k));
        }
    }
}

/// Encoder front end shared by both schemes; BS outputs go to `out_a`/`out_b`.
std::vector<Element> encoder_front(const PathLabel &out_a, const PathLabel &out_b) {
    return {
        Pbs{kInputPath, std::nullopt, "1", "2"},
        FrequencyShifter{"1", kOmega2, kOmega1},
        HalfWavePlate{"2"},
        BeamSplitter{"1", "2", out_a, out_b},
    };
}

}  // namespace

void Circuit::validate() const {
    std::set<PathLabel> available(inputs.begin(), inputs.end());
    if (available.size() != inputs.size()) {
        throw WiringError(name + ": duplicate circuit input");
    }
    for (const auto &e : elements) {
        fqt::validate(e);
        auto ins = input_paths(e);
        auto outs = output_paths(e);
        for (const auto &p : ins) {
            if (!available.contains(p)) {
                throw WiringError(name + ": " + describe(e) + " consumes path '" + p.name +
                                  "' before it is produced");
            }
        }
        for (const auto &p : ins) {
            if (!contains(outs, p)) {
                available.erase(p);
            }
        }
        for (const auto &p : outs) {
            if (!contains(ins, p) && available.contains(p)) {
                throw WiringError(name + ": " + describe(e) + " writes onto live path '" + p.name + "'");
            }
            available.insert(p);
        }
    }
    for (const auto &p : outputs) {
        if (!available.contains(p)) {
            throw WiringError(name + ": declared output '" + p.name + "' is never produced");
        }
    }
}

PhotonState Circuit::run(const PhotonState &s, Trace *trace) const {
    validate();
    std::set<PathLabel> internal;
    for (const auto &e : elements) {
        for (const auto &p : input_paths(e)) {
            internal.insert(p);
        }
        for (const auto &p : output_paths(e)) {
            internal.insert(p);
        }
    }
    for (const auto &p : inputs) {
        internal.erase(p);
    }
    for (const auto &[k, a] : s) {
        if (internal.contains(k.path)) {
            throw WiringError(name + ": input state already has amplitude on internal path '" + k.path.name + "'");
        }
    }
    PhotonState out = s;
    for (const auto &e : elements) {
        out = fqt::apply(e, out, trace);
    }
    return out;
}

Circuit two_channel_encoder_circuit() {
    Circuit c;
    c.name = "two-channel-encoder";
    c.elements = encoder_front(kChannelA, kChannelB);
    c.inputs = {kInputPath};
    c.outputs = {kChannelA, kChannelB};
    return c;
}

Circuit decoder_circuit(const PathLabel &channel, const PmSchedule &pm, const DecoderPorts &ports) {
    PathLabel p1{channel.name + ".1"};
    PathLabel p2{channel.name + ".2"};
    Circuit c;
    c.name = "two-channel-decoder";
    c.elements = {
        Wdm{channel, {{kOmega1, p1}, {kOmega2, p2}}},
        FrequencyShifter{p1, kOmega1, kOmega2},
        HalfWavePlate{p2},
        PhaseModulator{p2, pm},
        Pbs{p1, p2, ports.d, ports.c},
        HalfWavePlate{ports.c},
    };
    c.inputs = {channel};
    c.outputs = {ports.c, ports.d};
    return c;
}

Circuit single_channel_encoder_circuit() {
    Circuit c;
    c.name = "single-channel-encoder";
    c.elements = encoder_front("3", "4");
    c.elements.push_back(Delay{"3", 1});
    c.elements.push_back(HalfWavePlate{"4"});
    c.elements.push_back(Pbs{"3", PathLabel{"4"}, kSingleChannel, PathLabel{kSingleChannel.name + ".idle"}});
    c.inputs = {kInputPath};
    c.outputs = {kSingleChannel};
    return c;
}

std::vector<std::string> builtin_circuit_names() {
    return {"two-channel-encoder", "two-channel-decoder", "single-channel-encoder"};
}

Circuit builtin_circuit(const std::string &name) {
    if (name == "two-channel-encoder") {
        return two_channel_encoder_circuit();
    }
    if (name == "two-channel-decoder") {
        return decoder_circuit(kChannelA, PmSchedule{kDecoderPhase, {}});
    }
    if (name == "single-channel-encoder") {
        return single_channel_encoder_circuit();
    }
    throw ConfigError("unknown built-in circuit '" + name + "'");
}

std::string to_string(SchemeKind k) {
    return k == SchemeKind::two_channel ? "two_channel" : "single_channel";
}

SchemeKind parse_scheme(const std::string &text) {
    if (text == "two_channel") {
        return SchemeKind::two_channel;
    }
    if (text == "single_channel") {
        return SchemeKind::single_channel;
    }
    throw ConfigError("unknown scheme '" + text + "'");
}

std::vector<PathLabel> scheme_channels(SchemeKind k) {
    if (k == SchemeKind::two_channel) {
        return {kChannelA, kChannelB};
    }
    return {kSingleChannel};
}

std::vector<TimeBin> scheme_bins(SchemeKind k) {
    if (k == SchemeKind::two_channel) {
        return {TimeBin{0}};
    }
    return {TimeBin{0}, TimeBin{1}};
}

std::string describe(const PmMode &m) {
    if (m.time_gated) {
        return "time_gated";
    }
    std::ostringstream out;
    out.precision(17);
    out << "static(" << m.static_phase << ")";
    return out.str();
}

PmSchedule decoder_schedule(SchemeKind scheme, const PmMode &mode, const PathLabel &channel) {
    if (!mode.time_gated) {
        return PmSchedule{mode.static_phase, {}};
    }
    if (scheme == SchemeKind::single_channel) {
        return PmSchedule{kLatePacketPhase, {{TimeBin{0}, kEarlyPacketPhase}, {TimeBin{1}, kLatePacketPhase}}};
    }
    return PmSchedule{channel == kChannelB ? kEarlyPacketPhase : kLatePacketPhase, {}};
}

DecoderPorts scheme_ports(SchemeKind scheme, const PathLabel &channel) {
    if (scheme == SchemeKind::single_channel) {
        return DecoderPorts{};
    }
    return DecoderPorts{PathLabel{"c_" + channel.name}, PathLabel{"d_" + channel.name}};
}

PhotonState encode_two_channel(const PhotonState &s) {
    require_encoder_input(s);
    return two_channel_encoder_circuit().run(s);
}

PhotonState decode(const PhotonState &s, const PathLabel &channel, const PmSchedule &pm, const DecoderPorts &ports) {
    return decoder_circuit(channel, pm, ports).run(s);
}

PhotonState encode_single_channel(const PhotonState &s) {
    require_encoder_input(s);
    return single_channel_encoder_circuit().run(s);
}

PhotonState run_scheme(const InputQubit &q, SchemeKind scheme, const NoiseModel &m, const PmMode &pm) {
    PhotonState s = prepare_input(q, kOmega2, kInputPath);
    s = scheme == SchemeKind::two_channel ? encode_two_channel(s) : encode_single_channel(s);
    for (const auto &channel : scheme_channels(scheme)) {
        s = apply_noise(m, s, channel);
    }
    for (const auto &channel : scheme_channels(scheme)) {
        s = decode(s, channel, decoder_schedule(scheme, pm, channel), scheme_ports(scheme, channel));
    }
    return s;
}

}  // namespace fqt
