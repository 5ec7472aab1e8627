#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqt/state_space.h"

namespace fqt {

/// Hand-transcribed amplitude maps of the scheme's intermediate and final
/// states. These are independent of the element engine and serve as the
/// oracle the simulated pipelines are checked against.
enum class ReferenceState {
    two_channel_encoded,     // encoder output on channels a and b
    channel_a_noisy,         // channel a after H -> delta H + eta V
    channel_a_decoded,       // decoder output for channel a, ports c/d
    channel_b_decoded,       // decoder output for channel b, ports c/d, overall factor i
    single_channel_encoded,  // unbalanced-interferometer encoder output, bins 0/1
    single_channel_decoded,  // four branches over ports c/d and bins 0/1
};

std::string to_string(ReferenceState r);
ReferenceState parse_reference_state(const std::string &text);
std::vector<ReferenceState> all_reference_states();

/// Symbol values. delta_b/eta_b are the channel-b noise parameters; delta1/eta1
/// act on H in bin 1, delta2/eta2 are the image of V in bin 0.
struct Symbols {
    std::optional<Amplitude> alpha, beta;
    std::optional<Amplitude> delta, eta;
    std::optional<Amplitude> delta_b, eta_b;
    std::optional<Amplitude> delta1, eta1, delta2, eta2;
};

/// Throws ValidationError naming the first missing symbol.
PhotonState closed_form(ReferenceState which, const Symbols &sym);

}  // namespace fqt
