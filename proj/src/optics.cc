#include "fqt/optics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "fqt/errors.h"

namespace fqt {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    return r < 0 ? r + kTwoPi : r;
}

Polarization flip(Polarization p) {
    return p == Polarization::H ? Polarization::V : Polarization::H;
}

ModeKet moved(const ModeKet &k, const PathLabel &path) {
    return ModeKet{k.pol, k.freq, path, k.bin};
}

void require_distinct(const std::vector<PathLabel> &paths, const std::string &what) {
    std::set<PathLabel> seen;
    for (const auto &p : paths) {
        if (p.name.empty()) {
            throw WiringError(what + ": empty path label");
        }
        if (!seen.insert(p).second) {
            throw WiringError(what + ": path '" + p.name + "' bound to more than one port");
        }
    }
}

/// Output ports that are not also inputs must be empty when the element fires.
void require_free_outputs(const Element &e, const PhotonState &s) {
    auto ins = input_paths(e);
    for (const auto &out : output_paths(e)) {
        if (std::find(ins.begin(), ins.end(), out) != ins.end()) {
            continue;
        }
        for (const auto &[k, a] : s) {
            if (k.path == out) {
                throw WiringError(describe(e) + ": output path '" + out.name + "' already carries amplitude");
            }
        }
    }
}

}  // namespace

double PmSchedule::phase_for(TimeBin bin) const {
    auto it = per_bin.find(bin);
    return it == per_bin.end() ? default_phase : it->second;
}

bool PmSchedule::equivalent(const PmSchedule &other, double tol) const {
    auto same = [tol](double x, double y) {
        double d = wrap_phase(x - y);
        return d < tol || kTwoPi - d < tol;
    };
    if (!same(default_phase, other.default_phase)) {
        return false;
    }
    for (const auto &[bin, phi] : per_bin) {
        if (!same(phi, other.phase_for(bin))) {
            return false;
        }
    }
    for (const auto &[bin, phi] : other.per_bin) {
        if (!same(phi, phase_for(bin))) {
            return false;
        }
    }
    return true;
}

std::string kind_name(const Element &e) {
    return std::visit(overloaded{
                          [](const Pbs &) { return "PBS"; },
                          [](const BeamSplitter &) { return "BS"; },
                          [](const HalfWavePlate &) { return "HWP"; },
                          [](const FrequencyShifter &) { return "FS"; },
                          [](const Wdm &) { return "WDM"; },
                          [](const PhaseModulator &) { return "PM"; },
                          [](const Delay &) { return "Delay"; },
                      },
                      e);
}

std::string describe(const Element &e) {
    std::ostringstream out;
    out << kind_name(e) << "(";
    std::visit(overloaded{
                   [&](const Pbs &x) {
                       out << x.in1.name;
                       if (x.in2) {
                           out << "+" << x.in2->name;
                       }
                       out << " -> T:" << x.transmit.name << " R:" << x.reflect.name;
                   },
                   [&](const BeamSplitter &x) {
                       out << x.in1.name << "," << x.in2.name << " -> " << x.out_a.name << "," << x.out_b.name;
                   },
                   [&](const HalfWavePlate &x) { out << x.path.name; },
                   [&](const FrequencyShifter &x) {
                       out << x.path.name << ": " << to_string(x.from) << "->" << to_string(x.to);
                   },
                   [&](const Wdm &x) {
                       out << x.in.name << " ->";
                       for (const auto &[f, p] : x.routes) {
                           out << " " << to_string(f) << ":" << p.name;
                       }
                   },
                   [&](const PhaseModulator &x) {
                       out << x.path.name << ": " << x.schedule.default_phase;
                       for (const auto &[b, phi] : x.schedule.per_bin) {
                           out << " t" << b.index << "=" << phi;
                       }
                   },
                   [&](const Delay &x) { out << x.path.name << ": +" << x.bins; },
               },
               e);
    out << ")";
    return out.str();
}

std::vector<PathLabel> input_paths(const Element &e) {
    return std::visit(overloaded{
                          [](const Pbs &x) {
                              std::vector<PathLabel> v{x.in1};
                              if (x.in2) {
                                  v.push_back(*x.in2);
                              }
                              return v;
                          },
                          [](const BeamSplitter &x) { return std::vector<PathLabel>{x.in1, x.in2}; },
                          [](const HalfWavePlate &x) { return std::vector<PathLabel>{x.path}; },
                          [](const FrequencyShifter &x) { return std::vector<PathLabel>{x.path}; },
                          [](const Wdm &x) { return std::vector<PathLabel>{x.in}; },
                          [](const PhaseModulator &x) { return std::vector<PathLabel>{x.path}; },
                          [](const Delay &x) { return std::vector<PathLabel>{x.path}; },
                      },
                      e);
}

std::vector<PathLabel> output_paths(const Element &e) {
    return std::visit(overloaded{
                          [](const Pbs &x) { return std::vector<PathLabel>{x.transmit, x.reflect}; },
                          [](const BeamSplitter &x) { return std::vector<PathLabel>{x.out_a, x.out_b}; },
                          [](const HalfWavePlate &x) { return std::vector<PathLabel>{x.path}; },
                          [](const FrequencyShifter &x) { return std::vector<PathLabel>{x.path}; },
                          [](const Wdm &x) {
                              std::vector<PathLabel> v;
                              for (const auto &[f, p] : x.routes) {
                                  if (std::find(v.begin(), v.end(), p) == v.end()) {
                                      v.push_back(p);
                                  }
                              }
                              return v;
                          },
                          [](const PhaseModulator &x) { return std::vector<PathLabel>{x.path}; },
                          [](const Delay &x) { return std::vector<PathLabel>{x.path}; },
                      },
                      e);
}

void validate(const Element &e) {
    auto what = describe(e);
    std::visit(overloaded{
                   [&](const Pbs &x) {
                       std::vector<PathLabel> ports{x.in1, x.transmit, x.reflect};
                       if (x.in2) {
                           ports.push_back(*x.in2);
                       }
                       require_distinct(ports, what);
                   },
                   [&](const BeamSplitter &x) { require_distinct({x.in1, x.in2, x.out_a, x.out_b}, what); },
                   [&](const HalfWavePlate &x) { require_distinct({x.path}, what); },
                   [&](const FrequencyShifter &x) {
                       require_distinct({x.path}, what);
                       if (x.from == x.to) {
                           throw WiringError(what + ": source and target frequency coincide");
                       }
                   },
                   [&](const Wdm &x) {
                       if (x.routes.empty()) {
                           throw WiringError(what + ": no frequency routes");
                       }
                       std::vector<PathLabel> ports{x.in};
                       for (const auto &[f, p] : x.routes) {
                           ports.push_back(p);
                       }
                       require_distinct(ports, what);
                   },
                   [&](const PhaseModulator &x) { require_distinct({x.path}, what); },
                   [&](const Delay &x) {
                       require_distinct({x.path}, what);
                       if (x.bins < 1) {
                           throw WiringError(what + ": delay must be at least one bin");
                       }
                   },
               },
               e);
}

PhotonState apply_pbs(const Pbs &e, const PhotonState &s) {
    validate(e);
    require_free_outputs(e, s);
    StateBuilder b;
    for (const auto &[k, a] : s) {
        if (k.path == e.in1) {
            b.add(moved(k, k.pol == Polarization::H ? e.transmit : e.reflect), a);
        } else if (e.in2 && k.path == *e.in2) {
            b.add(moved(k, k.pol == Polarization::H ? e.reflect : e.transmit), a);
        } else {
            b.add(k, a);
        }
    }
    return std::move(b).build();
}

PhotonState apply_bs(const BeamSplitter &e, const PhotonState &s) {
    validate(e);
    require_free_outputs(e, s);
    const double r = 1.0 / std::numbers::sqrt2;
    const Amplitude t{r, 0.0};
    const Amplitude ir{0.0, r};
    StateBuilder b;
    for (const auto &[k, a] : s) {
        if (k.path == e.in1) {
            b.add(moved(k, e.out_a), a * t);
            b.add(moved(k, e.out_b), a * ir);
        } else if (k.path == e.in2) {
            b.add(moved(k, e.out_a), a * ir);
            b.add(moved(k, e.out_b), a * t);
        } else {
            b.add(k, a);
        }
    }
    return std::move(b).build();
}

PhotonState apply_hwp(const HalfWavePlate &e, const PhotonState &s) {
    validate(e);
    StateBuilder b;
    for (const auto &[k, a] : s) {
        if (k.path == e.path) {
            b.add(ModeKet{flip(k.pol), k.freq, k.path, k.bin}, a);
        } else {
            b.add(k, a);
        }
    }
    return std::move(b).build();
}

PhotonState apply_fs(const FrequencyShifter &e, const PhotonState &s, std::vector<std::string> *notes) {
    validate(e);
    StateBuilder b;
    for (const auto &[k, a] : s) {
        if (k.path == e.path && k.freq == e.from) {
            ModeKet target{k.pol, e.to, k.path, k.bin};
            if (b.add(target, a) && notes != nullptr) {
                notes->push_back("frequency collision at " + to_string(target));
            }
        } else if (b.add(k, a) && notes != nullptr) {
            notes->push_back("frequency collision at " + to_string(k));
        }
    }
    return std::move(b).build();
}

PhotonState apply_wdm(const Wdm &e, const PhotonState &s) {
    validate(e);
    require_free_outputs(e, s);
    StateBuilder b;
    for (const auto &[k, a] : s) {
        if (k.path != e.in) {
            b.add(k, a);
            continue;
        }
        auto route = e.routes.find(k.freq);
        if (route == e.routes.end()) {
            throw RoutingError(describe(e) + ": no route for " + to_string(k.freq));
        }
        b.add(moved(k, route->second), a);
    }
    return std::move(b).build();
}

PhotonState apply_pm(const PhaseModulator &e, const PhotonState &s) {
    validate(e);
    StateBuilder b;
    for (const auto &[k, a] : s) {
        if (k.path == e.path) {
            b.add(k, a * std::polar(1.0, e.schedule.phase_for(k.bin)));
        } else {
            b.add(k, a);
        }
    }
    return std::move(b).build();
}

PhotonState apply_delay(const Delay &e, const PhotonState &s) {
    validate(e);
    StateBuilder b;
    for (const auto &[k, a] : s) {
        if (k.path == e.path) {
            b.add(ModeKet{k.pol, k.freq, k.path, TimeBin{k.bin.index + e.bins}}, a);
        } else {
            b.add(k, a);
        }
    }
    return std::move(b).build();
}

PhotonState apply(const Element &e, const PhotonState &s, Trace *trace) {
    std::vector<std::string> notes;
    PhotonState out = std::visit(overloaded{
                                     [&](const Pbs &x) { return apply_pbs(x, s); },
                                     [&](const BeamSplitter &x) { return apply_bs(x, s); },
                                     [&](const HalfWavePlate &x) { return apply_hwp(x, s); },
                                     [&](const FrequencyShifter &x) { return apply_fs(x, s, &notes); },
                                     [&](const Wdm &x) { return apply_wdm(x, s); },
                                     [&](const PhaseModulator &x) { return apply_pm(x, s); },
                                     [&](const Delay &x) { return apply_delay(x, s); },
                                 },
                                 e);
    if (trace != nullptr) {
        trace->steps.push_back(Trace::Step{describe(e), out, std::move(notes)});
    }
    return out;
}

double element_unitary_defect(const Element &e, const std::vector<ModeKet> &basis) {
    if (basis.empty()) {
        throw DimensionError("empty basis");
    }
    std::set<ModeKet> unique_basis(basis.begin(), basis.end());
    if (unique_basis.size() != basis.size()) {
        throw DimensionError("basis contains duplicate kets");
    }

    std::vector<PhotonState> images;
    std::set<ModeKet> image_kets;
    images.reserve(basis.size());
    for (const auto &k : basis) {
        // Amplitudes of a single basis ket never collide at the output, so the
        // image is the column of the matrix.
        images.push_back(fqt::apply(e, PhotonState{{k, Amplitude{1.0, 0.0}}}));
        for (const auto &[out, a] : images.back()) {
            image_kets.insert(out);
        }
    }
    if (image_kets.size() != basis.size()) {
        throw DimensionError("basis of size " + std::to_string(basis.size()) + " maps onto " +
                             std::to_string(image_kets.size()) + " kets; not closed under " + describe(e));
    }

    std::vector<ModeKet> rows(image_kets.begin(), image_kets.end());
    size_t n = basis.size();
    std::vector<std::vector<Amplitude>> m(n, std::vector<Amplitude>(n));
    for (size_t col = 0; col < n; col++) {
        for (size_t row = 0; row < n; row++) {
            m[row][col] = images[col].amplitude(rows[row]);
        }
    }

    double defect = 0;
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            Amplitude g{};
            for (size_t r = 0; r < n; r++) {
                g += std::conj(m[r][i]) * m[r][j];
            }
            if (i == j) {
                g -= 1.0;
            }
            defect = std::max(defect, std::abs(g));
        }
    }
    return defect;
}

std::vector<ModeKet> input_basis(const Element &e, const std::vector<Frequency> &freqs,
                                 const std::vector<TimeBin> &bins) {
    std::vector<Frequency> fs = freqs;
    if (const auto *shifter = std::get_if<FrequencyShifter>(&e)) {
        fs = {shifter->from};
    } else if (const auto *wdm = std::get_if<Wdm>(&e)) {
        fs.clear();
        for (const auto &[f, p] : wdm->routes) {
            fs.push_back(f);
        }
    }
    std::vector<ModeKet> out;
    for (const auto &path : input_paths(e)) {
        for (auto bin : bins) {
            for (auto f : fs) {
                for (auto pol : {Polarization::H, Polarization::V}) {
                    out.push_back(ModeKet{pol, f, path, bin});
                }
            }
        }
    }
    return out;
}

}  // namespace fqt
