#pragma once

#include <set>
#include <string>

#include "json.hpp"

#include "fqt/analysis.h"
#include "fqt/circuits.h"
#include "fqt/noise.h"
#include "fqt/optics.h"
#include "fqt/qkd.h"
#include "fqt/state_space.h"

namespace fqt {

using Json = nlohmann::ordered_json;

/// Strict view over a JSON object: every key must be consumed, and errors
/// carry the dotted field path.
class ObjectReader {
   public:
    ObjectReader(const Json &j, std::string where);

    const Json &required(const std::string &key);
    const Json *optional(const std::string &key);
    /// Throws ConfigError on keys that were never read.
    void finish() const;

    std::string field(const std::string &key) const;
    const std::string &where() const { return where_; }

   private:
    const Json &j_;
    std::string where_;
    std::set<std::string> seen_;
};

[[noreturn]] void config_fail(const std::string &field, const std::string &message);

std::string read_string(const Json &j, const std::string &field);
double read_double(const Json &j, const std::string &field);
uint64_t read_u64(const Json &j, const std::string &field);
bool read_bool(const Json &j, const std::string &field);
/// [re, im] pair or a bare real number.
Amplitude read_complex(const Json &j, const std::string &field);
Json complex_to_json(Amplitude a);

/// One record per ket in ModeKet order: pol, freq, path, timebin, re, im.
Json state_to_json(const PhotonState &s);
PhotonState state_from_json(const Json &j, const std::string &where = "state");
std::string state_to_csv(const PhotonState &s);

Json pm_schedule_to_json(const PmSchedule &s);
PmSchedule pm_schedule_from_json(const Json &j, const std::string &where);

Json element_to_json(const Element &e);
Element element_from_json(const Json &j, const std::string &where = "element");

Json circuit_to_json(const Circuit &c);
Circuit circuit_from_json(const Json &j, const std::string &where = "circuit");

Json noise_spec_to_json(const NoiseSpec &n);
NoiseSpec noise_spec_from_json(const Json &j, const std::string &where = "noise");

Json unitary_to_json(const PolarizationUnitary &u);
Json noise_model_to_json(const NoiseModel &m);

Json pm_mode_to_json(const PmMode &m);
PmMode pm_mode_from_json(const Json &j, const std::string &where = "pm_mode");

Json qubit_to_json(const InputQubit &q);

Json branch_to_json(const BranchOutcome &b, double tol);
Json run_report_to_json(const RunReport &r);
Json monte_carlo_to_json(const MonteCarloStats &s);
Json qkd_report_to_json(const QkdReport &r);

/// Shortest round-trip decimal form of a double.
std::string format_number(double x);

}  // namespace fqt
