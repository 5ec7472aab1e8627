#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fqt/config.h"
#include "fqt/verify.h"

namespace fqt {

/// Stable exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitVerification = 2,
};

/// Output bytes for each command. These are pure functions of the config.
std::string render_transmit(const ExperimentConfig &cfg);
std::string render_montecarlo(const ExperimentConfig &cfg, unsigned threads = 1);
std::string render_qkd(const ExperimentConfig &cfg);
std::string render_verify(const std::vector<VerifyRow> &rows, OutputFormat format);
/// Fixed-width table for the terminal.
std::string verify_table(const std::vector<VerifyRow> &rows);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace fqt
