#include "fqt/cli.h"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "fqt/errors.h"
#include "fqt/qkd.h"
#include "fqt/serialize.h"

namespace fqt {

namespace {

std::string csv_preamble(const std::string &command, const ExperimentConfig &cfg) {
    return "# command: " + command + "\n# config: " + config_to_json(cfg).dump() + "\n";
}

std::string dump_json(const Json &j) {
    return j.dump(2) + "\n";
}

void emit(const std::string &bytes, const OutputSpec &output, std::ostream &out) {
    if (!output.path) {
        out << bytes;
        return;
    }
    std::ofstream f(*output.path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ConfigError("output.path: cannot write '" + *output.path + "'");
    }
    f << bytes;
    if (!f) {
        throw ConfigError("output.path: write to '" + *output.path + "' failed");
    }
}

struct CommonFlags {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> trials;
    std::optional<std::string> output;
    std::optional<std::string> format;
};

void add_common(CLI::App *cmd, CommonFlags &f, bool with_trials) {
    cmd->add_option("--config", f.config_path, "Experiment config file (JSON)");
    cmd->add_option("--seed", f.seed, "Override the config seed");
    if (with_trials) {
        cmd->add_option("--trials", f.trials, "Override the trial count");
    }
    cmd->add_option("--output", f.output, "Output file (stdout when omitted)");
    cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

ExperimentConfig build_config(const CommonFlags &f) {
    ExperimentConfig cfg = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
    if (f.seed) {
        cfg.seed = Seed{*f.seed};
    }
    if (f.trials) {
        cfg.trials = *f.trials;
    }
    if (f.output) {
        cfg.output.path = *f.output;
    }
    if (f.format) {
        cfg.output.format = *f.format == "csv" ? OutputFormat::csv : OutputFormat::json;
    }
    cfg.validate();
    return cfg;
}

}  // namespace

std::string render_transmit(const ExperimentConfig &cfg_in) {
    ExperimentConfig cfg = cfg_in.resolved();
    cfg.validate();
    InputQubit q = cfg.input.resolve();

    RunReport report;
    PhotonState final_state;
    Json unitaries = Json::array();
    if (cfg.circuit) {
        if (cfg.circuit->inputs.empty()) {
            throw ConfigError("circuit.inputs: a custom circuit needs an input path");
        }
        final_state = cfg.circuit->run(prepare_input(q, kOmega2, cfg.circuit->inputs.front()));
        report = report_from_state(final_state, q, cfg.fidelity_tolerance);
        report.scheme = cfg.scheme;
        report.noise = "none (custom circuit '" + cfg.circuit->name + "')";
        report.pm_mode = cfg.pm_mode;
    } else {
        auto model = cfg.noise.realize(0, cfg.seed, scheme_channels(cfg.scheme), scheme_bins(cfg.scheme));
        unitaries = noise_model_to_json(model);
        final_state = run_scheme(q, cfg.scheme, model, cfg.pm_mode);
        report = run_report(q, cfg.scheme, model, cfg.noise.describe(), cfg.pm_mode, cfg.fidelity_tolerance);
    }

    if (cfg.output.format == OutputFormat::csv) {
        std::ostringstream out;
        out << csv_preamble("transmit", cfg);
        out << "# success_probability: " << format_number(report.success_probability) << "\n";
        out << "# min_fidelity: " << format_number(report.min_fidelity) << "\n";
        for (const auto &n : report.notes) {
            out << "# note: " << n << "\n";
        }
        out << "port,timebin,probability,fidelity,success\n";
        for (const auto &b : report.branches) {
            out << b.port.name << "," << b.bin.index << "," << format_number(b.probability) << ","
                << format_number(b.fidelity) << "," << (b.fidelity >= 1.0 - report.fidelity_tolerance ? 1 : 0)
                << "\n";
        }
        return out.str();
    }
    Json j;
    j["command"] = "transmit";
    j["config"] = config_to_json(cfg);
    j["noise_unitaries"] = std::move(unitaries);
    j["report"] = run_report_to_json(report);
    j["final_state"] = state_to_json(final_state);
    return dump_json(j);
}

std::string render_montecarlo(const ExperimentConfig &cfg_in, unsigned threads) {
    ExperimentConfig cfg = cfg_in.resolved();
    cfg.validate();
    auto stats = monte_carlo(monte_carlo_input(cfg, threads));

    if (cfg.output.format == OutputFormat::csv) {
        std::ostringstream out;
        out << csv_preamble("montecarlo", cfg);
        out << "# mean_fidelity: " << format_number(stats.mean_fidelity) << "\n";
        out << "# min_fidelity: " << format_number(stats.min_fidelity) << "\n";
        out << "# mean_success_probability: " << format_number(stats.mean_success_probability) << "\n";
        out << "# max_probability_defect: " << format_number(stats.max_probability_defect) << "\n";
        out << "trial,success_probability,min_fidelity,mean_fidelity,probability_sum\n";
        for (const auto &t : stats.per_trial) {
            out << t.trial << "," << format_number(t.success_probability) << "," << format_number(t.min_fidelity)
                << "," << format_number(t.mean_fidelity) << "," << format_number(t.probability_sum) << "\n";
        }
        return out.str();
    }
    Json j;
    j["command"] = "montecarlo";
    j["config"] = config_to_json(cfg);
    j["stats"] = monte_carlo_to_json(stats);
    return dump_json(j);
}

std::string render_qkd(const ExperimentConfig &cfg_in) {
    ExperimentConfig cfg = cfg_in.resolved();
    if (!cfg.qkd) {
        cfg.qkd = QkdSpec{};
    }
    cfg.validate();
    auto report = bb84_run(qkd_input(cfg));

    if (cfg.output.format == OutputFormat::csv) {
        std::ostringstream out;
        out << csv_preamble("qkd", cfg);
        out << "# raw_bits: " << report.raw_bits << "\n";
        out << "# protected: " << (report.protected_transmission ? "true" : "false") << "\n";
        out << "basis,sifted,errors,error_rate\n";
        for (auto [name, t] : {std::pair{"X", report.x}, std::pair{"Y", report.y}}) {
            out << name << "," << t.sifted << "," << t.errors << "," << format_number(t.error_rate()) << "\n";
        }
        out << "all," << report.sifted_bits << "," << report.errors << "," << format_number(report.qber) << "\n";
        return out.str();
    }
    Json j;
    j["command"] = "qkd";
    j["config"] = config_to_json(cfg);
    j["report"] = qkd_report_to_json(report);
    return dump_json(j);
}

std::string render_verify(const std::vector<VerifyRow> &rows, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::ostringstream out;
        out << "check,max_deviation,threshold,status,note\n";
        for (const auto &r : rows) {
            out << r.check << "," << format_number(r.max_deviation) << "," << format_number(r.threshold) << ","
                << (r.passed ? "pass" : "FAIL") << ",\"" << r.note << "\"\n";
        }
        return out.str();
    }
    Json j;
    j["command"] = "verify";
    j["passed"] = all_passed(rows);
    Json arr = Json::array();
    for (const auto &r : rows) {
        Json rec;
        rec["check"] = r.check;
        rec["max_deviation"] = r.max_deviation;
        rec["threshold"] = r.threshold;
        rec["status"] = r.passed ? "pass" : "FAIL";
        rec["note"] = r.note;
        arr.push_back(std::move(rec));
    }
    j["rows"] = std::move(arr);
    return dump_json(j);
}

std::string verify_table(const std::vector<VerifyRow> &rows) {
    std::ostringstream out;
    out << std::left << std::setw(24) << "check" << std::setw(14) << "max_dev" << std::setw(10) << "threshold"
        << "  status\n";
    for (const auto &r : rows) {
        std::ostringstream dev;
        dev << std::scientific << std::setprecision(2) << r.max_deviation;
        std::ostringstream thr;
        thr << std::scientific << std::setprecision(0) << r.threshold;
        out << std::left << std::setw(24) << r.check << std::setw(14) << dev.str() << std::setw(10) << thr.str()
            << "  " << (r.passed ? "pass" : "FAIL") << "\n";
        if (!r.note.empty()) {
            out << "    " << r.note << "\n";
        }
    }
    out << (all_passed(rows) ? "all checks passed\n" : "verification FAILED\n");
    return out.str();
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Frequency-assisted polarization qubit transmission simulator"};
    app.require_subcommand(1);

    CommonFlags transmit_flags;
    auto *transmit = app.add_subcommand("transmit", "Run one transmission and report every output branch");
    add_common(transmit, transmit_flags, false);

    CommonFlags mc_flags;
    unsigned threads = 1;
    auto *montecarlo = app.add_subcommand("montecarlo", "Repeat the transmission over sampled noise");
    add_common(montecarlo, mc_flags, true);
    montecarlo->add_option("--threads", threads, "Worker threads (results do not depend on this)")
        ->check(CLI::Range(1u, 256u));

    CommonFlags qkd_flags;
    std::optional<uint64_t> bits;
    bool force_protected = false;
    bool force_unprotected = false;
    auto *qkd = app.add_subcommand("qkd", "BB84 over the noisy channel with or without the encoder/decoder");
    add_common(qkd, qkd_flags, false);
    qkd->add_option("--bits", bits, "Number of raw key bits");
    auto *prot = qkd->add_flag("--protected", force_protected, "Send through encoder and decoder");
    qkd->add_flag("--unprotected", force_unprotected, "Send the bare polarization qubit")->excludes(prot);

    std::optional<std::string> verify_output;
    std::string verify_format = "json";
    VerifyOptions vopt;
    auto *verify = app.add_subcommand("verify", "Check simulated stages against the reference states");
    verify->add_option("--output", verify_output, "Also write the results to this file");
    verify->add_option("--format", verify_format, "Format of --output")->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--samples", vopt.samples, "Random draws per check");
    verify->add_option("--seed", vopt.seed.value, "Seed for the random draws");
    verify->add_flag("--corrupt-pm-sign", vopt.corrupt_pm_sign, "Negative control: flip the decoder phase sign")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*transmit) {
            auto cfg = build_config(transmit_flags);
            emit(render_transmit(cfg), cfg.output, out);
        } else if (*montecarlo) {
            auto cfg = build_config(mc_flags);
            emit(render_montecarlo(cfg, threads), cfg.output, out);
        } else if (*qkd) {
            auto cfg = build_config(qkd_flags);
            QkdSpec spec = cfg.qkd.value_or(QkdSpec{});
            if (bits) {
                spec.n_bits = *bits;
            }
            if (force_protected) {
                spec.protected_transmission = true;
            }
            if (force_unprotected) {
                spec.protected_transmission = false;
            }
            cfg.qkd = spec;
            emit(render_qkd(cfg), cfg.output, out);
        } else if (*verify) {
            auto rows = run_verification(vopt);
            out << verify_table(rows);
            if (verify_output) {
                OutputSpec spec{verify_output, verify_format == "csv" ? OutputFormat::csv : OutputFormat::json};
                emit(render_verify(rows, spec.format), spec, out);
            }
            return all_passed(rows) ? kExitOk : kExitVerification;
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace fqt
