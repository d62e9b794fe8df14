#pragma once

// Subcommand bodies for the qgamble CLI. Argument parsing lives in
// qgamble.cpp; everything here takes a filled-in CliOptions and streams, so
// the commands can be driven directly from tests.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <qgamble/qgamble.hpp>

namespace qgamble::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kInvariantFailure = 2, kAborted = 3 };

struct CliOptions {
    std::string subcommand;
    std::optional<std::uint64_t> rounds;
    std::uint64_t seed = 1;
    double rate_r = 0.05;
    double penalty_R = 398.0;
    double k = 20.0;
    double noise_lambda = 0.0;
    double abort_threshold = 1.0;
    std::uint64_t abort_min_checks = 1000;
    std::string alice = "honest";
    std::string bob = "honest";
    std::string output;
    std::string transcript;
    std::string format = "csv";
    unsigned workers = 1;
    double theta = 0.0;
    std::vector<double> thetas;
    std::size_t points = 4;
    std::vector<double> rates{0.1, 0.05, 0.01, 0.005};
    double perturb_povm = 0.0;
};

inline ProtocolParams params_from(const CliOptions &o) {
    ProtocolParams p;
    p.r = o.rate_r;
    p.R = o.penalty_R;
    p.noise_lambda = o.noise_lambda;
    p.abort_threshold = o.abort_threshold;
    p.abort_min_checks = o.abort_min_checks;
    p.validate();
    return p;
}

namespace detail {

inline std::string join(const std::vector<double> &xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? "," : "") + format_double(xs[i]);
    }
    return s;
}

/// Every flag with its effective value, so a run can be repeated verbatim.
inline std::string effective_config(const CliOptions &o) {
    std::ostringstream os;
    os << "# effective: qgamble " << o.subcommand;
    if (o.rounds) {
        os << " --rounds " << *o.rounds;
    }
    os << " --seed " << o.seed << " --rate-r " << format_double(o.rate_r) << " --penalty-R "
       << format_double(o.penalty_R) << " --noise-lambda " << format_double(o.noise_lambda)
       << " --abort-threshold " << format_double(o.abort_threshold) << " --abort-min-checks "
       << o.abort_min_checks << " --alice '" << o.alice << "' --bob '" << o.bob << "' --workers "
       << o.workers << " --format " << o.format;
    if (o.subcommand == "analytic") {
        os << " --theta " << format_double(o.theta);
    } else if (o.subcommand == "sweep-theta") {
        if (o.thetas.empty()) {
            os << " --points " << o.points;
        } else {
            os << " --thetas " << join(o.thetas);
        }
    } else if (o.subcommand == "sweep-r") {
        os << " --k " << format_double(o.k) << " --rates " << join(o.rates);
    } else if (o.subcommand == "verify") {
        os << " --perturb-povm " << format_double(o.perturb_povm);
    }
    if (!o.output.empty()) {
        os << " --output " << o.output;
    }
    if (!o.transcript.empty()) {
        os << " --transcript " << o.transcript;
    }
    return os.str();
}

/// Writes to --output when given, otherwise to `fallback`.
class Sink {
  public:
    Sink(const std::string &path, std::ostream &fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw ValidationError("cannot open output file '" + path + "'");
            }
            out_ = &file_;
        }
    }
    std::ostream &stream() { return *out_; }

  private:
    std::ofstream file_;
    std::ostream *out_;
};

struct McColumns {
    std::optional<double> mean;
    std::optional<double> stderr_;
    std::optional<double> z;
};

inline McColumns run_mc(const CliOptions &o, const AliceStrategy &alice, ProtocolParams params,
                        std::uint64_t seed, double expected) {
    if (!o.rounds || *o.rounds == 0) {
        return {};
    }
    SimConfig cfg;
    cfg.rounds = *o.rounds;
    cfg.seed = seed;
    cfg.params = params;
    cfg.alice = alice;
    cfg.bob = parse_bob_spec(o.bob);
    cfg.workers = o.workers;
    const SimResult res = simulate(cfg);
    return {res.mean_gain_alice, res.standard_error, compare_stats(res, expected)};
}

inline void put_optional(nlohmann::ordered_json &j, const char *key, std::optional<double> v) {
    if (v) {
        j[key] = *v;
    } else {
        j[key] = nullptr;
    }
}

} // namespace detail

inline int cmd_simulate(const CliOptions &o, std::ostream &out, std::ostream &err) {
    if (!o.rounds || *o.rounds == 0) {
        err << "error: simulate requires --rounds >= 1\n";
        return kValidationError;
    }
    const RecordFormat fmt = parse_format(o.format);
    SimConfig cfg;
    cfg.rounds = *o.rounds;
    cfg.seed = o.seed;
    cfg.params = params_from(o);
    cfg.alice = parse_alice_spec(o.alice);
    cfg.bob = parse_bob_spec(o.bob);
    cfg.workers = o.workers;
    err << detail::effective_config(o) << '\n';

    std::ofstream transcript;
    if (!o.transcript.empty()) {
        transcript.open(o.transcript);
        if (!transcript) {
            throw ValidationError("cannot open transcript file '" + o.transcript + "'");
        }
        cfg.on_round = [&transcript, fmt](std::uint64_t i, const RoundTranscript &t) {
            write_record(transcript, to_json(i, t), fmt, i == 0);
        };
    }

    const SimResult res = simulate(cfg);
    detail::Sink sink(o.output, out);
    write_record(sink.stream(), to_json(res), fmt, true);
    if (res.aborted) {
        err << "protocol aborted after " << res.rounds << " rounds: accusation rate "
            << format_double(static_cast<double>(res.accuse_count) /
                             static_cast<double>(res.check_count))
            << " above threshold " << format_double(o.abort_threshold) << '\n';
        return kAborted;
    }
    return kSuccess;
}

inline int cmd_analytic(const CliOptions &o, std::ostream &out, std::ostream &err) {
    const RecordFormat fmt = parse_format(o.format);
    const ProtocolParams params = params_from(o);
    err << detail::effective_config(o) << '\n';
    const auto g = analytics::gain_total(o.theta, params.r, params.R);
    nlohmann::ordered_json j{
        {"theta_a", o.theta},
        {"r", params.r},
        {"R", params.R},
        {"k", params.r * (params.R + 2.0)},
        {"p_correct", analytics::p_correct(o.theta)},
        {"g_normal", g.g_normal},
        {"g_checking", g.g_checking},
        {"g_total", g.g_total},
        {"exact_oracle",
         enumerate_exact(FixedStateCheat::at_angle(o.theta, TrineLabel::A), params).g_alice},
        {"optimal_theta_a", analytics::optimal_cheat_angle(params.r, params.R)}};
    if (params.r > 0.0) {
        j["f_u_match"] = posterior_unmeasured(params.r, true);
        j["f_u_miss"] = posterior_unmeasured(params.r, false);
    }
    detail::Sink sink(o.output, out);
    write_record(sink.stream(), j, fmt, true);
    return kSuccess;
}

inline int cmd_sweep_theta(const CliOptions &o, std::ostream &out, std::ostream &err) {
    const RecordFormat fmt = parse_format(o.format);
    const ProtocolParams params = params_from(o);
    std::vector<double> grid = o.thetas;
    if (grid.empty()) {
        if (o.points < 1) {
            err << "error: empty theta grid\n";
            return kValidationError;
        }
        for (std::size_t i = 0; i < o.points; ++i) {
            grid.push_back(o.points == 1 ? 0.0
                                         : std::numbers::pi * static_cast<double>(i) /
                                               static_cast<double>(o.points - 1));
        }
    }
    err << detail::effective_config(o) << '\n';
    detail::Sink sink(o.output, out);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double theta = grid[i];
        const FixedStateCheat alice = FixedStateCheat::at_angle(theta, TrineLabel::A);
        const double analytic = analytics::gain_total(theta, params.r, params.R).g_total;
        const double exact = enumerate_exact(alice, params).g_alice;
        const auto mc = detail::run_mc(o, alice, params, o.seed + i, analytic);
        nlohmann::ordered_json j{{"theta_a", theta}, {"analytic", analytic}, {"exact_oracle", exact}};
        detail::put_optional(j, "mc_mean", mc.mean);
        detail::put_optional(j, "mc_stderr", mc.stderr_);
        detail::put_optional(j, "z", mc.z);
        write_record(sink.stream(), j, fmt, i == 0);
    }
    return kSuccess;
}

inline int cmd_sweep_r(const CliOptions &o, std::ostream &out, std::ostream &err) {
    const RecordFormat fmt = parse_format(o.format);
    if (o.rates.empty()) {
        err << "error: empty rate grid\n";
        return kValidationError;
    }
    err << detail::effective_config(o) << '\n';
    detail::Sink sink(o.output, out);
    for (std::size_t i = 0; i < o.rates.size(); ++i) {
        const double r = o.rates[i];
        const analytics::TradeoffPoint pt = analytics::tradeoff_point(r, o.k);
        CliOptions row = o;
        row.rate_r = r;
        row.penalty_R = pt.R;
        const ProtocolParams params = params_from(row);
        const double analytic = analytics::gain_total(0.0, r, pt.R).g_total;
        const double exact = enumerate_exact(HonestAlice{}, params).g_alice;
        const auto mc = detail::run_mc(o, HonestAlice{}, params, o.seed + i, analytic);
        nlohmann::ordered_json j{{"r", r},
                                 {"delta", analytic},
                                 {"R", pt.R},
                                 {"R_times_delta", pt.R * analytic},
                                 {"k", o.k},
                                 {"analytic", analytic},
                                 {"exact_oracle", exact}};
        detail::put_optional(j, "mc_mean", mc.mean);
        detail::put_optional(j, "mc_stderr", mc.stderr_);
        detail::put_optional(j, "z", mc.z);
        write_record(sink.stream(), j, fmt, i == 0);
    }
    return kSuccess;
}

inline int cmd_verify(const CliOptions &o, std::ostream &out, std::ostream &err) {
    err << detail::effective_config(o) << '\n';
    VerifyOptions opt;
    opt.seed = o.seed;
    opt.povm_perturbation = o.perturb_povm;
    int failures = 0;
    for (const auto &c : run_invariant_suite(opt)) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        failures += c.passed ? 0 : 1;
    }
    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
        << '\n';
    return failures == 0 ? kSuccess : kInvariantFailure;
}

/// Dispatches on o.subcommand, mapping validation errors to exit code 1.
inline int run(const CliOptions &o, std::ostream &out, std::ostream &err) {
    try {
        if (o.subcommand == "simulate") {
            return cmd_simulate(o, out, err);
        }
        if (o.subcommand == "analytic") {
            return cmd_analytic(o, out, err);
        }
        if (o.subcommand == "sweep-theta") {
            return cmd_sweep_theta(o, out, err);
        }
        if (o.subcommand == "sweep-r") {
            return cmd_sweep_r(o, out, err);
        }
        if (o.subcommand == "verify") {
            return cmd_verify(o, out, err);
        }
        err << "error: unknown subcommand '" << o.subcommand << "'\n";
        return kValidationError;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const ProtocolFault &e) {
        err << "protocol fault: " << e.what() << '\n';
        return kValidationError;
    }
}

} // namespace qgamble::cli
