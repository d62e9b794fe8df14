// qgamble: simulate and check the three-state quantum gambling protocol.
//
//   qgamble simulate --rounds 1000000 --rate-r 0.05 --penalty-R 398 --alice honest
//   qgamble analytic --theta 0.5 --rate-r 0.05 --penalty-R 398
//   qgamble sweep-theta --points 4 --rounds 100000
//   qgamble sweep-r --k 20 --rates 0.1,0.05,0.01,0.005
//   qgamble verify
//
// Exit codes: 0 success, 1 validation error, 2 invariant failure, 3 abort.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_protocol_flags(CLI::App *sub, qgamble::cli::CliOptions &o) {
    sub->add_option("--seed", o.seed, "Base seed (env QGAMBLE_SEED)")->envname("QGAMBLE_SEED");
    sub->add_option("--rate-r", o.rate_r, "Checking rate r");
    sub->add_option("--penalty-R", o.penalty_R, "Penalty R paid on an accusation");
    sub->add_option("--noise-lambda", o.noise_lambda, "Depolarizing strength in transit");
    sub->add_option("--abort-threshold", o.abort_threshold,
                    "Accusation rate above which Bob aborts (1 disables)");
    sub->add_option("--abort-min-checks", o.abort_min_checks,
                    "Checks needed before the abort rule applies");
    sub->add_option("--alice", o.alice, "Alice strategy spec");
    sub->add_option("--bob", o.bob, "Bob strategy spec");
    sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--output", o.output, "Write records to this file instead of stdout");
}

} // namespace

int main(int argc, char **argv) {
    using qgamble::cli::CliOptions;
    CliOptions o;
    CLI::App app{"Three-state quantum gambling simulator and verifier"};
    app.require_subcommand(1);

    auto *simulate = app.add_subcommand("simulate", "Run rounds and report mean gains");
    add_protocol_flags(simulate, o);
    simulate->add_option("--rounds", o.rounds, "Number of rounds")->required();
    simulate->add_option("--transcript", o.transcript, "Write one record per round here");

    auto *analytic = app.add_subcommand("analytic", "Closed-form gains at one angle");
    add_protocol_flags(analytic, o);
    analytic->add_option("--theta", o.theta, "Bloch angle theta_a in radians");

    auto *sweep_theta = app.add_subcommand("sweep-theta", "Gain versus cheat angle");
    add_protocol_flags(sweep_theta, o);
    sweep_theta->add_option("--rounds", o.rounds, "Monte Carlo rounds per point (0 skips)");
    sweep_theta->add_option("--points", o.points, "Uniform grid size on [0, pi]");
    sweep_theta->add_option("--thetas", o.thetas, "Explicit angles")->delimiter(',');

    auto *sweep_r = app.add_subcommand("sweep-r", "Bias versus penalty at fixed r(R+2) = k");
    add_protocol_flags(sweep_r, o);
    sweep_r->add_option("--rounds", o.rounds, "Monte Carlo rounds per point (0 skips)");
    sweep_r->add_option("--k", o.k, "Security constant k = r(R+2)");
    sweep_r->add_option("--rates", o.rates, "Checking rates")->delimiter(',');

    auto *verify = app.add_subcommand("verify", "Run the invariant suite");
    add_protocol_flags(verify, o);
    verify->add_option("--perturb-povm", o.perturb_povm,
                       "Perturb one POVM element (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return qgamble::cli::kValidationError;
    }

    for (const auto *sub : {simulate, analytic, sweep_theta, sweep_r, verify}) {
        if (sub->parsed()) {
            o.subcommand = sub->get_name();
        }
    }
    return qgamble::cli::run(o, std::cout, std::cerr);
}
