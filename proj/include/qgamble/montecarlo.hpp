#pragma once

/**
 * @file
 * Repeated-round simulation, the exact outcome-tree expectation for
 * non-entangled senders, and z-scores between the two.
 *
 * Round i always draws from RandomStream::for_round(seed, i), so the sampled
 * rounds do not depend on how they are split across workers. Per-round
 * results are folded into the totals strictly in round order, which makes
 * the whole SimResult bit-identical for any worker count.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "engine.hpp"

namespace qgamble {

struct SimConfig {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 1;
    ProtocolParams params;
    AliceStrategy alice = HonestAlice{};
    BobStrategy bob = BobStrategy::honest();
    unsigned workers = 1;
    /// Optional per-round sink, called in round order.
    std::function<void(std::uint64_t, const RoundTranscript &)> on_round;
};

struct SimResult {
    std::uint64_t rounds = 0;  ///< rounds actually played (fewer on abort)
    double mean_gain_alice = 0.0;
    double mean_gain_bob = 0.0;
    double standard_error = 0.0;
    std::uint64_t win_count = 0;
    std::uint64_t lose_count = 0;
    std::uint64_t check_count = 0;
    std::uint64_t accuse_count = 0;
    std::uint64_t match_count = 0;        ///< guess equal to claim
    std::uint64_t match_check_count = 0;  ///< ... and the round was a check
    bool aborted = false;
};

namespace detail {

/// Welford accumulator for Alice's per-round gain.
struct GainAccumulator {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    [[nodiscard]] double standard_error() const {
        if (n < 2) {
            return 0.0;
        }
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

inline constexpr std::uint64_t kBatchRounds = 1U << 16;

} // namespace detail

inline SimResult simulate(const SimConfig &config) {
    if (config.rounds < 1) {
        throw ValidationError("simulation needs at least one round");
    }
    if (config.workers < 1) {
        throw ValidationError("simulation needs at least one worker");
    }
    config.params.validate();

    SimResult result;
    Ledger ledger;
    detail::GainAccumulator acc;
    std::vector<RoundTranscript> batch;

    for (std::uint64_t start = 0; start < config.rounds && !ledger.aborted;
         start += detail::kBatchRounds) {
        const std::uint64_t count = std::min(detail::kBatchRounds, config.rounds - start);
        batch.assign(count, RoundTranscript{});

        auto run_range = [&config, &batch, start](std::uint64_t lo, std::uint64_t hi) {
            // each worker plays with its own copies of the strategies
            const AliceStrategy alice = config.alice;
            const BobStrategy bob = config.bob;
            for (std::uint64_t i = lo; i < hi; ++i) {
                RandomStream rng = RandomStream::for_round(config.seed, start + i);
                batch[i] = run_round(alice, bob, config.params, rng);
            }
        };

        const std::uint64_t workers = std::min<std::uint64_t>(config.workers, count);
        if (workers == 1) {
            run_range(0, count);
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::uint64_t w = 0; w < workers; ++w) {
                pool.emplace_back(run_range, count * w / workers, count * (w + 1) / workers);
            }
        }

        for (std::uint64_t i = 0; i < count; ++i) {
            const RoundTranscript &t = batch[i];
            if (config.on_round) {
                config.on_round(start + i, t);
            }
            ledger.record(t);
            acc.add(t.alice_delta);
            if (t.verdict.result == BetResult::BobWon) {
                ++result.win_count;
                ++result.match_count;
                if (t.kind == RoundKind::Checking) {
                    ++result.match_check_count;
                }
            } else {
                ++result.lose_count;
            }
            if (abort_monitor(ledger, config.params) == MonitorDecision::Abort) {
                ledger.aborted = true;
                break;
            }
        }
    }

    result.rounds = ledger.rounds;
    result.check_count = ledger.checks;
    result.accuse_count = ledger.accusations;
    result.aborted = ledger.aborted;
    result.mean_gain_alice = ledger.alice_total / static_cast<double>(ledger.rounds);
    result.mean_gain_bob = -result.mean_gain_alice;
    result.standard_error = acc.standard_error();
    return result;
}

struct Branch {
    std::string description;
    double probability = 0.0;
    double payoff = 0.0;  ///< Alice's coins on this branch
};

struct ExactExpectation {
    double g_alice = 0.0;
    std::vector<Branch> branch_table;
};

/// Exact expected gain of a non-entangled sender against `bob`, by walking
/// mixture component x round kind x guess x check outcome with Born-rule
/// probabilities. Channel noise enters through the depolarized density
/// operator; with no noise the pure-state path keeps exact zeros exact.
inline ExactExpectation enumerate_exact(const AliceStrategy &alice, const ProtocolParams &params,
                                        const BobStrategy &bob = BobStrategy::honest()) {
    params.validate();
    std::vector<MixtureComponent> components;
    if (std::holds_alternative<HonestAlice>(alice)) {
        components = MixtureCheat::honest_equivalent().components;
    } else if (const auto *f = std::get_if<FixedStateCheat>(&alice)) {
        components = {{1.0, f->state, f->claim}};
    } else if (const auto *m = std::get_if<MixtureCheat>(&alice)) {
        components = m->components;
    } else {
        throw ValidationError("enumerate_exact does not support entangled senders");
    }

    ExactExpectation out;
    auto add = [&out](std::string desc, double prob, double payoff) {
        if (prob > 0.0) {
            out.g_alice += prob * payoff;
            out.branch_table.push_back({std::move(desc), prob, payoff});
        }
    };

    for (std::size_t ci = 0; ci < components.size(); ++ci) {
        const auto &comp = components[ci];
        const std::string prefix = "component " + std::to_string(ci) + " claim " +
                                   to_string(comp.claim);
        const bool noisy = params.noise_lambda > 0.0;
        const DensityOperator rho =
            depolarize(DensityOperator(comp.state), params.noise_lambda);

        // normal round: Bob's guess distribution
        std::vector<double> guess_prob(3, 0.0);
        if (bob.kind == BobKind::RandomGuess) {
            std::fill(guess_prob.begin(), guess_prob.end(), 1.0 / 3.0);
        } else {
            const Povm &m = bob.kind == BobKind::CustomPovm ? *bob.povm : optimal_povm();
            const auto pk = noisy ? born_probabilities(rho, m) : born_probabilities(comp.state, m);
            for (std::size_t k = 0; k < pk.size(); ++k) {
                const TrineLabel g =
                    bob.kind == BobKind::CustomPovm ? bob.outcome_guess[k] : label_at(k);
                guess_prob[index_of(g)] += pk[k];
            }
        }
        for (auto g : kTrineLabels) {
            const Verdict v{g == comp.claim ? BetResult::BobWon : BetResult::BobLost, comp.claim};
            const double pay = settle(RoundKind::Normal, v, std::nullopt, params).alice_delta;
            add(prefix + " normal guess " + to_string(g),
                comp.weight * (1.0 - params.r) * guess_prob[index_of(g)], pay);
        }

        // checking round: uniform guess, then the verification measurement
        const double fail = noisy ? check_fail_probability(rho, comp.claim)
                                  : check_fail_probability(comp.state, comp.claim);
        for (auto g : kTrineLabels) {
            const Verdict v{g == comp.claim ? BetResult::BobWon : BetResult::BobLost, comp.claim};
            const double p_guess = comp.weight * params.r / 3.0;
            add(prefix + " checking guess " + to_string(g) + " pass", p_guess * (1.0 - fail),
                settle(RoundKind::Checking, v, CheckResult::Pass, params).alice_delta);
            add(prefix + " checking guess " + to_string(g) + " accuse", p_guess * fail,
                settle(RoundKind::Checking, v, CheckResult::Accuse, params).alice_delta);
        }
    }
    return out;
}

/// z = (mean_gain_alice - expected) / standard_error.
inline double compare_stats(const SimResult &sim, double expected) {
    if (sim.standard_error > 0.0) {
        return (sim.mean_gain_alice - expected) / sim.standard_error;
    }
    if (sim.mean_gain_alice == expected) {
        return 0.0;
    }
    throw DeterministicDivergence("zero standard error but mean " +
                                  std::to_string(sim.mean_gain_alice) + " != expected " +
                                  std::to_string(expected));
}

/// Pass criterion used throughout the acceptance suite.
inline constexpr double kZThreshold = 4.0;

} // namespace qgamble
