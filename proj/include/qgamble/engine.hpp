#pragma once

#include <variant>

#include "protocol.hpp"
#include "strategies.hpp"

namespace qgamble {

/// Depolarizing channel on Bob's qubit, unraveled into pure states: with
/// probability lambda the qubit is swapped for |0> or |1> at random. For an
/// entangled half, Bob's slot is first measured in Z (and discarded), which
/// leaves Alice's kept qubit in the correct reduced state.
inline void apply_transit_noise(InFlight &system, double lambda, RandomStream &rng) {
    if (lambda <= 0.0 || !rng.bernoulli(lambda)) {
        return;
    }
    const PureState fresh = rng.below(2) == 0 ? PureState::zero() : PureState::one();
    if (auto *pair = std::get_if<TwoQubitState>(&system)) {
        const PureState kept = collapse_second_computational(*pair, rng);
        system = TwoQubitState::product(kept, fresh);
    } else {
        system = fresh;
    }
}

/// One round. Bob privately picks the round kind first; then Alice
/// prepares and sends, noise acts in transit, Bob measures or stores and
/// announces a guess, Alice announces the verdict, and in a checking round Bob
/// verifies her claim. Strategy violations surface as ProtocolFault.
inline RoundTranscript run_round(const AliceStrategy &alice, const BobStrategy &bob,
                                 const ProtocolParams &params, RandomStream &rng) {
    RoundTranscript t;
    t.kind = rng.bernoulli(params.r) ? RoundKind::Checking : RoundKind::Normal;

    Preparation prep = alice_prepare(alice, rng);
    t.sent = prep.sent;
    apply_transit_noise(prep.system, params.noise_lambda, rng);

    const BobAction action = bob_act(bob, prep.system, t.kind, rng);
    t.bob_guess = action.guess;

    t.verdict = alice_adjudicate(alice, prep.record, prep.system, action.guess, rng);

    if (t.kind == RoundKind::Checking) {
        const auto *stored = std::get_if<PureState>(&prep.system);
        if (stored == nullptr) {
            throw ProtocolFault(Party::Alice, "kept qubit was never measured");
        }
        t.check = bob_check(*stored, t.verdict.claimed, rng);
    }

    const Settlement s = settle(t.kind, t.verdict, t.check, params);
    t.alice_delta = s.alice_delta;
    t.bob_delta = s.bob_delta;
    return t;
}

} // namespace qgamble
