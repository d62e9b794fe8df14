#pragma once

/**
 * @file
 * Player behaviors. Alice is honest, sends a fixed off-trine state, samples a
 * mixture of (state, claim) pairs, or keeps half of an entangled pair and
 * measures only after hearing Bob's guess. Bob measures optimally, guesses at
 * random, or uses an arbitrary labeled POVM.
 */

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "protocol.hpp"
#include "two_qubit.hpp"

namespace qgamble {

struct HonestAlice {};

/// Always sends `state` and claims `claim`.
struct FixedStateCheat {
    PureState state;
    TrineLabel claim;

    /// State whose Bloch vector sits at angle `theta` from the claimed trine
    /// vector. `phi` rotates the tilt direction about that vector; phi = 0
    /// tilts within the x-z plane toward the next label (a -> b -> c).
    static FixedStateCheat at_angle(double theta, TrineLabel claim, double phi = 0.0) {
        if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
            throw ValidationError("cheat angle must lie in [0, pi]");
        }
        const BlochVector n = trine_bloch(claim);
        const BlochVector t{n.z, 0.0, -n.x};
        const BlochVector y{0.0, 1.0, 0.0};
        const BlochVector dir = std::cos(phi) * t + std::sin(phi) * y;
        BlochVector v = std::cos(theta) * n + std::sin(theta) * dir;
        v = (1.0 / v.norm()) * v;
        return {state_from_bloch(v), claim};
    }

    /// Bloch angle between the sent state and trine label `l`.
    [[nodiscard]] double angle_to(TrineLabel l) const {
        return bloch_angle(bloch_from_state(state), trine_bloch(l));
    }
};

struct MixtureComponent {
    double weight;
    PureState state;
    TrineLabel claim;
};

struct MixtureCheat {
    std::vector<MixtureComponent> components;

    explicit MixtureCheat(std::vector<MixtureComponent> comps) : components(std::move(comps)) {
        if (components.empty()) {
            throw ValidationError("mixture strategy needs at least one component");
        }
        double total = 0.0;
        for (const auto &c : components) {
            if (!(c.weight >= 0.0)) {
                throw ValidationError("mixture weight must be non-negative");
            }
            total += c.weight;
        }
        if (std::abs(total - 1.0) > kStateTol) {
            throw ValidationError("mixture weights must sum to 1");
        }
    }

    /// Honest play written as a mixture: 1/3 of each trine state, claimed truthfully.
    static MixtureCheat honest_equivalent() {
        std::vector<MixtureComponent> comps;
        for (auto l : kTrineLabels) {
            comps.push_back({1.0 / 3.0, trine_state(l), l});
        }
        return MixtureCheat(std::move(comps));
    }
};

/// Alice keeps the first qubit of `psi` and measures it after Bob's guess g
/// in basis_policy[g]; on outcome o she claims claim_policy[g][o].
/// A missing claim entry is a protocol violation by Alice.
struct EntangledAlice {
    TwoQubitState psi;
    std::array<QubitBasis, 3> basis_policy;
    std::array<std::array<std::optional<TrineLabel>, 2>, 3> claim_policy;

    EntangledAlice(TwoQubitState state, std::array<QubitBasis, 3> bases,
                   std::array<std::array<std::optional<TrineLabel>, 2>, 3> claims)
        : psi(state), basis_policy(std::move(bases)), claim_policy(claims) {
        for (const auto &b : basis_policy) {
            require_orthonormal(b);
        }
    }

    /// For each (guess, outcome), the trine label nearest to Bob's steered
    /// state, optionally never the guess itself. Zero-probability branches
    /// default to the guess.
    static std::array<std::array<std::optional<TrineLabel>, 2>, 3>
    nearest_claims(const TwoQubitState &psi, const std::array<QubitBasis, 3> &bases,
                   bool exclude_guess = false) {
        std::array<std::array<std::optional<TrineLabel>, 2>, 3> claims;
        for (std::size_t g = 0; g < 3; ++g) {
            const auto branches = steering_ensemble(psi, bases[g]);
            for (std::size_t o = 0; o < 2; ++o) {
                TrineLabel best = label_at(g);
                if (branches[o].bob) {
                    double best_fid = -1.0;
                    for (auto l : kTrineLabels) {
                        if (exclude_guess && l == label_at(g)) {
                            continue;
                        }
                        const double f = fidelity(trine_state(l), *branches[o].bob);
                        if (f > best_fid + kExactTol) {
                            best_fid = f;
                            best = l;
                        }
                    }
                }
                claims[g][o] = best;
            }
        }
        return claims;
    }

    /// Phi+ shared; after guess g Alice measures {|h>, |h'>} with h the label
    /// after g. Outcome |h> leaves Bob in |h> exactly and she claims h; outcome
    /// |h'> leaves Bob in |h'> and she claims the remaining label. Bob loses
    /// every normal round, and pays for it in checking rounds.
    static EntangledAlice bell_steer() {
        std::array<QubitBasis, 3> bases{QubitBasis::from(trine_state(TrineLabel::B)),
                                        QubitBasis::from(trine_state(TrineLabel::C)),
                                        QubitBasis::from(trine_state(TrineLabel::A))};
        std::array<std::array<std::optional<TrineLabel>, 2>, 3> claims;
        for (std::size_t g = 0; g < 3; ++g) {
            claims[g] = {label_at((g + 1) % 3), label_at((g + 2) % 3)};
        }
        return {TwoQubitState::bell_phi_plus(), bases, claims};
    }

    /// Phi+ shared; after guess g Alice measures along the in-plane Bloch axis
    /// perpendicular to g. Bob ends up 30 degrees from one of the two other
    /// labels, which she claims, so every normal round is a loss for Bob while
    /// a check fails only with probability sin^2(pi/12) = (2 - sqrt 3)/4.
    /// Expected gain 2 - r(R+2)(2 - sqrt 3)/4, which beats the honest bias r
    /// whenever r(R+2) is below roughly 29.
    static EntangledAlice perpendicular_steer() {
        const TwoQubitState psi = TwoQubitState::bell_phi_plus();
        std::array<QubitBasis, 3> bases{QubitBasis::from(PureState::zero()),
                                        QubitBasis::from(PureState::zero()),
                                        QubitBasis::from(PureState::zero())};
        for (std::size_t g = 0; g < 3; ++g) {
            const BlochVector n = trine_bloch(label_at(g));
            bases[g] = QubitBasis::from(state_from_bloch({n.z, 0.0, -n.x}));
        }
        return {psi, bases, nearest_claims(psi, bases, /*exclude_guess=*/true)};
    }

    /// Product state |0>|alpha>: a non-entangled sender written in entangled
    /// form. Claims the true label whatever the outcome.
    static EntangledAlice product_honest(TrineLabel alpha) {
        const QubitBasis z = QubitBasis::from(PureState::zero());
        std::array<std::array<std::optional<TrineLabel>, 2>, 3> claims;
        for (auto &c : claims) {
            c = {alpha, alpha};
        }
        return {TwoQubitState::product(PureState::zero(), trine_state(alpha)), {z, z, z}, claims};
    }

    /// Random policy: Haar-random psi and a Haar-random basis per guess.
    /// Claims are the label nearest Bob's steered state (in a third of draws
    /// never the guess itself), then with probability 1/3 overwritten by
    /// uniformly random labels.
    static EntangledAlice random(RandomStream &rng) {
        const TwoQubitState psi = random_two_qubit_state(rng);
        std::array<QubitBasis, 3> bases{QubitBasis::from(random_pure_state(rng)),
                                        QubitBasis::from(random_pure_state(rng)),
                                        QubitBasis::from(random_pure_state(rng))};
        auto claims = nearest_claims(psi, bases, rng.below(3) == 2);
        if (rng.below(3) == 0) {
            for (auto &row : claims) {
                for (auto &c : row) {
                    c = label_at(rng.below(3));
                }
            }
        }
        return {psi, bases, claims};
    }
};

using AliceStrategy = std::variant<HonestAlice, FixedStateCheat, MixtureCheat, EntangledAlice>;

enum class BobKind { HonestOptimal, RandomGuess, CustomPovm };

/// Bob's behavior in normal rounds. Checking rounds are always a stored qubit
/// and a uniform guess; the checking rate itself lives in ProtocolParams.
struct BobStrategy {
    BobKind kind = BobKind::HonestOptimal;
    std::optional<Povm> povm;
    std::vector<TrineLabel> outcome_guess;

    static BobStrategy honest() { return {}; }
    static BobStrategy random_guess() { return {BobKind::RandomGuess, std::nullopt, {}}; }

    /// Measures `m` and announces outcome_guess[k] on outcome k.
    static BobStrategy custom(Povm m, std::vector<TrineLabel> guesses) {
        if (guesses.size() != m.size()) {
            throw ValidationError("custom Bob needs one guess per POVM outcome");
        }
        return {BobKind::CustomPovm, std::move(m), std::move(guesses)};
    }

    /// Ignores the qubit and always announces `l`.
    static BobStrategy always(TrineLabel l) {
        return custom(Povm({Matrix2::identity()}, {to_string(l)}), {l});
    }
};

/// The physical system in flight: a lone qubit, or an entangled pair whose
/// second slot is Bob's.
using InFlight = std::variant<PureState, TwoQubitState>;

/// What Alice remembers privately between sending and adjudicating.
struct AliceRecord {
    std::optional<TrineLabel> claim;  ///< empty for entangled Alice, decided later
    bool holds_kept_qubit = false;
};

struct Preparation {
    InFlight system;
    AliceRecord record;
    SentDescriptor sent;
};

inline Preparation alice_prepare(const AliceStrategy &strategy, RandomStream &rng) {
    return std::visit(
        [&rng](const auto &s) -> Preparation {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HonestAlice>) {
                const auto i = static_cast<std::uint32_t>(rng.below(3));
                const TrineLabel l = label_at(i);
                return {trine_state(l), {l, false}, {SentDescriptor::Kind::Honest, i}};
            } else if constexpr (std::is_same_v<S, FixedStateCheat>) {
                return {s.state, {s.claim, false}, {SentDescriptor::Kind::Fixed, 0}};
            } else if constexpr (std::is_same_v<S, MixtureCheat>) {
                std::vector<double> w;
                w.reserve(s.components.size());
                for (const auto &c : s.components) {
                    w.push_back(c.weight);
                }
                const std::size_t i = sample_outcome(w, rng);
                const auto &c = s.components[i];
                return {c.state, {c.claim, false},
                        {SentDescriptor::Kind::Mixture, static_cast<std::uint32_t>(i)}};
            } else {
                return {s.psi, {std::nullopt, true}, {SentDescriptor::Kind::Entangled, 0}};
            }
        },
        strategy);
}

/// Alice announces won/lost together with her claimed label. Entangled Alice
/// measures her kept qubit here, collapsing Bob's half in `system` to a pure
/// single-qubit state.
inline Verdict alice_adjudicate(const AliceStrategy &strategy, const AliceRecord &record,
                                InFlight &system, TrineLabel bob_guess, RandomStream &rng) {
    TrineLabel claimed{};
    if (const auto *ent = std::get_if<EntangledAlice>(&strategy)) {
        auto *pair = std::get_if<TwoQubitState>(&system);
        if (!record.holds_kept_qubit || pair == nullptr) {
            throw ProtocolFault(Party::Alice, "entangled strategy has no kept qubit");
        }
        const std::size_t g = index_of(bob_guess);
        const Collapse c = local_measure_collapse(*pair, ent->basis_policy[g], rng);
        const auto &claim = ent->claim_policy[g][c.outcome];
        if (!claim) {
            throw ProtocolFault(Party::Alice, "claim outside {a, b, c}");
        }
        claimed = *claim;
        system = c.bob;
    } else {
        if (!record.claim) {
            throw ProtocolFault(Party::Alice, "no recorded claim for this round");
        }
        claimed = *record.claim;
    }
    return {claimed == bob_guess ? BetResult::BobWon : BetResult::BobLost, claimed};
}

/// Bob's step-2/3 or step-6/7 action. `stored` is true when the qubit was
/// kept unmeasured for a later check.
struct BobAction {
    TrineLabel guess = TrineLabel::A;
    bool stored = false;
};

inline BobAction bob_act(const BobStrategy &strategy, InFlight &system, RoundKind kind,
                         RandomStream &rng) {
    if (kind == RoundKind::Checking) {
        return {label_at(rng.below(3)), true};
    }
    if (strategy.kind == BobKind::RandomGuess) {
        return {label_at(rng.below(3)), false};
    }
    const Povm &m = strategy.kind == BobKind::CustomPovm ? *strategy.povm : optimal_povm();
    std::size_t k = 0;
    if (const auto *pure = std::get_if<PureState>(&system)) {
        const auto probs = born_probabilities(*pure, m);
        k = sample_outcome(probs, rng);
    } else {
        BobMeasurement meas = measure_second(std::get<TwoQubitState>(system), m, rng);
        k = meas.outcome;
        system = meas.post;
    }
    const TrineLabel guess =
        strategy.kind == BobKind::CustomPovm ? strategy.outcome_guess[k] : label_at(k);
    return {guess, false};
}

inline BobAction bob_act(const BobStrategy &strategy, const PureState &received, RoundKind kind,
                         RandomStream &rng) {
    InFlight system = received;
    return bob_act(strategy, system, kind, rng);
}

/// Step 9: measure the stored qubit in {|claimed>, |claimed'>}; the
/// orthogonal outcome is an accusation.
inline CheckResult bob_check(const PureState &stored, TrineLabel claimed, RandomStream &rng) {
    return project_check(stored, claimed, rng) == CheckOutcome::Fail ? CheckResult::Accuse
                                                                      : CheckResult::Pass;
}

/// Alice's posterior that Bob did not measure, given honest trine sending and
/// whether his announced guess matched her claim. With a match this is
/// (r/3) / (r/3 + (1-r)(2/3)); with a miss the optimal POVM puts 1/6 on each
/// wrong label while the random guess puts 1/3 there.
inline double posterior_unmeasured(double r, bool guess_matches_claim) {
    if (!(r > 0.0 && r < 1.0)) {
        throw ValidationError("posterior needs 0 < r < 1");
    }
    const double unmeasured = r / 3.0;
    const double measured = (1.0 - r) * (guess_matches_claim ? 2.0 / 3.0 : 1.0 / 6.0);
    return unmeasured / (unmeasured + measured);
}

} // namespace qgamble
