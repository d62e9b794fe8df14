#pragma once

// Self-check suite behind `qgamble verify`: each check recomputes one
// structural property of the protocol and reports pass/fail with detail.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "analytics.hpp"
#include "montecarlo.hpp"

namespace qgamble {

struct CheckReport {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20011;
    /// Added to the (0,0) entry of the first optimal-POVM element. Non-zero
    /// only for negative-control runs.
    double povm_perturbation = 0.0;
    std::size_t random_cases = 100;
};

namespace verify_detail {

inline CheckReport povm_completeness(const VerifyOptions &opt) {
    std::vector<Matrix2> elems = optimal_povm().elements();
    elems.front()(0, 0) += opt.povm_perturbation;
    Matrix2 sum;
    for (const auto &e : elems) {
        sum += e;
    }
    const double dev = sum.max_abs_diff(Matrix2::identity());
    const auto why = povm_violation(elems, kExactTol);
    std::ostringstream os;
    os << "max |sum E_k - I| = " << dev;
    return {"povm_completeness", !why.has_value(), why ? *why + "; " + os.str() : os.str()};
}

inline CheckReport born_vectors(const VerifyOptions &opt) {
    RandomStream rng(opt.seed);
    double worst = 0.0;
    bool in_range = true;
    for (std::size_t i = 0; i < 10 * opt.random_cases; ++i) {
        const PureState s = random_pure_state(rng);
        const auto p = born_probabilities(s, optimal_povm());
        double sum = 0.0;
        for (double x : p) {
            in_range = in_range && x >= 0.0 && x <= 1.0;
            sum += x;
        }
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    std::ostringstream os;
    os << "max |sum p - 1| = " << worst;
    return {"born_probability_vectors", in_range && worst <= kExactTol, os.str()};
}

inline CheckReport bloch_round_trip(const VerifyOptions &opt) {
    RandomStream rng(opt.seed + 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < 10 * opt.random_cases; ++i) {
        const PureState s = random_pure_state(rng);
        worst = std::max(worst, std::abs(1.0 - fidelity(s, state_from_bloch(bloch_from_state(s)))));
    }
    std::ostringstream os;
    os << "max |1 - fidelity| = " << worst;
    return {"bloch_round_trip", worst <= kStateTol, os.str()};
}

inline CheckReport steering_identity(const VerifyOptions &opt) {
    RandomStream rng(opt.seed + 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < opt.random_cases; ++i) {
        const TwoQubitState psi = random_two_qubit_state(rng);
        const QubitBasis basis = QubitBasis::from(random_pure_state(rng));
        const BlochVector target = partial_trace(psi, Slot::Second).bloch();
        BlochVector avg;
        for (const auto &b : steering_ensemble(psi, basis)) {
            if (b.bob) {
                avg = avg + b.probability * bloch_from_state(*b.bob);
            }
        }
        worst = std::max(worst, (avg - target).norm());
    }
    std::ostringstream os;
    os << "max |sum p_i r_i - r_B| = " << worst;
    return {"steering_identity", worst <= kStateTol, os.str()};
}

inline CheckReport order_invariance(const VerifyOptions &opt) {
    RandomStream rng(opt.seed + 3);
    double worst = 0.0;
    for (std::size_t i = 0; i < opt.random_cases; ++i) {
        const TwoQubitState psi = random_two_qubit_state(rng);
        const QubitBasis basis = QubitBasis::from(random_pure_state(rng));
        const Povm povm = random_povm(rng, 2 + rng.below(3));
        const auto af = joint_distribution_alice_first(psi, basis, povm);
        const auto bf = joint_distribution_bob_first(psi, basis, povm);
        for (std::size_t k = 0; k < af.size(); ++k) {
            for (std::size_t o = 0; o < 2; ++o) {
                worst = std::max(worst, std::abs(af[k][o] - bf[k][o]));
            }
        }
    }
    std::ostringstream os;
    os << "max |P_alice_first - P_bob_first| = " << worst;
    return {"temporal_order_invariance", worst <= kStateTol, os.str()};
}

inline CheckReport closed_form_vs_oracle(const VerifyOptions &) {
    double worst = 0.0;
    const std::pair<double, double> settings[] = {{0.05, 398.0}, {0.01, 1998.0}};
    for (const auto &[r, R] : settings) {
        ProtocolParams params;
        params.r = r;
        params.R = R;
        for (int i = 0; i < 50; ++i) {
            const double theta = std::numbers::pi * i / 49.0;
            const double exact =
                enumerate_exact(FixedStateCheat::at_angle(theta, TrineLabel::A), params).g_alice;
            worst = std::max(worst, std::abs(exact - analytics::gain_total(theta, r, R).g_total));
        }
    }
    std::ostringstream os;
    os << "max |closed form - enumeration| = " << worst;
    return {"closed_form_vs_enumeration", worst <= kExactTol, os.str()};
}

inline CheckReport honest_bias(const VerifyOptions &) {
    double worst = 0.0;
    for (double r : {0.01, 0.05, 0.1, 0.3}) {
        ProtocolParams params;
        params.r = r;
        params.R = 20.0 / r - 2.0;
        worst = std::max(worst, std::abs(enumerate_exact(HonestAlice{}, params).g_alice - r));
    }
    std::ostringstream os;
    os << "max |G_A(honest) - r| = " << worst;
    return {"honest_bias_equals_r", worst <= 1e-15, os.str()};
}

inline CheckReport posterior_bound(const VerifyOptions &) {
    bool ok = true;
    double margin = 1.0;
    for (int i = 1; i <= 50; ++i) {
        const double r = 0.01 * i;
        for (bool match : {true, false}) {
            const double fu = posterior_unmeasured(r, match);
            margin = std::min(margin, fu - r / 3.0);
            ok = ok && fu >= r / 3.0;
        }
    }
    std::ostringstream os;
    os << "min f_u - r/3 over r in [0.01, 0.5] = " << margin;
    return {"posterior_lower_bound", ok, os.str()};
}

inline CheckReport zero_sum(const VerifyOptions &) {
    ProtocolParams params;
    bool ok = true;
    for (auto result : {BetResult::BobWon, BetResult::BobLost}) {
        const Verdict v{result, TrineLabel::A};
        auto s = settle(RoundKind::Normal, v, std::nullopt, params);
        ok = ok && s.alice_delta + s.bob_delta == 0.0;
        for (auto c : {CheckResult::Pass, CheckResult::Accuse}) {
            s = settle(RoundKind::Checking, v, c, params);
            ok = ok && s.alice_delta + s.bob_delta == 0.0;
        }
    }
    return {"zero_sum_settlement", ok, "all settlement branches"};
}

} // namespace verify_detail

inline std::vector<CheckReport> run_invariant_suite(const VerifyOptions &opt = {}) {
    using namespace verify_detail;
    return {povm_completeness(opt), born_vectors(opt),    bloch_round_trip(opt),
            steering_identity(opt), order_invariance(opt), closed_form_vs_oracle(opt),
            honest_bias(opt),       posterior_bound(opt),  zero_sum(opt)};
}

} // namespace qgamble
