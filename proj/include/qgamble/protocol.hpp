#pragma once

/**
 * @file
 * Protocol parameters, round messages, coin settlement, the running ledger
 * and the noise abort rule.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "errors.hpp"
#include "qubit.hpp"

namespace qgamble {

struct ProtocolParams {
    /// Bob's optimal guessing probability p = 2/3, kept as a ratio so the
    /// losing payout p/(1-p) is exactly 2.
    static constexpr double kSuccessNumerator = 2.0;
    static constexpr double kSuccessDenominator = 3.0;

    double r = 0.05;            ///< checking rate
    double R = 398.0;           ///< penalty paid by Alice on an accusation
    double noise_lambda = 0.0;  ///< depolarizing strength in transit
    double abort_threshold = 1.0;  ///< accusation rate above which Bob aborts; 1 disables
    std::uint64_t abort_min_checks = 1000;

    static constexpr double p() { return kSuccessNumerator / kSuccessDenominator; }
    static constexpr double win_payout() { return 1.0; }
    static constexpr double lose_payout() {
        return kSuccessNumerator / (kSuccessDenominator - kSuccessNumerator);
    }

    void validate() const {
        if (!(r >= 0.0 && r < 1.0)) {
            throw ValidationError("checking rate r must satisfy 0 <= r < 1");
        }
        if (!(R > 0.0) || !std::isfinite(R)) {
            throw ValidationError("penalty R must be positive and finite");
        }
        if (!(noise_lambda >= 0.0 && noise_lambda <= 1.0)) {
            throw ValidationError("noise lambda must lie in [0, 1]");
        }
        if (!(abort_threshold >= 0.0 && abort_threshold <= 1.0)) {
            throw ValidationError("abort threshold must lie in [0, 1]");
        }
        if (abort_min_checks < 1) {
            throw ValidationError("abort_min_checks must be at least 1");
        }
    }
};

static_assert(ProtocolParams::lose_payout() == 2.0);

enum class RoundKind { Normal, Checking };
enum class BetResult { BobWon, BobLost };
enum class CheckResult { Pass, Accuse };

inline const char *to_string(RoundKind k) { return k == RoundKind::Normal ? "normal" : "checking"; }
inline const char *to_string(BetResult b) { return b == BetResult::BobWon ? "bob_won" : "bob_lost"; }
inline const char *to_string(CheckResult c) { return c == CheckResult::Pass ? "pass" : "accuse"; }

/// Alice's announcement. The claimed label is carried even when Bob lost,
/// otherwise a bare "lost" would not say which state the check must target.
struct Verdict {
    BetResult result = BetResult::BobLost;
    TrineLabel claimed = TrineLabel::A;
};

/// What Alice put on the wire, for transcripts. `index` is the trine label
/// (honest), the mixture component, or 0.
struct SentDescriptor {
    enum class Kind : std::uint8_t { Honest, Fixed, Mixture, Entangled };
    Kind kind = Kind::Honest;
    std::uint32_t index = 0;
};

inline std::string to_string(const SentDescriptor &d) {
    switch (d.kind) {
    case SentDescriptor::Kind::Honest:
        return "trine:" + to_string(label_at(d.index));
    case SentDescriptor::Kind::Fixed:
        return "fixed";
    case SentDescriptor::Kind::Mixture:
        return "mixture:" + std::to_string(d.index);
    case SentDescriptor::Kind::Entangled:
        return "entangled";
    }
    return "unknown";
}

struct RoundTranscript {
    RoundKind kind = RoundKind::Normal;
    SentDescriptor sent;
    TrineLabel bob_guess = TrineLabel::A;
    Verdict verdict;
    std::optional<CheckResult> check;
    double alice_delta = 0.0;
    double bob_delta = 0.0;
};

struct Settlement {
    double alice_delta = 0.0;
    double bob_delta = 0.0;
};

/// Coin transfer for one round. An accusation replaces the win/lose payment.
inline Settlement settle(RoundKind kind, const Verdict &verdict, std::optional<CheckResult> check,
                         const ProtocolParams &params) {
    if (kind == RoundKind::Normal && check.has_value()) {
        throw ValidationError("normal rounds carry no check result");
    }
    if (kind == RoundKind::Checking && !check.has_value()) {
        throw ValidationError("checking rounds need a check result");
    }
    double to_bob = 0.0;
    if (check == CheckResult::Accuse) {
        to_bob = params.R;
    } else if (verdict.result == BetResult::BobWon) {
        to_bob = ProtocolParams::win_payout();
    } else {
        to_bob = -ProtocolParams::lose_payout();
    }
    return {-to_bob, to_bob};
}

/// Running totals over played rounds. alice_total == -bob_total always.
struct Ledger {
    std::uint64_t rounds = 0;
    double alice_total = 0.0;
    double bob_total = 0.0;
    std::uint64_t accusations = 0;
    std::uint64_t checks = 0;
    bool aborted = false;

    void record(const RoundTranscript &t) {
        ++rounds;
        alice_total += t.alice_delta;
        bob_total += t.bob_delta;
        if (t.kind == RoundKind::Checking) {
            ++checks;
            if (t.check == CheckResult::Accuse) {
                ++accusations;
            }
        }
    }
};

enum class MonitorDecision { Continue, Abort };

/// Bob quits once enough checks have accumulated and the accusation rate
/// exceeds what channel noise alone explains.
inline MonitorDecision abort_monitor(const Ledger &ledger, const ProtocolParams &params) {
    if (ledger.checks < params.abort_min_checks || ledger.checks == 0) {
        return MonitorDecision::Continue;
    }
    const double rate = static_cast<double>(ledger.accusations) / static_cast<double>(ledger.checks);
    return rate > params.abort_threshold ? MonitorDecision::Abort : MonitorDecision::Continue;
}

/// An honest sender under depolarizing noise lambda is accused at rate
/// lambda/2; the threshold is `factor` times that, clamped to [0, 1].
inline double calibrated_abort_threshold(double lambda, double factor = 3.0) {
    if (!(lambda >= 0.0 && lambda <= 1.0) || !(factor > 0.0)) {
        throw ValidationError("invalid noise level or calibration factor");
    }
    return std::min(1.0, factor * lambda / 2.0);
}

} // namespace qgamble
