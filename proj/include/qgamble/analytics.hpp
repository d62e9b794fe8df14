#pragma once

/**
 * @file
 * Closed-form expected gains for a sender whose state sits at Bloch angle
 * theta_a from the trine state it claims. Honest Bob, penalty R, checking
 * rate r.
 */

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace qgamble::analytics {

namespace detail {
inline void require_angle(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw ValidationError("theta_a must lie in [0, pi]");
    }
}

inline void require_rates(double r, double R) {
    if (!(r >= 0.0 && r < 1.0)) {
        throw ValidationError("checking rate r must satisfy 0 <= r < 1");
    }
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw ValidationError("penalty R must be positive");
    }
}

/// cos^2(theta/2), the overlap |<a|i>|^2
inline double overlap(double theta) {
    const double c = std::cos(theta / 2.0);
    return c * c;
}
} // namespace detail

struct GainBreakdown {
    double g_normal = 0.0;
    double g_checking = 0.0;
    double g_total = 0.0;
};

/// Probability that honest Bob guesses the claimed label: (2/3) cos^2(theta/2).
inline double p_correct(double theta_a) {
    detail::require_angle(theta_a);
    return 2.0 / 3.0 * detail::overlap(theta_a);
}

/// Alice's expected gain in a normal round: 2 (1 - cos^2(theta/2)).
inline double gain_normal(double theta_a) {
    detail::require_angle(theta_a);
    return 2.0 * (1.0 - detail::overlap(theta_a));
}

/// Alice's expected gain in a checking round: -R (1 - cos^2) + cos^2.
inline double gain_checking(double theta_a, double R) {
    detail::require_angle(theta_a);
    detail::require_rates(0.0, R);
    const double c2 = detail::overlap(theta_a);
    return -R * (1.0 - c2) + c2;
}

/// {2 - r(R+2)} (1 - cos^2) + r cos^2, alongside its normal/checking parts.
inline GainBreakdown gain_total(double theta_a, double r, double R) {
    detail::require_angle(theta_a);
    detail::require_rates(r, R);
    const double c2 = detail::overlap(theta_a);
    return {gain_normal(theta_a), gain_checking(theta_a, R),
            (2.0 - r * (R + 2.0)) * (1.0 - c2) + r * c2};
}

/// Alice's best angle. Writing k = r(R+2), the total gain is
/// (2 - k) + cos^2(theta/2) (k - 2 + r), affine in cos^2, so the maximum sits
/// at an endpoint: theta = 0 when k - 2 + r >= 0 (ties go to 0), else pi.
inline double optimal_cheat_angle(double r, double R) {
    detail::require_rates(r, R);
    return r * (R + 2.0) - 2.0 + r >= 0.0 ? 0.0 : std::numbers::pi;
}

/// A point on the bias/penalty curve r(R+2) = k with bias delta = r.
struct TradeoffPoint {
    double delta = 0.0;
    double R = 0.0;
    double k = 0.0;
};

/// Penalty that holds the bias at delta for security constant k > 2.
inline double penalty_for_bias(double delta, double k) {
    if (!(k > 2.0)) {
        throw ValidationError("security constant k must exceed 2");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ValidationError("bias must lie in (0, 1)");
    }
    return k / delta - 2.0;
}

inline TradeoffPoint tradeoff_point(double delta, double k) {
    return {delta, penalty_for_bias(delta, k), k};
}

} // namespace qgamble::analytics
