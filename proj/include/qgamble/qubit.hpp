#pragma once

/**
 * @file
 * Single-qubit states, the trine ensemble, POVMs and Born-rule sampling.
 *
 * Axis convention: |0> sits at +z and the three trine states lie in the x-z
 * plane (y = 0), so every trine amplitude is real.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace qgamble {

using Amplitude = Complex;

enum class TrineLabel : std::uint8_t { A = 0, B = 1, C = 2 };

inline constexpr std::array<TrineLabel, 3> kTrineLabels{TrineLabel::A, TrineLabel::B,
                                                        TrineLabel::C};

constexpr std::size_t index_of(TrineLabel l) { return static_cast<std::size_t>(l); }

constexpr TrineLabel label_at(std::size_t i) { return kTrineLabels.at(i); }

constexpr char to_char(TrineLabel l) { return static_cast<char>('a' + index_of(l)); }

inline std::string to_string(TrineLabel l) { return std::string(1, to_char(l)); }

inline std::optional<TrineLabel> try_parse_label(std::string_view s) {
    if (s == "a" || s == "A") {
        return TrineLabel::A;
    }
    if (s == "b" || s == "B") {
        return TrineLabel::B;
    }
    if (s == "c" || s == "C") {
        return TrineLabel::C;
    }
    return std::nullopt;
}

inline TrineLabel parse_label(std::string_view s) {
    if (auto l = try_parse_label(s)) {
        return *l;
    }
    throw ValidationError("trine label must be one of a, b, c; got '" + std::string(s) + "'");
}

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double dot(const BlochVector &o) const { return x * o.x + y * o.y + z * o.z; }
    [[nodiscard]] double norm() const { return std::sqrt(dot(*this)); }

    friend BlochVector operator+(const BlochVector &a, const BlochVector &b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend BlochVector operator-(const BlochVector &a, const BlochVector &b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend BlochVector operator*(double s, const BlochVector &v) {
        return {s * v.x, s * v.y, s * v.z};
    }
};

/// Angle between two Bloch directions, in [0, pi].
inline double bloch_angle(const BlochVector &u, const BlochVector &v) {
    const double c = u.dot(v) / (u.norm() * v.norm());
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Normalized single-qubit pure state a0|0> + a1|1>.
class PureState {
  public:
    PureState(Amplitude a0, Amplitude a1) : a0_(a0), a1_(a1) {
        if (!std::isfinite(a0.real()) || !std::isfinite(a0.imag()) ||
            !std::isfinite(a1.real()) || !std::isfinite(a1.imag())) {
            throw ValidationError("pure state amplitudes must be finite");
        }
        if (std::abs(std::norm(a0) + std::norm(a1) - 1.0) > kStateTol) {
            throw ValidationError("pure state is not normalized");
        }
    }

    /// Normalizes (a0, a1); throws if the vector is numerically zero.
    static PureState normalized(Amplitude a0, Amplitude a1) {
        const double n = std::sqrt(std::norm(a0) + std::norm(a1));
        if (!(n > 1e-300)) {
            throw ValidationError("cannot normalize a zero vector");
        }
        return {a0 / n, a1 / n};
    }

    static PureState zero() { return {1.0, 0.0}; }
    static PureState one() { return {0.0, 1.0}; }

    [[nodiscard]] const Amplitude &a0() const { return a0_; }
    [[nodiscard]] const Amplitude &a1() const { return a1_; }

    /// <this|other>
    [[nodiscard]] Complex inner(const PureState &other) const {
        return std::conj(a0_) * other.a0_ + std::conj(a1_) * other.a1_;
    }

    /// The state orthogonal to this one, (-a1*, a0*).
    [[nodiscard]] PureState orthogonal() const { return {-std::conj(a1_), std::conj(a0_)}; }

    [[nodiscard]] Matrix2 projector() const { return Matrix2::outer(a0_, a1_, a0_, a1_); }

    /// <this|M|this>, real part.
    [[nodiscard]] double expectation(const Matrix2 &op) const {
        const Complex v0 = op.m[0] * a0_ + op.m[1] * a1_;
        const Complex v1 = op.m[2] * a0_ + op.m[3] * a1_;
        return (std::conj(a0_) * v0 + std::conj(a1_) * v1).real();
    }

  private:
    Amplitude a0_;
    Amplitude a1_;
};

/// |<s|t>|^2
inline double fidelity(const PureState &s, const PureState &t) { return std::norm(s.inner(t)); }

inline std::array<PureState, 3> trine_states() {
    const double h = std::sqrt(3.0) / 2.0;
    return {PureState{1.0, 0.0}, PureState{0.5, h}, PureState{0.5, -h}};
}

inline PureState trine_state(TrineLabel l) { return trine_states()[index_of(l)]; }

inline BlochVector bloch_from_state(const PureState &s) {
    const Complex c = std::conj(s.a0()) * s.a1();
    return {2.0 * c.real(), 2.0 * c.imag(), std::norm(s.a0()) - std::norm(s.a1())};
}

inline PureState state_from_bloch(const BlochVector &v) {
    if (std::abs(v.norm() - 1.0) > kStateTol) {
        throw ValidationError("state_from_bloch needs a unit Bloch vector");
    }
    const double theta = std::acos(std::clamp(v.z / v.norm(), -1.0, 1.0));
    const double phi = std::atan2(v.y, v.x);
    return PureState::normalized(std::cos(theta / 2.0),
                                 std::polar(std::sin(theta / 2.0), phi));
}

inline BlochVector trine_bloch(TrineLabel l) { return bloch_from_state(trine_state(l)); }

/// 2x2 density operator: Hermitian, unit trace, PSD.
class DensityOperator {
  public:
    explicit DensityOperator(const Matrix2 &rho) : rho_(rho) {
        for (const auto &x : rho.m) {
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
                throw ValidationError("density operator entries must be finite");
            }
        }
        if (!rho.is_hermitian(kStateTol)) {
            throw ValidationError("density operator is not Hermitian");
        }
        if (std::abs(rho.trace() - Complex{1.0}) > kStateTol) {
            throw ValidationError("density operator trace is not 1");
        }
        if (rho.hermitian_eigenvalues()[0] < -kStateTol) {
            throw ValidationError("density operator has a negative eigenvalue");
        }
    }

    explicit DensityOperator(const PureState &s) : rho_(s.projector()) {}

    static DensityOperator maximally_mixed() {
        return DensityOperator(Matrix2::identity() * Complex{0.5});
    }

    /// rho = (1 + v.sigma)/2 for |v| <= 1.
    static DensityOperator from_bloch(const BlochVector &v) {
        if (v.norm() > 1.0 + kStateTol) {
            throw ValidationError("Bloch vector longer than 1");
        }
        Matrix2 rho = Matrix2::identity() + kPauliX * Complex{v.x} + kPauliY * Complex{v.y} +
                      kPauliZ * Complex{v.z};
        return DensityOperator(rho * Complex{0.5});
    }

    [[nodiscard]] const Matrix2 &matrix() const { return rho_; }

    [[nodiscard]] BlochVector bloch() const {
        return {2.0 * rho_.m[1].real(), -2.0 * rho_.m[1].imag(),
                rho_.m[0].real() - rho_.m[3].real()};
    }

    /// Tr(M rho), real part.
    [[nodiscard]] double expectation(const Matrix2 &op) const { return (op * rho_).trace().real(); }

  private:
    Matrix2 rho_;
};

inline DensityOperator mixture_density(std::span<const double> weights,
                                       std::span<const PureState> states) {
    if (weights.size() != states.size()) {
        throw ValidationError("mixture weights and states differ in length");
    }
    if (weights.empty()) {
        throw ValidationError("mixture needs at least one component");
    }
    double total = 0.0;
    Matrix2 rho;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) {
            throw ValidationError("mixture weight must be non-negative");
        }
        total += weights[i];
        rho += states[i].projector() * Complex{weights[i]};
    }
    if (std::abs(total - 1.0) > kStateTol) {
        throw ValidationError("mixture weights must sum to 1");
    }
    return DensityOperator(rho);
}

/// Reason the elements fail to form a POVM, or nullopt if they do.
inline std::optional<std::string> povm_violation(std::span<const Matrix2> elements,
                                                 double tol = kStateTol) {
    if (elements.empty()) {
        return "POVM has no elements";
    }
    Matrix2 sum;
    for (std::size_t k = 0; k < elements.size(); ++k) {
        if (!elements[k].is_psd(tol)) {
            return "element " + std::to_string(k) + " is not PSD";
        }
        sum += elements[k];
    }
    if (sum.max_abs_diff(Matrix2::identity()) > tol) {
        return "elements do not sum to the identity";
    }
    return std::nullopt;
}

/// Positive operator valued measurement with labeled outcomes.
class Povm {
  public:
    Povm(std::vector<Matrix2> elements, std::vector<std::string> labels)
        : elements_(std::move(elements)), labels_(std::move(labels)) {
        if (labels_.size() != elements_.size()) {
            throw ValidationError("POVM labels and elements differ in length");
        }
        if (auto why = povm_violation(elements_)) {
            throw ValidationError("invalid POVM: " + *why);
        }
        kraus_.reserve(elements_.size());
        for (const auto &e : elements_) {
            kraus_.push_back(sqrt_psd(e));
        }
    }

    [[nodiscard]] std::size_t size() const { return elements_.size(); }
    [[nodiscard]] const std::vector<Matrix2> &elements() const { return elements_; }
    [[nodiscard]] const std::vector<std::string> &labels() const { return labels_; }
    /// sqrt(E_k), the Kraus operators used for post-measurement states.
    [[nodiscard]] const std::vector<Matrix2> &kraus() const { return kraus_; }

  private:
    std::vector<Matrix2> elements_;
    std::vector<std::string> labels_;
    std::vector<Matrix2> kraus_;
};

/// The minimum-error trine measurement {(2/3)|a><a|, (2/3)|b><b|, (2/3)|c><c|}.
inline const Povm &optimal_povm() {
    static const Povm povm = [] {
        std::vector<Matrix2> elems;
        for (const auto &s : trine_states()) {
            elems.push_back(s.projector() * Complex{2.0 / 3.0});
        }
        return Povm(std::move(elems), {"a", "b", "c"});
    }();
    return povm;
}

/// Orthonormal two-outcome projective measurement {|u><u|, |u'><u'|}.
inline Povm projective_povm(const PureState &u) {
    return Povm({u.projector(), u.orthogonal().projector()}, {"0", "1"});
}

namespace detail {
inline std::vector<double> finish_probabilities(std::vector<double> p) {
    for (auto &x : p) {
        if (x < -kExactTol) {
            throw ValidationError("Born probability below zero");
        }
        x = std::clamp(x, 0.0, 1.0);
    }
    return p;
}
} // namespace detail

inline std::vector<double> born_probabilities(const DensityOperator &rho, const Povm &m) {
    std::vector<double> p;
    p.reserve(m.size());
    for (const auto &e : m.elements()) {
        p.push_back(rho.expectation(e));
    }
    return detail::finish_probabilities(std::move(p));
}

inline std::vector<double> born_probabilities(const PureState &s, const Povm &m) {
    std::vector<double> p;
    p.reserve(m.size());
    for (const auto &e : m.elements()) {
        p.push_back(s.expectation(e));
    }
    return detail::finish_probabilities(std::move(p));
}

/// Draws index k with probability probs[k] using fixed-order cumulative
/// intervals. Rounding residue goes to the last element with positive mass,
/// so zero-probability outcomes are never returned.
inline std::size_t sample_outcome(std::span<const double> probs, RandomStream &rng) {
    if (probs.empty()) {
        throw ValidationError("cannot sample from an empty distribution");
    }
    double total = 0.0;
    std::size_t last_positive = probs.size();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] < -kStateTol || !std::isfinite(probs[k])) {
            throw ValidationError("negative or non-finite probability");
        }
        if (probs[k] > 0.0) {
            last_positive = k;
        }
        total += probs[k];
    }
    if (std::abs(total - 1.0) > kStateTol) {
        throw ValidationError("probabilities must sum to 1");
    }
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) {
            continue;
        }
        cumulative += probs[k];
        if (u < cumulative) {
            return k;
        }
    }
    return last_positive;
}

enum class CheckOutcome { Pass, Fail };

/// Probability that the verification measurement on `claimed` reports the
/// orthogonal outcome |claimed'>. Computed directly from |<claimed'|s>|^2 so
/// an exact eigenstate gives exactly zero.
inline double check_fail_probability(const PureState &s, TrineLabel claimed) {
    return std::min(1.0, fidelity(trine_state(claimed).orthogonal(), s));
}

inline double check_fail_probability(const DensityOperator &rho, TrineLabel claimed) {
    const double p = rho.expectation(trine_state(claimed).orthogonal().projector());
    return std::clamp(p, 0.0, 1.0);
}

/// Verification measurement {|alpha><alpha|, |alpha'><alpha'|}.
inline CheckOutcome project_check(const PureState &s, TrineLabel claimed, RandomStream &rng) {
    const double fail = check_fail_probability(s, claimed);
    const std::array<double, 2> probs{1.0 - fail, fail};
    return sample_outcome(probs, rng) == 0 ? CheckOutcome::Pass : CheckOutcome::Fail;
}

/// rho -> (1 - lambda) rho + lambda I/2
inline DensityOperator depolarize(const DensityOperator &rho, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ValidationError("depolarizing strength must lie in [0, 1]");
    }
    return DensityOperator(rho.matrix() * Complex{1.0 - lambda} +
                           Matrix2::identity() * Complex{lambda / 2.0});
}

/// Haar-random pure state.
inline PureState random_pure_state(RandomStream &rng) {
    return PureState::normalized({rng.normal(), rng.normal()}, {rng.normal(), rng.normal()});
}

/// Random n-outcome POVM: random PSD matrices A_k rescaled as
/// S^{-1/2} A_k S^{-1/2} with S = sum A_k.
inline Povm random_povm(RandomStream &rng, std::size_t n) {
    std::vector<Matrix2> raw;
    Matrix2 sum;
    for (std::size_t k = 0; k < n; ++k) {
        const PureState v = random_pure_state(rng);
        Matrix2 a = v.projector() * Complex{rng.uniform() + 0.05};
        sum += a;
        raw.push_back(a);
    }
    const Matrix2 w = inverse(sqrt_psd(sum));
    std::vector<Matrix2> elems;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < n; ++k) {
        Matrix2 e = w * raw[k] * w;
        // symmetrize away rounding
        e = (e + e.adjoint()) * Complex{0.5};
        elems.push_back(e);
        labels.push_back(std::to_string(k));
    }
    // push any completeness residue into the last element
    Matrix2 total;
    for (const auto &e : elems) {
        total += e;
    }
    elems.back() += Matrix2::identity() - total;
    return Povm(std::move(elems), std::move(labels));
}

} // namespace qgamble
