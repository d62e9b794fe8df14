#pragma once

// Two-qubit pure states: Alice keeps the first slot, Bob holds the second.

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "qubit.hpp"

namespace qgamble {

/// Amplitudes in the order |00>, |01>, |10>, |11>; index = 2*alice + bob.
class TwoQubitState {
  public:
    explicit TwoQubitState(const std::array<Amplitude, 4> &amps) : amps_(amps) {
        double n = 0.0;
        for (const auto &a : amps_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw ValidationError("two-qubit amplitudes must be finite");
            }
            n += std::norm(a);
        }
        if (std::abs(n - 1.0) > kStateTol) {
            throw ValidationError("two-qubit state is not normalized");
        }
    }

    static TwoQubitState normalized(std::array<Amplitude, 4> amps) {
        double n = 0.0;
        for (const auto &a : amps) {
            n += std::norm(a);
        }
        n = std::sqrt(n);
        if (!(n > 1e-300)) {
            throw ValidationError("cannot normalize a zero two-qubit vector");
        }
        for (auto &a : amps) {
            a /= n;
        }
        return TwoQubitState(amps);
    }

    static TwoQubitState product(const PureState &alice, const PureState &bob) {
        return TwoQubitState({alice.a0() * bob.a0(), alice.a0() * bob.a1(),
                              alice.a1() * bob.a0(), alice.a1() * bob.a1()});
    }

    /// (|00> + |11>)/sqrt(2)
    static TwoQubitState bell_phi_plus() {
        const double h = 1.0 / std::sqrt(2.0);
        return TwoQubitState({h, 0.0, 0.0, h});
    }

    /// (|01> - |10>)/sqrt(2)
    static TwoQubitState singlet() {
        const double h = 1.0 / std::sqrt(2.0);
        return TwoQubitState({0.0, h, -h, 0.0});
    }

    [[nodiscard]] const Amplitude &amp(int alice, int bob) const {
        return amps_[static_cast<std::size_t>(2 * alice + bob)];
    }
    [[nodiscard]] const std::array<Amplitude, 4> &amplitudes() const { return amps_; }

  private:
    std::array<Amplitude, 4> amps_;
};

/// Haar-random two-qubit pure state.
inline TwoQubitState random_two_qubit_state(RandomStream &rng) {
    std::array<Amplitude, 4> amps;
    for (auto &a : amps) {
        a = {rng.normal(), rng.normal()};
    }
    return TwoQubitState::normalized(amps);
}

enum class Slot { First, Second };

inline DensityOperator partial_trace(const TwoQubitState &psi, Slot keep) {
    Matrix2 rho;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            Complex acc{};
            for (int i = 0; i < 2; ++i) {
                if (keep == Slot::Second) {
                    acc += psi.amp(i, j) * std::conj(psi.amp(i, k));
                } else {
                    acc += psi.amp(j, i) * std::conj(psi.amp(k, i));
                }
            }
            rho(j, k) = acc;
        }
    }
    return DensityOperator(rho);
}

/// A two-outcome orthonormal basis {first, second} for Alice's kept qubit.
struct QubitBasis {
    PureState first;
    PureState second;

    /// Basis {|u>, |u'>}.
    static QubitBasis from(const PureState &u) { return {u, u.orthogonal()}; }

    [[nodiscard]] const PureState &operator[](std::size_t i) const { return i == 0 ? first : second; }
};

inline void require_orthonormal(const QubitBasis &basis) {
    if (std::abs(basis.first.inner(basis.second)) > kStateTol) {
        throw ValidationError("measurement basis is not orthonormal");
    }
}

/// One branch of Alice's projective measurement: outcome probability and
/// Bob's conditional state (absent when the branch has zero weight).
struct SteeredBranch {
    double probability = 0.0;
    std::optional<PureState> bob;
};

/// Exact ensemble Alice steers at Bob's site by measuring `basis`.
inline std::array<SteeredBranch, 2> steering_ensemble(const TwoQubitState &psi,
                                                      const QubitBasis &basis) {
    require_orthonormal(basis);
    std::array<SteeredBranch, 2> out;
    for (std::size_t o = 0; o < 2; ++o) {
        const PureState &u = basis[o];
        // Bob's unnormalized state (<u| (x) 1)|psi>
        const Complex b0 = std::conj(u.a0()) * psi.amp(0, 0) + std::conj(u.a1()) * psi.amp(1, 0);
        const Complex b1 = std::conj(u.a0()) * psi.amp(0, 1) + std::conj(u.a1()) * psi.amp(1, 1);
        const double p = std::norm(b0) + std::norm(b1);
        out[o].probability = p;
        if (p > kExactTol * kExactTol) {
            out[o].bob = PureState::normalized(b0, b1);
        }
    }
    return out;
}

struct Collapse {
    std::size_t outcome = 0;
    PureState bob;
    double probability = 0.0;
};

/// Samples Alice's projective measurement on the first qubit and returns
/// Bob's post-measurement state.
inline Collapse local_measure_collapse(const TwoQubitState &psi, const QubitBasis &basis,
                                       RandomStream &rng) {
    const auto branches = steering_ensemble(psi, basis);
    const std::array<double, 2> probs{branches[0].probability, branches[1].probability};
    const std::size_t o = sample_outcome(probs, rng);
    // sample_outcome never returns a zero-mass branch
    if (!branches[o].bob) {
        throw std::logic_error("sampled a branch with vanishing conditional state");
    }
    return {o, *branches[o].bob, branches[o].probability};
}

/// Result of Bob measuring his half with a POVM, using Kraus operators
/// sqrt(E_k): the joint post-measurement state stays pure.
struct BobMeasurement {
    std::size_t outcome = 0;
    TwoQubitState post;
    double probability = 0.0;
};

namespace detail {
inline std::array<Amplitude, 4> apply_on_second(const TwoQubitState &psi, const Matrix2 &op) {
    std::array<Amplitude, 4> out;
    for (int i = 0; i < 2; ++i) {
        out[static_cast<std::size_t>(2 * i)] = op(0, 0) * psi.amp(i, 0) + op(0, 1) * psi.amp(i, 1);
        out[static_cast<std::size_t>(2 * i + 1)] =
            op(1, 0) * psi.amp(i, 0) + op(1, 1) * psi.amp(i, 1);
    }
    return out;
}

inline double squared_norm(const std::array<Amplitude, 4> &v) {
    double n = 0.0;
    for (const auto &a : v) {
        n += std::norm(a);
    }
    return n;
}
} // namespace detail

inline BobMeasurement measure_second(const TwoQubitState &psi, const Povm &povm,
                                     RandomStream &rng) {
    std::vector<std::array<Amplitude, 4>> branches;
    std::vector<double> probs;
    branches.reserve(povm.size());
    probs.reserve(povm.size());
    for (const auto &k : povm.kraus()) {
        branches.push_back(detail::apply_on_second(psi, k));
        probs.push_back(detail::squared_norm(branches.back()));
    }
    const std::size_t k = sample_outcome(probs, rng);
    return {k, TwoQubitState::normalized(branches[k]), probs[k]};
}

/// Joint outcome distribution P[k][o] (k: Bob's POVM outcome, o: Alice's
/// basis outcome) for Alice measuring `basis` on the
/// first qubit and Bob measuring `povm` on the second, computed with Alice
/// going first (steer, then Born rule on Bob's conditional state).
inline std::vector<std::array<double, 2>> joint_distribution_alice_first(const TwoQubitState &psi,
                                                                         const QubitBasis &basis,
                                                                         const Povm &povm) {
    const auto branches = steering_ensemble(psi, basis);
    std::vector<std::array<double, 2>> joint(povm.size(), {0.0, 0.0});
    for (std::size_t o = 0; o < 2; ++o) {
        if (!branches[o].bob) {
            continue;
        }
        const auto pk = born_probabilities(*branches[o].bob, povm);
        for (std::size_t k = 0; k < povm.size(); ++k) {
            joint[k][o] = branches[o].probability * pk[k];
        }
    }
    return joint;
}

/// Same distribution with Bob going first: his Kraus update, then Alice's
/// projective measurement on the post-measurement state.
inline std::vector<std::array<double, 2>> joint_distribution_bob_first(const TwoQubitState &psi,
                                                                       const QubitBasis &basis,
                                                                       const Povm &povm) {
    require_orthonormal(basis);
    std::vector<std::array<double, 2>> joint(povm.size(), {0.0, 0.0});
    for (std::size_t k = 0; k < povm.size(); ++k) {
        const auto post = detail::apply_on_second(psi, povm.kraus()[k]);
        for (std::size_t o = 0; o < 2; ++o) {
            const PureState &u = basis[o];
            const Complex b0 = std::conj(u.a0()) * post[0] + std::conj(u.a1()) * post[2];
            const Complex b1 = std::conj(u.a0()) * post[1] + std::conj(u.a1()) * post[3];
            joint[k][o] = std::norm(b0) + std::norm(b1);
        }
    }
    return joint;
}

/// Measures Bob's qubit in the computational basis and returns Alice's
/// conditional state. Used to unravel depolarizing noise on an entangled half.
inline PureState collapse_second_computational(const TwoQubitState &psi, RandomStream &rng) {
    const std::array<double, 2> probs{std::norm(psi.amp(0, 0)) + std::norm(psi.amp(1, 0)),
                                      std::norm(psi.amp(0, 1)) + std::norm(psi.amp(1, 1))};
    const auto j = static_cast<int>(sample_outcome(probs, rng));
    return PureState::normalized(psi.amp(0, j), psi.amp(1, j));
}

} // namespace qgamble
