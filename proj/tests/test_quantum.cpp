#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <qgamble/qgamble.hpp>

using namespace qgamble;
using Catch::Approx;

namespace {

/// |p_hat - p| <= 4 binomial standard errors.
bool within_4sigma(std::uint64_t hits, std::uint64_t n, double p) {
    const double nd = static_cast<double>(n);
    const double sigma = std::sqrt(p * (1.0 - p) / nd);
    return std::abs(static_cast<double>(hits) / nd - p) <= 4.0 * sigma;
}

PureState at_angle(double theta) { return FixedStateCheat::at_angle(theta, TrineLabel::A).state; }

} // namespace

TEST_CASE("trine states have the fixed real amplitudes", "[qubit]") {
    const auto t = trine_states();
    CHECK(t[0].a0() == Complex{1.0});
    CHECK(t[0].a1() == Complex{0.0});
    CHECK(t[1].a0().real() == Approx(0.5).margin(1e-15));
    CHECK(t[1].a1().real() == Approx(std::sqrt(3.0) / 2.0).margin(1e-15));
    CHECK(t[2].a1().real() == Approx(-std::sqrt(3.0) / 2.0).margin(1e-15));
    for (const auto &s : t) {
        CHECK(s.a0().imag() == 0.0);
        CHECK(s.a1().imag() == 0.0);
    }
    // mutual Bloch angle 2 pi / 3, so |<i|j>|^2 = 1/4
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            CHECK(fidelity(t[i], t[j]) == Approx(0.25).margin(1e-15));
            CHECK(bloch_angle(bloch_from_state(t[i]), bloch_from_state(t[j])) ==
                  Approx(2.0 * std::numbers::pi / 3.0).margin(1e-12));
        }
    }
}

TEST_CASE("Bloch conversion anchors and round trip", "[qubit]") {
    const BlochVector z = bloch_from_state(PureState::zero());
    CHECK(z.x == 0.0);
    CHECK(z.y == 0.0);
    CHECK(z.z == 1.0);

    const BlochVector b = bloch_from_state(trine_state(TrineLabel::B));
    CHECK(b.x == Approx(std::sqrt(3.0) / 2.0).margin(1e-15));
    CHECK(b.y == Approx(0.0).margin(1e-15));
    CHECK(b.z == Approx(-0.5).margin(1e-15));

    RandomStream rng(11);
    for (int i = 0; i < 1000; ++i) {
        const PureState s = random_pure_state(rng);
        CHECK(fidelity(s, state_from_bloch(bloch_from_state(s))) == Approx(1.0).margin(1e-9));
    }
    CHECK_THROWS_AS(state_from_bloch({0.5, 0.0, 0.0}), ValidationError);
}

TEST_CASE("pure states reject unnormalized amplitudes", "[qubit]") {
    CHECK_THROWS_AS(PureState(1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(PureState::normalized(0.0, 0.0), ValidationError);
    const PureState s = PureState::normalized(3.0, 4.0);
    CHECK(std::norm(s.a0()) + std::norm(s.a1()) == Approx(1.0).margin(1e-15));
}

TEST_CASE("mixture_density examples", "[qubit]") {
    const std::array<double, 2> half{0.5, 0.5};
    const std::array<PureState, 2> zo{PureState::zero(), PureState::one()};
    const BlochVector v = mixture_density(half, zo).bloch();
    CHECK(v.norm() == Approx(0.0).margin(1e-15));

    const std::array<double, 1> one{1.0};
    const std::array<PureState, 1> b{trine_state(TrineLabel::B)};
    const DensityOperator rho = mixture_density(one, b);
    CHECK(rho.matrix().max_abs_diff(trine_state(TrineLabel::B).projector()) < 1e-15);

    const std::array<double, 3> third{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    const auto t = trine_states();
    CHECK(mixture_density(third, t).bloch().norm() < 1e-15);

    const std::array<double, 2> bad{0.5, 0.6};
    CHECK_THROWS_AS(mixture_density(bad, zo), ValidationError);
    const std::array<double, 2> negative{1.5, -0.5};
    CHECK_THROWS_AS(mixture_density(negative, zo), ValidationError);
}

TEST_CASE("optimal POVM is complete and labelled a, b, c", "[povm]") {
    const Povm &m = optimal_povm();
    REQUIRE(m.size() == 3);
    Matrix2 sum;
    for (const auto &e : m.elements()) {
        sum += e;
        CHECK(e.is_psd());
    }
    CHECK(sum.max_abs_diff(Matrix2::identity()) <= 1e-12);
    CHECK(m.labels() == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("POVM validation rejects incomplete or non-PSD sets", "[povm]") {
    std::vector<Matrix2> elems = optimal_povm().elements();
    elems[0](0, 0) += 1e-6;
    CHECK(povm_violation(elems, 1e-12).has_value());
    CHECK_THROWS_AS(Povm(elems, {"a", "b", "c"}), ValidationError);

    const std::vector<Matrix2> not_psd{kPauliZ, Matrix2::identity() - kPauliZ};
    CHECK(povm_violation(not_psd, 1e-12).has_value());
}

TEST_CASE("Born probabilities examples", "[povm]") {
    const auto p = born_probabilities(trine_state(TrineLabel::A), optimal_povm());
    REQUIRE(p.size() == 3);
    CHECK(p[0] == Approx(2.0 / 3.0).margin(1e-15));
    CHECK(p[1] == Approx(1.0 / 6.0).margin(1e-15));
    CHECK(p[2] == Approx(1.0 / 6.0).margin(1e-15));

    const auto q = born_probabilities(DensityOperator::maximally_mixed(), optimal_povm());
    for (double x : q) {
        CHECK(x == Approx(1.0 / 3.0).margin(1e-15));
    }

    // uniform honest input: correct-guess probability 2/3
    double correct = 0.0;
    for (auto l : kTrineLabels) {
        correct += born_probabilities(trine_state(l), optimal_povm())[index_of(l)] / 3.0;
    }
    CHECK(correct == Approx(2.0 / 3.0).margin(1e-12));
}

TEST_CASE("Born probability vectors are valid for random states and POVMs", "[povm]") {
    RandomStream rng(5);
    for (int i = 0; i < 500; ++i) {
        const Povm m = random_povm(rng, 2 + rng.below(4));
        const PureState s = random_pure_state(rng);
        for (const auto &p : {born_probabilities(s, m), born_probabilities(DensityOperator(s), m)}) {
            double sum = 0.0;
            for (double x : p) {
                CHECK(x >= 0.0);
                CHECK(x <= 1.0);
                sum += x;
            }
            CHECK(sum == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("sample_outcome examples", "[sampling]") {
    RandomStream rng(3);
    const std::array<double, 3> certain{1.0, 0.0, 0.0};
    for (int i = 0; i < 10000; ++i) {
        CHECK(sample_outcome(certain, rng) == 0);
    }

    const std::array<double, 3> probs{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0};
    std::array<std::uint64_t, 3> hits{};
    const std::uint64_t n = 1000000;
    for (std::uint64_t i = 0; i < n; ++i) {
        ++hits[sample_outcome(probs, rng)];
    }
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(within_4sigma(hits[k], n, probs[k]));
    }

    RandomStream a(99);
    RandomStream b(99);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(sample_outcome(probs, a) == sample_outcome(probs, b));
    }

    const std::array<double, 2> bad{0.5, 0.4};
    CHECK_THROWS_AS(sample_outcome(bad, rng), ValidationError);
    CHECK_THROWS_AS(sample_outcome(std::span<const double>{}, rng), ValidationError);
}

TEST_CASE("sample_outcome never returns a zero-mass outcome", "[sampling]") {
    RandomStream rng(8);
    const std::array<double, 4> probs{0.25, 0.0, 0.75, 0.0};
    for (int i = 0; i < 100000; ++i) {
        const auto k = sample_outcome(probs, rng);
        REQUIRE((k == 0 || k == 2));
    }
}

TEST_CASE("project_check examples", "[check]") {
    RandomStream rng(17);
    for (int i = 0; i < 100000; ++i) {
        REQUIRE(project_check(trine_state(TrineLabel::A), TrineLabel::A, rng) == CheckOutcome::Pass);
    }
    CHECK(check_fail_probability(trine_state(TrineLabel::A), TrineLabel::A) == 0.0);
    CHECK(check_fail_probability(trine_state(TrineLabel::B), TrineLabel::A) ==
          Approx(0.75).margin(1e-15));

    const std::uint64_t n = 100000;
    std::uint64_t fails = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        fails += project_check(trine_state(TrineLabel::B), TrineLabel::A, rng) == CheckOutcome::Fail;
    }
    CHECK(within_4sigma(fails, n, 0.75));

    for (double theta : {0.3, 1.0, 2.0, 3.0}) {
        const double expected = 1.0 - std::pow(std::cos(theta / 2.0), 2);
        CHECK(check_fail_probability(at_angle(theta), TrineLabel::A) ==
              Approx(expected).margin(1e-12));
        std::uint64_t f = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            f += project_check(at_angle(theta), TrineLabel::A, rng) == CheckOutcome::Fail;
        }
        CHECK(within_4sigma(f, n, expected));
    }
}

TEST_CASE("partial trace examples", "[two-qubit]") {
    const DensityOperator bell = partial_trace(TwoQubitState::bell_phi_plus(), Slot::Second);
    CHECK(bell.matrix().max_abs_diff(DensityOperator::maximally_mixed().matrix()) < 1e-15);

    const TwoQubitState prod =
        TwoQubitState::product(trine_state(TrineLabel::A), trine_state(TrineLabel::B));
    CHECK(partial_trace(prod, Slot::Second).matrix().max_abs_diff(
              trine_state(TrineLabel::B).projector()) < 1e-15);
    CHECK(partial_trace(prod, Slot::First).matrix().max_abs_diff(
              trine_state(TrineLabel::A).projector()) < 1e-15);

    CHECK_THROWS_AS(TwoQubitState({Complex{1.0}, Complex{1.0}, Complex{}, Complex{}}),
                    ValidationError);
}

TEST_CASE("local_measure_collapse examples", "[two-qubit]") {
    const PureState a = trine_state(TrineLabel::A);
    const QubitBasis basis = QubitBasis::from(a);
    const auto branches = steering_ensemble(TwoQubitState::singlet(), basis);
    for (const auto &b : branches) {
        CHECK(b.probability == Approx(0.5).margin(1e-15));
    }
    // singlet: Alice finding |a> leaves Bob in |a'>, and vice versa
    CHECK(fidelity(*branches[0].bob, a.orthogonal()) == Approx(1.0).margin(1e-12));
    CHECK(fidelity(*branches[1].bob, a) == Approx(1.0).margin(1e-12));

    RandomStream rng(21);
    std::uint64_t zeros = 0;
    const std::uint64_t n = 100000;
    for (std::uint64_t i = 0; i < n; ++i) {
        const Collapse c = local_measure_collapse(TwoQubitState::singlet(), basis, rng);
        zeros += c.outcome == 0;
        const PureState expected = c.outcome == 0 ? a.orthogonal() : a;
        REQUIRE(fidelity(c.bob, expected) == Approx(1.0).margin(1e-12));
    }
    CHECK(within_4sigma(zeros, n, 0.5));

    const TwoQubitState prod = TwoQubitState::product(a, trine_state(TrineLabel::B));
    for (int i = 0; i < 1000; ++i) {
        const Collapse c = local_measure_collapse(prod, basis, rng);
        REQUIRE(c.outcome == 0);
        REQUIRE(c.probability == Approx(1.0).margin(1e-15));
        REQUIRE(fidelity(c.bob, trine_state(TrineLabel::B)) == Approx(1.0).margin(1e-12));
    }

    const QubitBasis skew{a, trine_state(TrineLabel::B)};
    CHECK_THROWS_AS(steering_ensemble(prod, skew), ValidationError);
}

TEST_CASE("steering identity holds for random states and bases", "[two-qubit]") {
    RandomStream rng(2024);
    for (int i = 0; i < 100; ++i) {
        const TwoQubitState psi = random_two_qubit_state(rng);
        const QubitBasis basis = QubitBasis::from(random_pure_state(rng));
        BlochVector avg;
        double total = 0.0;
        for (const auto &b : steering_ensemble(psi, basis)) {
            total += b.probability;
            if (b.bob) {
                avg = avg + b.probability * bloch_from_state(*b.bob);
            }
        }
        CHECK(total == Approx(1.0).margin(1e-12));
        CHECK((avg - partial_trace(psi, Slot::Second).bloch()).norm() <= 1e-9);
    }
}

TEST_CASE("joint distribution does not depend on who measures first", "[two-qubit]") {
    RandomStream rng(77);
    for (int i = 0; i < 100; ++i) {
        const TwoQubitState psi = random_two_qubit_state(rng);
        const QubitBasis basis = QubitBasis::from(random_pure_state(rng));
        const Povm povm = i % 2 == 0 ? optimal_povm() : random_povm(rng, 3);
        const auto af = joint_distribution_alice_first(psi, basis, povm);
        const auto bf = joint_distribution_bob_first(psi, basis, povm);
        REQUIRE(af.size() == bf.size());
        double total = 0.0;
        for (std::size_t k = 0; k < af.size(); ++k) {
            for (std::size_t o = 0; o < 2; ++o) {
                CHECK(std::abs(af[k][o] - bf[k][o]) <= 1e-9);
                total += af[k][o];
            }
        }
        CHECK(total == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("Kraus measurement on Bob's half leaves Alice's marginal unchanged", "[two-qubit]") {
    RandomStream rng(31);
    for (int i = 0; i < 50; ++i) {
        const TwoQubitState psi = random_two_qubit_state(rng);
        const DensityOperator before = partial_trace(psi, Slot::First);
        Matrix2 after;
        // average over Bob's outcomes, weighted by their probabilities
        for (const auto &k : optimal_povm().kraus()) {
            auto v = detail::apply_on_second(psi, k);
            const double p = detail::squared_norm(v);
            if (p > 0.0) {
                const TwoQubitState post = TwoQubitState::normalized(v);
                Matrix2 m = partial_trace(post, Slot::First).matrix();
                m *= Complex{p};
                after += m;
            }
        }
        CHECK(after.max_abs_diff(before.matrix()) < 1e-12);
    }
}

TEST_CASE("depolarize examples", "[noise]") {
    const DensityOperator b(trine_state(TrineLabel::B));
    CHECK(depolarize(b, 0.0).matrix().max_abs_diff(b.matrix()) == 0.0);
    CHECK(depolarize(b, 1.0).matrix().max_abs_diff(DensityOperator::maximally_mixed().matrix()) <
          1e-15);
    const BlochVector shrunk = depolarize(b, 0.3).bloch();
    CHECK(shrunk.norm() == Approx(0.7).margin(1e-12));
    CHECK_THROWS_AS(depolarize(b, 1.5), ValidationError);
    // an honest state under noise lambda fails its check at rate lambda/2
    CHECK(check_fail_probability(depolarize(b, 0.02), TrineLabel::B) ==
          Approx(0.01).margin(1e-15));
}

TEST_CASE("closed-form PSD square root", "[linalg]") {
    RandomStream rng(4);
    for (int i = 0; i < 200; ++i) {
        const PureState s = random_pure_state(rng);
        const PureState t = random_pure_state(rng);
        Matrix2 a = s.projector();
        a *= Complex{rng.uniform()};
        Matrix2 b = t.projector();
        b *= Complex{rng.uniform()};
        const Matrix2 m = a + b;
        const Matrix2 r = sqrt_psd(m);
        CHECK((r * r).max_abs_diff(m) < 1e-12);
        CHECK(r.is_psd());
    }
    const Matrix2 p = trine_state(TrineLabel::C).projector();
    CHECK((sqrt_psd(p) * sqrt_psd(p)).max_abs_diff(p) < 1e-12);
}

TEST_CASE("RandomStream is reproducible and per-round independent", "[random]") {
    RandomStream a = RandomStream::for_round(5, 12);
    RandomStream b = RandomStream::for_round(5, 12);
    RandomStream c = RandomStream::for_round(5, 13);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        REQUIRE(x == b());
        differs = differs || x != c();
    }
    CHECK(differs);

    RandomStream rng(1);
    std::array<std::uint64_t, 3> hits{};
    const std::uint64_t n = 300000;
    for (std::uint64_t i = 0; i < n; ++i) {
        ++hits[rng.below(3)];
    }
    for (auto h : hits) {
        CHECK(within_4sigma(h, n, 1.0 / 3.0));
    }
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}
