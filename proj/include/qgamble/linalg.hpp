#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace qgamble {

using Complex = std::complex<double>;

/// Tolerance for normalization, Hermiticity and PSD checks.
inline constexpr double kStateTol = 1e-9;
/// Tolerance for identities where exact arithmetic cancels.
inline constexpr double kExactTol = 1e-12;

/// Dense 2x2 complex matrix, row-major.
struct Matrix2 {
    std::array<Complex, 4> m{};

    static constexpr Matrix2 identity() { return {{Complex{1.0}, Complex{}, Complex{}, Complex{1.0}}}; }
    static constexpr Matrix2 zero() { return {}; }

    /// |u><v|
    static Matrix2 outer(const Complex &u0, const Complex &u1, const Complex &v0,
                         const Complex &v1) {
        return {{u0 * std::conj(v0), u0 * std::conj(v1), u1 * std::conj(v0),
                 u1 * std::conj(v1)}};
    }

    Complex &operator()(int row, int col) { return m[static_cast<std::size_t>(2 * row + col)]; }
    const Complex &operator()(int row, int col) const {
        return m[static_cast<std::size_t>(2 * row + col)];
    }

    [[nodiscard]] Complex trace() const { return m[0] + m[3]; }
    [[nodiscard]] Complex determinant() const { return m[0] * m[3] - m[1] * m[2]; }

    [[nodiscard]] Matrix2 adjoint() const {
        return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
    }

    [[nodiscard]] double max_abs_diff(const Matrix2 &other) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            worst = std::max(worst, std::abs(m[i] - other.m[i]));
        }
        return worst;
    }

    [[nodiscard]] bool is_hermitian(double tol = kStateTol) const {
        return max_abs_diff(adjoint()) <= tol;
    }

    /// Eigenvalues of the Hermitian part, ascending.
    [[nodiscard]] std::array<double, 2> hermitian_eigenvalues() const {
        const double a = 0.5 * (m[0].real() + m[3].real());
        const double d = 0.5 * (m[0].real() - m[3].real());
        const Complex off = 0.5 * (m[1] + std::conj(m[2]));
        const double rad = std::sqrt(d * d + std::norm(off));
        return {a - rad, a + rad};
    }

    [[nodiscard]] bool is_psd(double tol = kStateTol) const {
        return is_hermitian(tol) && hermitian_eigenvalues()[0] >= -tol;
    }

    Matrix2 &operator+=(const Matrix2 &o) {
        for (std::size_t i = 0; i < 4; ++i) {
            m[i] += o.m[i];
        }
        return *this;
    }
    Matrix2 &operator-=(const Matrix2 &o) {
        for (std::size_t i = 0; i < 4; ++i) {
            m[i] -= o.m[i];
        }
        return *this;
    }
    Matrix2 &operator*=(const Complex &s) {
        for (auto &x : m) {
            x *= s;
        }
        return *this;
    }

    friend Matrix2 operator+(Matrix2 a, const Matrix2 &b) { return a += b; }
    friend Matrix2 operator-(Matrix2 a, const Matrix2 &b) { return a -= b; }
    friend Matrix2 operator*(Matrix2 a, const Complex &s) { return a *= s; }
    friend Matrix2 operator*(const Complex &s, Matrix2 a) { return a *= s; }
    friend Matrix2 operator*(const Matrix2 &a, const Matrix2 &b) {
        return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                 a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
    }
};

/// Pauli matrices
inline constexpr Matrix2 kPauliX{{Complex{0.0}, Complex{1.0}, Complex{1.0}, Complex{0.0}}};
inline constexpr Matrix2 kPauliY{{Complex{0.0}, Complex{0.0, -1.0}, Complex{0.0, 1.0}, Complex{0.0}}};
inline constexpr Matrix2 kPauliZ{{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{-1.0}}};

/// Inverse of an invertible 2x2 matrix.
inline Matrix2 inverse(const Matrix2 &a) {
    const Complex det = a.determinant();
    return Matrix2{{a.m[3], -a.m[1], -a.m[2], a.m[0]}} * (Complex{1.0} / det);
}

/// Principal square root of a 2x2 PSD matrix, closed form
/// sqrt(M) = (M + s I) / sqrt(tr M + 2 s) with s = sqrt(det M).
inline Matrix2 sqrt_psd(const Matrix2 &a) {
    const double det = std::max(0.0, a.determinant().real());
    const double s = std::sqrt(det);
    const double t2 = a.trace().real() + 2.0 * s;
    if (t2 <= 0.0) {
        return Matrix2::zero();
    }
    Matrix2 out = a + Matrix2::identity() * Complex{s};
    return out * Complex{1.0 / std::sqrt(t2)};
}

} // namespace qgamble
