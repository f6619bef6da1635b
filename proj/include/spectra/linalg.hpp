#pragma once

#include <array>
#include <vector>

#include "spectra/core.hpp"

namespace spectra {

// Dense complex LU solve with partial pivoting (small systems).
inline std::vector<Complex> lu_solve(std::vector<std::vector<Complex>> A,
                                     std::vector<Complex> b, double* cond_est = nullptr) {
    const std::size_t n = A.size();
    if (n == 0 || A[0].size() != n || b.size() != n)
        throw Error(ErrorKind::precondition, "lu_solve: bad dimensions");
    double max_piv = 0.0, min_piv = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(A[k][k]);
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > best) {
                best = std::abs(A[i][k]);
                piv = i;
            }
        if (best == 0.0) throw Error(ErrorKind::ill_conditioned_system, "singular linear system");
        if (piv != k) {
            std::swap(A[piv], A[k]);
            std::swap(b[piv], b[k]);
        }
        max_piv = std::max(max_piv, best);
        min_piv = std::min(min_piv, best);
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex m = A[i][k] / A[k][k];
            A[i][k] = m;
            for (std::size_t j = k + 1; j < n; ++j) A[i][j] -= m * A[k][j];
            b[i] -= m * b[k];
        }
    }
    if (cond_est) *cond_est = (min_piv > 0.0) ? max_piv / min_piv : std::numeric_limits<double>::infinity();
    std::vector<Complex> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Complex s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

// 2x2 complex matrix, row-major.
struct M2 {
    std::array<Complex, 4> a{Complex(0.0), Complex(0.0), Complex(0.0), Complex(0.0)};

    static M2 identity() {
        M2 m;
        m.a = {Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)};
        return m;
    }
    static M2 of(Complex a00, Complex a01, Complex a10, Complex a11) {
        M2 m;
        m.a = {a00, a01, a10, a11};
        return m;
    }
    Complex& operator()(int i, int j) { return a[2 * i + j]; }
    const Complex& operator()(int i, int j) const { return a[2 * i + j]; }

    M2 operator*(const M2& o) const {
        M2 r;
        r.a[0] = a[0] * o.a[0] + a[1] * o.a[2];
        r.a[1] = a[0] * o.a[1] + a[1] * o.a[3];
        r.a[2] = a[2] * o.a[0] + a[3] * o.a[2];
        r.a[3] = a[2] * o.a[1] + a[3] * o.a[3];
        return r;
    }
    M2 operator+(const M2& o) const {
        M2 r;
        for (int i = 0; i < 4; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    M2 operator-(const M2& o) const {
        M2 r;
        for (int i = 0; i < 4; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    M2 operator*(const Complex& s) const {
        M2 r;
        for (int i = 0; i < 4; ++i) r.a[i] = a[i] * s;
        return r;
    }
    Complex trace() const { return a[0] + a[3]; }
    Complex det() const { return a[0] * a[3] - a[1] * a[2]; }
    M2 inverse() const {
        Complex d = det();
        if (std::abs(d) == 0.0) throw Error(ErrorKind::ill_conditioned_system, "singular 2x2");
        M2 r;
        r.a = {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
        return r;
    }
    M2 conj_transpose() const {
        M2 r;
        r.a = {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
        return r;
    }
    M2 transpose() const {
        M2 r;
        r.a = {a[0], a[2], a[1], a[3]};
        return r;
    }
    M2 conj_elem() const {
        M2 r;
        for (int i = 0; i < 4; ++i) r.a[i] = std::conj(a[i]);
        return r;
    }
    double norm() const {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += std::norm(a[i]);
        return std::sqrt(s);
    }
};

inline M2 commutator(const M2& x, const M2& y) { return x * y - y * x; }

// exp(M) for trace-free 2x2 via cosh/sinh closed form; general M splits off
// the scalar part.
inline M2 expm2(const M2& m) {
    Complex tr = m.trace();
    M2 n = m - M2::identity() * (tr / 2.0);
    Complex d = n.det();       // eigenvalues of n: +-mu with mu^2 = -det
    Complex mu2 = -d;
    Complex mu = std::sqrt(mu2);
    Complex ch, shm;           // cosh(mu), sinh(mu)/mu
    if (std::abs(mu) < 1e-6) {
        // series: cosh = 1 + mu^2/2 + mu^4/24, sinh(mu)/mu = 1 + mu^2/6 + mu^4/120
        ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0;
        shm = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0;
    } else {
        ch = std::cosh(mu);
        shm = std::sinh(mu) / mu;
    }
    M2 r = M2::identity() * ch + n * shm;
    return r * std::exp(tr / 2.0);
}

}  // namespace spectra
