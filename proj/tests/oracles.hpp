#pragma once

// Test-side oracles, independent of the library implementation paths they
// check: dense fixed-step trapezoid quadrature, scaling-and-squaring matrix
// exponential, and a direct su(2) matrix bracket.

#include <complex>
#include <functional>
#include <vector>

#include "spectra/linalg.hpp"

namespace oracles {

using spectra::Complex;
using spectra::M2;

// Trapezoid rule with n uniform points over t in [0,1].
inline Complex trapezoid(const std::function<Complex(double)>& f, std::size_t n) {
    Complex sum = 0.5 * (f(0.0) + f(1.0));
    for (std::size_t i = 1; i < n; ++i) sum += f(double(i) / double(n));
    return sum / double(n);
}

// Scaling and squaring with a Taylor core (independent of expm2's closed form).
inline M2 expm_taylor(const M2& m) {
    double n = m.norm();
    int s = 0;
    M2 a = m;
    while (n > 0.25) {
        a = a * 0.5;
        n *= 0.5;
        ++s;
    }
    M2 term = M2::identity();
    M2 sum = M2::identity();
    for (int k = 1; k <= 24; ++k) {
        term = term * a * (1.0 / double(k));
        sum = sum + term;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

inline M2 su2_e1() { return M2::of(Complex(0, 1), 0, 0, Complex(0, -1)); }
inline M2 su2_e2() { return M2::of(0, 1, -1, 0); }
inline M2 su2_e3() { return M2::of(0, Complex(0, 1), Complex(0, 1), 0); }

}  // namespace oracles
