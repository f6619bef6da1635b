#pragma once

#include <algorithm>
#include <vector>

#include "spectra/core.hpp"

namespace spectra {

// Polynomial over C, coefficients lowest degree first.  The leading
// coefficient of a non-empty polynomial is kept nonzero by trim().
class ComplexPoly {
  public:
    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }
    ComplexPoly(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }

    static ComplexPoly constant(const Complex& v) { return ComplexPoly(std::vector<Complex>{v}); }

    static ComplexPoly from_roots(const std::vector<Complex>& roots,
                                  const Complex& leading = Complex(1.0)) {
        ComplexPoly p = constant(leading);
        for (const Complex& r : roots) p = p * ComplexPoly({-r, Complex(1.0)});
        return p;
    }

    const std::vector<Complex>& coeffs() const { return c_; }
    bool zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Complex operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Complex(0.0); }

    Complex eval(const Complex& z) const {
        Complex acc(0.0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
        return acc;
    }

    ComplexPoly derivative() const {
        if (c_.size() <= 1) return ComplexPoly();
        std::vector<Complex> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = double(i) * c_[i];
        return ComplexPoly(std::move(d));
    }

    double max_coeff_mag() const {
        double m = 0.0;
        for (const Complex& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    ComplexPoly operator*(const ComplexPoly& o) const {
        if (zero() || o.zero()) return ComplexPoly();
        std::vector<Complex> out(c_.size() + o.c_.size() - 1, Complex(0.0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
        return ComplexPoly(std::move(out));
    }

    ComplexPoly operator+(const ComplexPoly& o) const {
        std::vector<Complex> out(std::max(c_.size(), o.c_.size()), Complex(0.0));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i] + o[i];
        return ComplexPoly(std::move(out));
    }

    ComplexPoly operator-(const ComplexPoly& o) const { return *this + (o * Complex(-1.0)); }

    ComplexPoly operator*(const Complex& s) const {
        std::vector<Complex> out = c_;
        for (Complex& v : out) v *= s;
        return ComplexPoly(std::move(out));
    }

    // Multiply by the monomial z^k.
    ComplexPoly shifted(int k) const {
        if (zero()) return ComplexPoly();
        std::vector<Complex> out(c_.size() + k, Complex(0.0));
        for (std::size_t i = 0; i < c_.size(); ++i) out[i + k] = c_[i];
        return ComplexPoly(std::move(out));
    }

    // z^n * p(1/z) for n = degree: coefficient reversal.
    ComplexPoly reversed() const {
        std::vector<Complex> out(c_.rbegin(), c_.rend());
        return ComplexPoly(std::move(out));
    }

    ComplexPoly conj_coeffs() const {
        std::vector<Complex> out = c_;
        for (Complex& v : out) v = std::conj(v);
        return ComplexPoly(std::move(out));
    }

  private:
    void trim() {
        while (!c_.empty() && std::abs(c_.back()) == 0.0) c_.pop_back();
    }
    std::vector<Complex> c_;
};

struct PolyRoot {
    Complex value;
    int multiplicity = 1;
    double residual = 0.0;  // |p(root)| after polishing
};

namespace detail {

inline Complex newton_polish(const ComplexPoly& p, const ComplexPoly& dp, Complex z, int iters) {
    for (int i = 0; i < iters; ++i) {
        Complex f = p.eval(z);
        Complex d = dp.eval(z);
        if (std::abs(d) == 0.0) break;
        Complex step = f / d;
        z -= step;
        if (std::abs(step) < 1e-17 * (1.0 + std::abs(z))) break;
    }
    return z;
}

}  // namespace detail

// Aberth-Ehrlich simultaneous iteration from deterministic starting points,
// followed by Newton polishing.  Multiplicities are reported by clustering.
inline std::vector<PolyRoot> polyroots(const ComplexPoly& p, double root_tol = 1e-10) {
    const int n = p.degree();
    if (n < 1) throw Error(ErrorKind::precondition, "polyroots requires degree >= 1");
    const auto& a = p.coeffs();

    // Deterministic initial ring (Cauchy bound radius, staggered angles).
    double an = std::abs(a.back());
    double r = 0.0;
    for (int i = 0; i < n; ++i) r = std::max(r, std::pow(std::abs(a[i]) / an, 1.0 / double(n - i)));
    r = 1.0 + 2.0 * r;
    std::vector<Complex> z(n);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * kPi * i / n + 0.7;
        z[i] = r * Complex(std::cos(th), std::sin(th));
    }

    ComplexPoly dp = p.derivative();
    const int max_iter = 400;
    for (int it = 0; it < max_iter; ++it) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex f = p.eval(z[i]);
            Complex d = dp.eval(z[i]);
            Complex ratio = (std::abs(d) > 0.0) ? f / d : Complex(0.0);
            Complex s(0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            Complex denom = 1.0 - ratio * s;
            Complex step = (std::abs(denom) > 1e-300) ? ratio / denom : ratio;
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (worst < 1e-15) break;
    }

    for (int i = 0; i < n; ++i) z[i] = detail::newton_polish(p, dp, z[i], 20);

    // Cluster for multiplicities.
    std::vector<PolyRoot> roots;
    std::vector<bool> used(n, false);
    double scale = 0.0;
    for (const Complex& zi : z) scale = std::max(scale, std::abs(zi));
    double cluster_r = 3e-7 * (1.0 + scale);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<int> members{i};
        for (int j = i + 1; j < n; ++j)
            if (!used[j] && std::abs(z[j] - z[i]) < cluster_r) members.push_back(j);
        Complex center(0.0);
        for (int m : members) {
            center += z[m];
            used[m] = true;
        }
        center /= double(members.size());
        if (members.size() > 1) {
            // Modified Newton for a multiple root.
            double mm = double(members.size());
            for (int it = 0; it < 30; ++it) {
                Complex f = p.eval(center), d = dp.eval(center);
                if (std::abs(d) == 0.0) break;
                center -= mm * f / d;
            }
        }
        PolyRoot root;
        root.value = center;
        root.multiplicity = static_cast<int>(members.size());
        root.residual = std::abs(p.eval(center));
        roots.push_back(root);
    }

    double bound = root_tol * (1.0 + p.max_coeff_mag());
    for (const PolyRoot& root : roots) {
        if (root.residual > bound)
            throw Error(ErrorKind::ill_conditioned_poly,
                        "failed to polish root below residual bound (residual=" +
                            std::to_string(root.residual) + ")");
    }

    std::sort(roots.begin(), roots.end(), [](const PolyRoot& x, const PolyRoot& y) {
        double ax = arg_2pi(x.value), ay = arg_2pi(y.value);
        if (ax != ay) return ax < ay;
        return std::abs(x.value) < std::abs(y.value);
    });
    return roots;
}

}  // namespace spectra
