#pragma once

#include <vector>

#include "spectra/core.hpp"
#include "spectra/poly.hpp"

namespace spectra {

// Truncated power series sum c[k] t^k, k = 0..order-1.
struct Series {
    std::vector<Complex> c;

    explicit Series(std::size_t order = 0) : c(order, Complex(0.0)) {}
    static Series constant(const Complex& v, std::size_t order) {
        Series s(order);
        if (order) s.c[0] = v;
        return s;
    }
    std::size_t order() const { return c.size(); }
    Complex coeff(std::size_t k) const { return k < c.size() ? c[k] : Complex(0.0); }

    Series mul(const Series& o) const {
        Series out(std::min(order(), o.order()));
        for (std::size_t i = 0; i < out.order(); ++i)
            for (std::size_t j = 0; j + i < out.order(); ++j) out.c[i + j] += c[i] * o.c[j];
        return out;
    }
    Series add(const Series& o) const {
        Series out(std::min(order(), o.order()));
        for (std::size_t i = 0; i < out.order(); ++i) out.c[i] = coeff(i) + o.coeff(i);
        return out;
    }
    Series scale(const Complex& s) const {
        Series out = *this;
        for (Complex& v : out.c) v *= s;
        return out;
    }

    // 1/this, requires c[0] != 0.
    Series reciprocal() const {
        if (c.empty() || std::abs(c[0]) == 0.0)
            throw Error(ErrorKind::numerical_inconsistency, "series reciprocal at zero");
        Series out(order());
        out.c[0] = 1.0 / c[0];
        for (std::size_t k = 1; k < order(); ++k) {
            Complex s(0.0);
            for (std::size_t j = 1; j <= k; ++j) s += c[j] * out.c[k - j];
            out.c[k] = -s / c[0];
        }
        return out;
    }

    // Square root with prescribed constant term s0 (s0^2 = c[0]).
    Series sqrt_with(const Complex& s0) const {
        Series out(order());
        if (c.empty()) return out;
        out.c[0] = s0;
        for (std::size_t k = 1; k < order(); ++k) {
            Complex s(0.0);
            for (std::size_t j = 1; j < k; ++j) s += out.c[j] * out.c[k - j];
            out.c[k] = (coeff(k) - s) / (2.0 * s0);
        }
        return out;
    }

    // Substitute t -> t^2 (even re-indexing), truncated to same order.
    Series compose_square() const {
        Series out(order());
        for (std::size_t k = 0; k < order(); ++k)
            if (2 * k < order()) out.c[2 * k] = c[k];
        return out;
    }

    Complex eval(const Complex& t) const {
        Complex acc(0.0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
        return acc;
    }
};

// Taylor expansion of p at z0 up to given order: coefficients of (t = z - z0).
inline Series taylor_at(const ComplexPoly& p, const Complex& z0, std::size_t order) {
    Series out(order);
    ComplexPoly q = p;
    double fact = 1.0;
    for (std::size_t k = 0; k < order; ++k) {
        if (k > 0) {
            q = q.derivative();
            fact *= double(k);
        }
        out.c[k] = q.eval(z0) / fact;
    }
    return out;
}

// Coefficients of p written in the variable u = 1/z:  z^deg * p(1/z) expanded at u0 = 0,
// i.e. simply the reversed polynomial as a series in u.
inline Series reversed_series(const ComplexPoly& p, std::size_t order) {
    Series out(order);
    const auto& c = p.coeffs();
    int n = p.degree();
    for (int j = 0; j <= n; ++j)
        if (std::size_t(n - j) < order) out.c[n - j] = c[j];
    return out;
}

// Laurent expansion: series paired with a leading exponent, sum c[k] t^(k+lead).
struct Laurent {
    int lead = 0;
    Series s;

    Complex coeff(int power) const {
        int k = power - lead;
        if (k < 0 || std::size_t(k) >= s.order()) return Complex(0.0);
        return s.c[std::size_t(k)];
    }
    Complex residue() const { return coeff(-1); }

    Laurent mul(const Laurent& o) const {
        Laurent out;
        out.lead = lead + o.lead;
        out.s = s.mul(o.s);
        return out;
    }
    Laurent scale(const Complex& v) const {
        Laurent out = *this;
        out.s = out.s.scale(v);
        return out;
    }
    Laurent add(const Laurent& o) const {
        Laurent out;
        out.lead = std::min(lead, o.lead);
        std::size_t n = std::min(s.order() + std::size_t(lead - out.lead),
                                 o.s.order() + std::size_t(o.lead - out.lead));
        out.s = Series(n);
        for (std::size_t k = 0; k < n; ++k)
            out.s.c[k] = coeff(int(k) + out.lead) + o.coeff(int(k) + out.lead);
        return out;
    }
};

}  // namespace spectra
