#pragma once

#include <functional>
#include <vector>

#include "spectra/core.hpp"
#include "spectra/curve.hpp"
#include "spectra/differentials.hpp"
#include "spectra/homology.hpp"
#include "spectra/periodicity.hpp"

namespace spectra {

enum class SearchMode { P1, P1P2 };

struct SearchTargets {
    std::vector<long long> theta_B, psi_B;        // length = genus
    std::array<long long, 2> theta_gamma{0, 0};   // P1P2 mode, k = +1, -1
    std::array<long long, 2> psi_gamma{0, 0};
};

struct SearchSeed {
    std::vector<Complex> inner;  // inner branch points, |a| in (0,1)
    Complex c;
    Complex tau;
};

struct SearchOptions {
    SearchMode mode = SearchMode::P1;
    bool fix_tau = true;
    int max_iter = 60;
    double residual_tol = 1e-10;
    double fd_step = 3e-6;
    ToleranceProfile tol;
};

struct SearchTrace {
    int iteration;
    double residual_norm;
    std::vector<double> params;
};

struct SearchResult {
    bool converged = false;
    SpectralCurve curve;
    Complex c, tau;
    double residual_norm = 0.0;
    double verified_residual_norm = 0.0;  // at 10x tighter quadrature
    int iterations = 0;
    bool rank_deficient = false;
    std::string diagnostic;
    SearchTargets targets;
    std::vector<SearchTrace> trace;
};

namespace searchdetail {

struct Model {
    int n_pairs;
    bool fix_tau;
    ToleranceProfile tol;

    std::vector<double> pack(const SearchSeed& s) const {
        std::vector<double> x;
        for (const Complex& a : s.inner) {
            x.push_back(std::abs(a));
            x.push_back(std::arg(a));
        }
        x.push_back(s.c.real());
        x.push_back(s.c.imag());
        if (!fix_tau) {
            x.push_back(s.tau.real());
            x.push_back(s.tau.imag());
        }
        return x;
    }

    SearchSeed unpack(const std::vector<double>& x, const Complex& tau_fixed) const {
        SearchSeed s;
        std::size_t i = 0;
        for (int p = 0; p < n_pairs; ++p) {
            double r = x[i++], th = x[i++];
            s.inner.push_back(r * Complex(std::cos(th), std::sin(th)));
        }
        s.c = Complex(x[i], x[i + 1]);
        i += 2;
        s.tau = fix_tau ? tau_fixed : Complex(x[i], x[i + 1]);
        return s;
    }

    bool admissible(const std::vector<double>& x) const {
        for (int p = 0; p < n_pairs; ++p) {
            double r = x[std::size_t(2 * p)];
            if (!(r > 1e-3 && r < 1.0 - 1e-4)) return false;
        }
        return true;
    }
};

inline SpectralCurve curve_from_inner(const std::vector<Complex>& inner,
                                      const ToleranceProfile& tol) {
    std::vector<Complex> roots;
    for (const Complex& a : inner) {
        roots.push_back(a);
        roots.push_back(1.0 / std::conj(a));
    }
    ComplexPoly a = ComplexPoly::from_roots(roots);
    return build_curve(a.coeffs(), /*branched=*/false, tol);
}

struct ResidualEval {
    std::vector<double> r;
    double norm_inf = 0.0;
};

inline ResidualEval residuals(const SearchSeed& s, const SearchTargets& tg, SearchMode mode,
                              const ToleranceProfile& tol) {
    SpectralCurve curve = curve_from_inner(s.inner, tol);
    const int g = curve.genus;
    HomologyBasis H = build_homology(curve);
    RationalDifferential theta = build_second_kind(curve, s.c);
    RationalDifferential psi = build_second_kind(curve, s.c * s.tau);

    ResidualEval ev;
    auto push = [&](const Complex& period, long long n) {
        Complex res = period / kTwoPiI - Complex(double(n));
        ev.r.push_back(res.real());
        ev.r.push_back(res.imag());
        ev.norm_inf = std::max({ev.norm_inf, std::abs(res.real()), std::abs(res.imag())});
    };

    for (int j = 0; j < g; ++j) push(period_A(curve, theta, H, j, tol.quad_tol), 0);
    for (int j = 0; j < g; ++j) push(period_B(curve, theta, H, j, tol.quad_tol), tg.theta_B[std::size_t(j)]);
    for (int j = 0; j < g; ++j) push(period_A(curve, psi, H, j, tol.quad_tol), 0);
    for (int j = 0; j < g; ++j) push(period_B(curve, psi, H, j, tol.quad_tol), tg.psi_B[std::size_t(j)]);

    if (mode == SearchMode::P1P2) {
        GammaPath gp = build_gamma(curve, +1, &H);
        GammaPath gm = build_gamma(curve, -1, &H);
        push(period_over_lift(curve, theta, gp.lift, tol.quad_tol), tg.theta_gamma[0]);
        push(period_over_lift(curve, theta, gm.lift, tol.quad_tol), tg.theta_gamma[1]);
        push(period_over_lift(curve, psi, gp.lift, tol.quad_tol), tg.psi_gamma[0]);
        push(period_over_lift(curve, psi, gm.lift, tol.quad_tol), tg.psi_gamma[1]);
    }
    return ev;
}

}  // namespace searchdetail

// Damped Gauss-Newton (Levenberg-Marquardt) on the period residual map.
// Unknowns: inner branch points (disk coordinates), c, and optionally tau.
inline SearchResult newton_search(const SearchSeed& seed, SearchTargets targets,
                                  const SearchOptions& opt) {
    searchdetail::Model model;
    model.n_pairs = static_cast<int>(seed.inner.size());
    model.fix_tau = opt.fix_tau;
    model.tol = opt.tol;

    SearchResult out;
    out.tau = seed.tau;

    // Auto targets: nearest integers of the seed periods.
    {
        SpectralCurve c0 = searchdetail::curve_from_inner(seed.inner, opt.tol);
        const int g = c0.genus;
        if (targets.theta_B.empty() || targets.psi_B.empty()) {
            HomologyBasis H = build_homology(c0);
            RationalDifferential th = build_second_kind(c0, seed.c);
            RationalDifferential ps = build_second_kind(c0, seed.c * seed.tau);
            targets.theta_B.clear();
            targets.psi_B.clear();
            for (int j = 0; j < g; ++j) {
                targets.theta_B.push_back(
                    lattice_residual(period_B(c0, th, H, j, opt.tol.quad_tol)).n);
                targets.psi_B.push_back(
                    lattice_residual(period_B(c0, ps, H, j, opt.tol.quad_tol)).n);
            }
            if (opt.mode == SearchMode::P1P2) {
                GammaPath gp = build_gamma(c0, +1, &H);
                GammaPath gm = build_gamma(c0, -1, &H);
                targets.theta_gamma[0] =
                    lattice_residual(period_over_lift(c0, th, gp.lift, opt.tol.quad_tol)).n;
                targets.theta_gamma[1] =
                    lattice_residual(period_over_lift(c0, th, gm.lift, opt.tol.quad_tol)).n;
                targets.psi_gamma[0] =
                    lattice_residual(period_over_lift(c0, ps, gp.lift, opt.tol.quad_tol)).n;
                targets.psi_gamma[1] =
                    lattice_residual(period_over_lift(c0, ps, gm.lift, opt.tol.quad_tol)).n;
            }
        }
    }
    out.targets = targets;

    std::vector<double> x = model.pack(seed);
    auto eval = [&](const std::vector<double>& xv) {
        SearchSeed s = model.unpack(xv, seed.tau);
        return searchdetail::residuals(s, targets, opt.mode, opt.tol);
    };

    searchdetail::ResidualEval cur = eval(x);
    out.trace.push_back({0, cur.norm_inf, x});
    double lm = 1e-6;

    int it = 0;
    for (; it < opt.max_iter && cur.norm_inf > opt.residual_tol; ++it) {
        const std::size_t m = cur.r.size(), n = x.size();
        // finite-difference Jacobian; a failed column is retried mirrored and
        // otherwise zeroed (the damped step then ignores that direction)
        std::vector<std::vector<double>> J(m, std::vector<double>(n));
        for (std::size_t j = 0; j < n; ++j) {
            bool col_ok = false;
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> xp = x;
                double h = sgn * opt.fd_step * (1.0 + std::abs(x[j]));
                xp[j] += h;
                if (!model.admissible(xp)) continue;
                try {
                    auto rp = eval(xp);
                    for (std::size_t i = 0; i < m; ++i) J[i][j] = (rp.r[i] - cur.r[i]) / h;
                    col_ok = true;
                    break;
                } catch (const Error&) {
                }
            }
            if (!col_ok)
                for (std::size_t i = 0; i < m; ++i) J[i][j] = 0.0;
        }

        // normal equations with damping
        std::vector<std::vector<Complex>> N(n, std::vector<Complex>(n, Complex(0.0)));
        std::vector<Complex> gvec(n, Complex(0.0));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += J[i][a] * J[i][b];
                N[a][b] = s;
            }
            double gval = 0.0;
            for (std::size_t i = 0; i < m; ++i) gval += J[i][a] * cur.r[i];
            gvec[a] = -gval;
        }
        double diag_max = 0.0, diag_min = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n; ++a) {
            diag_max = std::max(diag_max, N[a][a].real());
            diag_min = std::min(diag_min, N[a][a].real());
        }
        if (!(diag_max > 0.0) || diag_min / diag_max < 1e-24) out.rank_deficient = true;

        bool accepted = false;
        for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
            auto Nl = N;
            for (std::size_t a = 0; a < n; ++a) Nl[a][a] += lm * (1.0 + N[a][a].real());
            std::vector<Complex> delta;
            try {
                delta = lu_solve(Nl, gvec);
            } catch (const Error&) {
                lm *= 10.0;
                continue;
            }
            std::vector<double> xn = x;
            for (std::size_t a = 0; a < n; ++a) xn[a] += delta[a].real();
            if (!model.admissible(xn)) {
                lm *= 10.0;  // step rejected: validity would be lost
                continue;
            }
            try {
                auto rn = eval(xn);
                if (rn.norm_inf < cur.norm_inf) {
                    x = xn;
                    cur = rn;
                    lm = std::max(1e-13, lm * 0.2);
                    accepted = true;
                } else {
                    lm *= 10.0;
                }
            } catch (const Error&) {
                lm *= 10.0;
            }
        }
        out.trace.push_back({it + 1, cur.norm_inf, x});
        if (!accepted) {
            if (out.diagnostic.empty())
                out.diagnostic = out.rank_deficient ? "jacobian rank-deficient; no descent step"
                                                    : "no descent step found";
            break;
        }
    }

    out.iterations = it;
    out.residual_norm = cur.norm_inf;
    SearchSeed fin = model.unpack(x, seed.tau);
    out.c = fin.c;
    out.tau = fin.tau;
    out.curve = searchdetail::curve_from_inner(fin.inner, opt.tol);
    out.converged = cur.norm_inf <= opt.residual_tol;

    if (out.converged) {
        ToleranceProfile tight = opt.tol;
        tight.quad_tol /= 10.0;
        auto rv = searchdetail::residuals(fin, targets, opt.mode, tight);
        out.verified_residual_norm = rv.norm_inf;
    }
    return out;
}

}  // namespace spectra
