#pragma once

#include <vector>

#include "spectra/core.hpp"
#include "spectra/curve.hpp"
#include "spectra/homology.hpp"
#include "spectra/linalg.hpp"
#include "spectra/quadrature.hpp"
#include "spectra/series.hpp"

namespace spectra {

enum class FormKind { holomorphic, second_kind, third_kind };

// Meromorphic differential  num(l) / (l^m (l-1)^m1 (l+1)^m2) * dl / y.
// Holomorphic basis forms are l^{j-1} dl/y; Theta and Psi use m = 2 (or 1 in
// the branched charts); eta^k uses the (l -+ 1) factors.
struct RationalDifferential {
    ComplexPoly num;
    int pole_zero = 0;
    int pole_plus1 = 0;   // order at lambda = +1
    int pole_minus1 = 0;  // order at lambda = -1
    FormKind kind = FormKind::holomorphic;

    Complex den(const Complex& l) const {
        Complex d(1.0);
        for (int i = 0; i < pole_zero; ++i) d *= l;
        for (int i = 0; i < pole_plus1; ++i) d *= (l - 1.0);
        for (int i = 0; i < pole_minus1; ++i) d *= (l + 1.0);
        return d;
    }

    // value of the dl-coefficient at a point (l, y) on the curve
    Complex value(const Complex& l, const Complex& y) const {
        return num.eval(l) / (den(l) * y);
    }
};

inline RationalDifferential monomial_form(int j) {
    RationalDifferential f;
    std::vector<Complex> c(std::size_t(j), Complex(0.0));
    c.push_back(Complex(1.0));
    f.num = ComplexPoly(c);  // lambda^j
    f.kind = FormKind::holomorphic;
    return f;
}

// Laurent expansion of the form (as coefficient of dt) at a distinguished place.
inline Laurent form_laurent(const SpectralCurve& curve, const RationalDifferential& form,
                            const LocalChart& ch, std::size_t order) {
    Laurent L = poly_in_chart(form.num, ch.kind, ch.shift, order);
    if (form.pole_zero > 0) {
        Laurent lam = poly_in_chart(ComplexPoly({Complex(0.0), Complex(1.0)}), ch.kind, ch.shift,
                                    order);
        Laurent inv = detail::reciprocal(lam);
        for (int i = 0; i < form.pole_zero; ++i) L = L.mul(inv);
    }
    if (form.pole_plus1 > 0) {
        Laurent f = poly_in_chart(ComplexPoly({Complex(-1.0), Complex(1.0)}), ch.kind, ch.shift,
                                  order);
        Laurent inv = detail::reciprocal(f);
        for (int i = 0; i < form.pole_plus1; ++i) L = L.mul(inv);
    }
    if (form.pole_minus1 > 0) {
        Laurent f = poly_in_chart(ComplexPoly({Complex(1.0), Complex(1.0)}), ch.kind, ch.shift,
                                  order);
        Laurent inv = detail::reciprocal(f);
        for (int i = 0; i < form.pole_minus1; ++i) L = L.mul(inv);
    }
    L = L.mul(ch.y_inv).mul(ch.dlambda);
    (void)curve;
    return L;
}

// Periods -------------------------------------------------------------------

inline Complex period_over_lift(const SpectralCurve& curve, const RationalDifferential& form,
                                const LiftedPath& lift, double tol) {
    Complex total(0.0);
    for (std::size_t si = 0; si < lift.base.segments.size(); ++si) {
        const auto& seg = lift.base.segments[si];
        auto f = [&](double t) {
            Complex l = seg.at(t);
            Complex y = lift.y_at(curve, si, t);
            return form.value(l, y) * seg.deriv(t);
        };
        total += integrate_param(f, tol);
    }
    return total;
}

// Integral of the form along the pointwise rho image of a lifted path.
inline Complex period_over_rho_image(const SpectralCurve& curve,
                                     const RationalDifferential& form, const LiftedPath& lift,
                                     double tol) {
    Complex total(0.0);
    for (std::size_t si = 0; si < lift.base.segments.size(); ++si) {
        const auto& seg = lift.base.segments[si];
        auto f = [&](double t) {
            Complex l = seg.at(t);
            Complex y = lift.y_at(curve, si, t);
            CurvePoint im = curve.rho({l, y, Chart::generic});
            Complex dim = -std::conj(seg.deriv(t)) / std::conj(l * l);
            return form.value(im.lambda, im.y) * dim;
        };
        total += integrate_param(f, tol);
    }
    return total;
}

inline Complex period_cycle(const SpectralCurve& curve, const RationalDifferential& form,
                            const Cycle& c, double tol) {
    return double(c.sign) * period_over_lift(curve, form, c.lift, tol);
}

inline Complex period_parts(const SpectralCurve& curve, const RationalDifferential& form,
                            const HomologyBasis& H, const std::vector<CycleRef>& parts,
                            double tol) {
    Complex s(0.0);
    for (const CycleRef& ref : parts) {
        const Cycle& c = H.chain[ref.chain_index];
        Complex v = ref.rho_image ? period_over_rho_image(curve, form, c.lift, tol)
                                  : period_over_lift(curve, form, c.lift, tol);
        s += ref.weight * double(c.sign) * v;
    }
    return s;
}

inline Complex period_A(const SpectralCurve& curve, const RationalDifferential& form,
                        const HomologyBasis& H, int i, double tol) {
    return period_parts(curve, form, H, H.a_parts[std::size_t(i)], tol);
}

inline Complex period_B(const SpectralCurve& curve, const RationalDifferential& form,
                        const HomologyBasis& H, int i, double tol) {
    return period_parts(curve, form, H, H.b_parts[std::size_t(i)], tol);
}

// Integral of a form over the cut-polygon representative of gamma_k: the
// built path corrected by its measured B-class shift, traversed with the
// polygon boundary orientation.
inline Complex gamma_period(const SpectralCurve& curve, const RationalDifferential& form,
                            const GammaPath& gamma, const HomologyBasis* H, double tol) {
    Complex raw = period_over_lift(curve, form, gamma.lift, tol);
    if (H)
        for (std::size_t i = 0; i < gamma.b_shift.size(); ++i)
            if (gamma.b_shift[i] != 0.0)
                raw += gamma.b_shift[i] * period_B(curve, form, *H, int(i), tol);
    return -raw;
}

// Residues ------------------------------------------------------------------

struct ResidueResult {
    Complex series;
    Complex circle;
    double discrepancy = 0.0;
};

namespace detail {

inline double chart_pole_clearance(const SpectralCurve& curve, const RationalDifferential& form,
                                   const LocalChart& ch) {
    // distance (in the chart coordinate) from the place to the nearest other
    // pole of the form or branch point
    auto to_chart = [&](const Complex& l) -> double {
        switch (ch.kind) {
            case CoordKind::lambda_shift: return std::abs(l - ch.shift);
            case CoordKind::sq: return std::sqrt(std::abs(l));
            case CoordKind::inv: return std::abs(l) == 0.0 ? std::numeric_limits<double>::infinity()
                                                           : 1.0 / std::abs(l);
            case CoordKind::inv_sq:
                return std::abs(l) == 0.0 ? std::numeric_limits<double>::infinity()
                                          : 1.0 / std::sqrt(std::abs(l));
        }
        return 1.0;
    };
    double d = 2.0 * ch.radius;  // branch-point clearance from the chart builder
    std::vector<Complex> poles;
    if (form.pole_zero > 0) poles.push_back(Complex(0.0));
    if (form.pole_plus1 > 0) poles.push_back(Complex(1.0));
    if (form.pole_minus1 > 0) poles.push_back(Complex(-1.0));
    for (const Complex& p : poles) {
        double dc = to_chart(p);
        if (dc > 1e-12) d = std::min(d, dc);
    }
    return d;
}

}  // namespace detail

// Residue at a distinguished place, computed both from the local expansion and
// by small-circle quadrature; the two must agree within 10 * quad_tol.
inline ResidueResult residue(const SpectralCurve& curve, const RationalDifferential& form,
                             PlaceId place, std::size_t order = 16) {
    LocalChart ch = local_expansion(curve, place, order);
    Laurent L = form_laurent(curve, form, ch, order);
    Complex series_val = L.residue();

    double rt = 0.25 * detail::chart_pole_clearance(curve, form, ch);
    if (!(rt > 0.0)) throw Error(ErrorKind::precondition, "no room for residue circle");

    // lambda-circle realizing the chart circle |t| = rt
    double sweep = 2 * kPi;
    double radius = rt;
    bool clockwise = false;
    switch (ch.kind) {
        case CoordKind::lambda_shift: break;
        case CoordKind::sq: sweep = 4 * kPi; radius = rt * rt; break;
        case CoordKind::inv: radius = 1.0 / rt; clockwise = true; break;
        case CoordKind::inv_sq: sweep = 4 * kPi; radius = 1.0 / (rt * rt); clockwise = true; break;
    }
    Complex center = (ch.kind == CoordKind::lambda_shift) ? ch.shift : Complex(0.0);
    ContourPath circ;
    circ.segments.push_back(
        PathSegment::arc(center, radius, 0.0, clockwise ? -sweep : sweep));
    circ.closed = true;

    // start point on the correct sheet from the local series
    Complex t0(rt, 0.0);
    Complex y0 = std::pow(t0, ch.y.lead) * ch.y.s.eval(t0);
    CurvePoint start{circ.start(), y0, Chart::generic};
    LiftedPath lift = lift_path(curve, circ, start, 256);
    Complex circle_val =
        period_over_lift(curve, form, lift, curve.tol.quad_tol) / kTwoPiI;

    ResidueResult rr;
    rr.series = series_val;
    rr.circle = circle_val;
    rr.discrepancy = std::abs(series_val - circle_val);
    double scale = 1.0 + std::abs(series_val);
    if (rr.discrepancy > 1e3 * curve.tol.quad_tol * scale)
        throw Error(ErrorKind::numerical_inconsistency,
                    "residue series/circle disagree by " + std::to_string(rr.discrepancy) +
                        " at " + place_name(place));
    return rr;
}

// Normalized holomorphic basis ------------------------------------------------

struct PeriodTable {
    std::vector<std::vector<Complex>> A;  // rows = differentials, cols = cycles
    std::vector<std::vector<Complex>> B;
};

struct NormalizedBasis {
    std::vector<RationalDifferential> omega;   // int_{A_i} omega^j = delta_ij
    std::vector<std::vector<Complex>> coeff;   // omega^j = sum_k coeff[j][k] l^k dl/y
    PeriodTable monomial;
    PeriodTable normalized;
    double condition = 0.0;
    double riemann_symmetry = 0.0;  // max |tau - tau^T|
    bool riemann_im_positive = false;
};

inline NormalizedBasis normalize_basis(const SpectralCurve& curve, const HomologyBasis& H) {
    const int g = curve.genus;
    if (g < 1) throw Error(ErrorKind::precondition, "normalize_basis requires genus >= 1");
    double tol = curve.tol.quad_tol;

    NormalizedBasis nb;
    nb.monomial.A.assign(g, std::vector<Complex>(g));
    nb.monomial.B.assign(g, std::vector<Complex>(g));
    std::vector<RationalDifferential> mono;
    for (int j = 0; j < g; ++j) mono.push_back(monomial_form(j));
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < g; ++i) {
            nb.monomial.A[j][i] = period_A(curve, mono[j], H, i, tol);
            nb.monomial.B[j][i] = period_B(curve, mono[j], H, i, tol);
        }

    // Solve M x_j = e_j with M_{ik} = A-period of monomial k over A_i.
    std::vector<std::vector<Complex>> M(g, std::vector<Complex>(g));
    for (int i = 0; i < g; ++i)
        for (int k = 0; k < g; ++k) M[i][k] = nb.monomial.A[k][i];
    double cond = 0.0;
    nb.coeff.resize(g);
    for (int j = 0; j < g; ++j) {
        std::vector<Complex> rhs(g, Complex(0.0));
        rhs[std::size_t(j)] = 1.0;
        double c;
        nb.coeff[j] = lu_solve(M, rhs, &c);
        cond = std::max(cond, c);
    }
    nb.condition = cond;
    if (cond > 1e10)
        throw Error(ErrorKind::ill_conditioned_system, "A-period matrix condition > 1e10");

    for (int j = 0; j < g; ++j) {
        RationalDifferential f;
        std::vector<Complex> c(std::size_t(g), Complex(0.0));
        for (int k = 0; k < g; ++k) c[std::size_t(k)] = nb.coeff[j][std::size_t(k)];
        f.num = ComplexPoly(c);
        f.kind = FormKind::holomorphic;
        nb.omega.push_back(f);
    }

    nb.normalized.A.assign(g, std::vector<Complex>(g));
    nb.normalized.B.assign(g, std::vector<Complex>(g));
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < g; ++i) {
            Complex aij(0.0), bij(0.0);
            for (int k = 0; k < g; ++k) {
                aij += nb.coeff[j][std::size_t(k)] * nb.monomial.A[k][i];
                bij += nb.coeff[j][std::size_t(k)] * nb.monomial.B[k][i];
            }
            nb.normalized.A[j][i] = aij;
            nb.normalized.B[j][i] = bij;
        }

    // Riemann relations: tau symmetric, Im(tau) positive definite.
    double sym = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            sym = std::max(sym, std::abs(nb.normalized.B[i][j] - nb.normalized.B[j][i]));
    nb.riemann_symmetry = sym;
    // leading principal minors of Im(tau)
    bool pd = true;
    std::vector<std::vector<double>> im(g, std::vector<double>(g));
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            im[i][j] = 0.5 * (nb.normalized.B[i][j].imag() + nb.normalized.B[j][i].imag());
    // Cholesky attempt
    for (int i = 0; i < g && pd; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = im[i][j];
            for (int k = 0; k < j; ++k) s -= im[i][k] * im[j][k];
            if (i == j) {
                if (s <= 0.0) {
                    pd = false;
                    break;
                }
                im[i][i] = std::sqrt(s);
            } else {
                im[i][j] = s / im[j][j];
            }
        }
    }
    nb.riemann_im_positive = pd;
    if (!pd)
        throw Error(ErrorKind::construction_failure,
                    "Im(period matrix) not positive definite: homology orientation broken");
    if (sym > 1e-5)
        throw Error(ErrorKind::numerical_inconsistency,
                    "period matrix asymmetric beyond tolerance: " + std::to_string(sym));
    return nb;
}

// Second-kind differentials Theta, Psi ---------------------------------------

// Theta = (b(l)/l^m) dl/y with principal part d(c/l) at p0 (unbranched,
// m = 2) or d(c/zeta) at the branch place (m = 1), the conjugate-paired
// prescription at p_inf, zero residues, and the g holomorphic gauge
// coefficients zeroed (monomial gauge; a_normalize re-gauges anyway).
inline RationalDifferential build_second_kind(const SpectralCurve& curve, const Complex& c,
                                              std::size_t order = 16) {
    if (std::abs(c) == 0.0) throw Error(ErrorKind::precondition, "c must be nonzero");
    const int g = curve.genus;
    const bool br = curve.branched;
    const int m = br ? 1 : 2;
    const int degmax = br ? g + 1 : g + 3;
    std::vector<int> unknowns;
    if (br) {
        unknowns = {0, g + 1};
    } else {
        unknowns = {0, 1, g + 2, g + 3};
    }

    LocalChart ch0 = local_expansion(curve, PlaceId::p0, order);
    LocalChart chI = local_expansion(curve, PlaceId::p_inf, order);

    std::size_t neq = unknowns.size();
    std::vector<std::vector<Complex>> Amat(neq, std::vector<Complex>(neq));
    std::vector<Complex> rhs(neq);

    for (std::size_t uj = 0; uj < unknowns.size(); ++uj) {
        RationalDifferential basis;
        basis.num = monomial_form(unknowns[uj]).num;
        basis.pole_zero = m;
        Laurent L0 = form_laurent(curve, basis, ch0, order);
        Laurent LI = form_laurent(curve, basis, chI, order);
        if (br) {
            Amat[0][uj] = L0.coeff(-2);
            Amat[1][uj] = LI.coeff(-2);
        } else {
            Amat[0][uj] = L0.coeff(-2);
            Amat[1][uj] = L0.coeff(-1);
            Amat[2][uj] = LI.coeff(-2);
            Amat[3][uj] = LI.coeff(-1);
        }
    }
    if (br) {
        rhs[0] = -c;
        rhs[1] = std::conj(c);
    } else {
        rhs[0] = -c;
        rhs[1] = Complex(0.0);
        rhs[2] = std::conj(c);
        rhs[3] = Complex(0.0);
    }

    std::vector<Complex> sol;
    try {
        sol = lu_solve(Amat, rhs);
    } catch (const Error&) {
        throw Error(ErrorKind::degenerate_curve, "second-kind construction system singular");
    }

    std::vector<Complex> bc(std::size_t(degmax) + 1, Complex(0.0));
    for (std::size_t uj = 0; uj < unknowns.size(); ++uj) bc[std::size_t(unknowns[uj])] = sol[uj];
    RationalDifferential theta;
    theta.num = ComplexPoly(bc);
    theta.pole_zero = m;
    theta.kind = FormKind::second_kind;
    return theta;
}

// rho-reality certificate for a (b/l^m) dl/y form: conj(b_{D-j}) = s b_j.
inline double reality_residual(const SpectralCurve& curve, const RationalDifferential& form) {
    int D = curve.branched ? curve.genus + 1 : curve.genus + 3;
    double s = double(curve.rho_sign);
    double worst = 0.0;
    for (int j = 0; j <= D; ++j)
        worst = std::max(worst,
                         std::abs(std::conj(form.num[std::size_t(D - j)]) -
                                  s * form.num[std::size_t(j)]));
    return worst;
}

// A-normalization: Theta0 = Theta - sum s_j omega^j with s_j = int_{A_j} Theta.
struct ANormalized {
    RationalDifferential form;          // Theta0
    std::vector<Complex> s;             // A-periods of the input
    double max_im_s = 0.0;              // reality certificate (warning only)
};

inline ANormalized a_normalize(const SpectralCurve& curve, const RationalDifferential& theta,
                               const NormalizedBasis& nb, const HomologyBasis& H) {
    const int g = curve.genus;
    ANormalized out;
    out.form = theta;
    if (g == 0) return out;
    double tol = curve.tol.quad_tol;
    ComplexPoly correction;
    for (int j = 0; j < g; ++j) {
        Complex sj = period_A(curve, theta, H, j, tol);
        out.s.push_back(sj);
        out.max_im_s = std::max(out.max_im_s, std::abs(sj.imag()));
        correction = correction + nb.omega[std::size_t(j)].num * sj;
    }
    // Theta0 numerator over the common denominator l^m
    ComplexPoly corr_num = correction.shifted(theta.pole_zero);
    out.form.num = theta.num - corr_num;
    return out;
}

// Third-kind eta^k: simple poles at p_k, q_k with residues +-1/(2 pi i), zero
// A-periods, regular elsewhere: (b(l)/(l - k)) dl/y with deg b <= g.
inline RationalDifferential build_eta(const SpectralCurve& curve, int k_sign,
                                      const NormalizedBasis* nb, const HomologyBasis* H,
                                      std::size_t order = 16) {
    if (k_sign != 1 && k_sign != -1) throw Error(ErrorKind::precondition, "k must be +-1");
    Complex k(double(k_sign), 0.0);
    if (curve.min_branch_distance(k) < 1e-6)
        throw Error(ErrorKind::degenerate_curve, "lambda = k is a branch point");
    const int g = curve.genus;
    if (g > 0 && (!nb || !H))
        throw Error(ErrorKind::precondition, "genus > 0 needs basis and homology");

    PlaceId pk = (k_sign == 1) ? PlaceId::p1 : PlaceId::pm1;
    LocalChart chk = local_expansion(curve, pk, order);

    std::size_t n = std::size_t(g) + 1;
    std::vector<std::vector<Complex>> Amat(n, std::vector<Complex>(n));
    std::vector<Complex> rhs(n, Complex(0.0));
    double tol = curve.tol.quad_tol;

    std::vector<RationalDifferential> basis;
    for (int j = 0; j <= g; ++j) {
        RationalDifferential f;
        f.num = monomial_form(j).num;
        if (k_sign == 1)
            f.pole_plus1 = 1;
        else
            f.pole_minus1 = 1;
        basis.push_back(f);
    }
    for (std::size_t j = 0; j < n; ++j) {
        Laurent L = form_laurent(curve, basis[j], chk, order);
        Amat[0][j] = L.residue();
        for (int i = 0; i < g; ++i) Amat[std::size_t(i) + 1][j] = period_A(curve, basis[j], *H, i, tol);
    }
    rhs[0] = 1.0 / kTwoPiI;

    std::vector<Complex> sol;
    try {
        sol = lu_solve(Amat, rhs);
    } catch (const Error&) {
        throw Error(ErrorKind::degenerate_curve, "eta construction system singular");
    }

    RationalDifferential eta;
    eta.num = ComplexPoly(sol);
    if (k_sign == 1)
        eta.pole_plus1 = 1;
    else
        eta.pole_minus1 = 1;
    eta.kind = FormKind::third_kind;
    return eta;
}

// Principal parts -------------------------------------------------------------

// P^{c}: value c/lambda at p0, with the sigma-odd and rho-real partners
//   P(q0) = -c/l, P(p_inf) = -conj(c) l, P(q_inf) = conj(c) l.
struct PrincipalPartVector {
    Complex c;
    Complex at(PlaceId p) const {
        switch (p) {
            case PlaceId::p0: return c;
            case PlaceId::q0: return -c;
            case PlaceId::p_inf: return -std::conj(c);
            case PlaceId::q_inf: return std::conj(c);
            default: throw Error(ErrorKind::precondition, "principal parts live over 0, inf");
        }
    }
};

// Extract c from Theta's expansion at p0 (coefficient of -t^{-2} dt) and
// verify the symmetry pattern at the other places.
inline PrincipalPartVector principal_parts(const SpectralCurve& curve,
                                           const RationalDifferential& theta,
                                           std::size_t order = 16) {
    LocalChart ch0 = local_expansion(curve, PlaceId::p0, order);
    Laurent L0 = form_laurent(curve, theta, ch0, order);
    PrincipalPartVector pp;
    pp.c = -L0.coeff(-2);

    LocalChart chI = local_expansion(curve, PlaceId::p_inf, order);
    Laurent LI = form_laurent(curve, theta, chI, order);
    double scale = 1.0 + std::abs(pp.c);
    // int Theta ~ -conj(c)/t at p_inf, so Theta ~ +conj(c) t^{-2} dt
    double mismatch = std::abs(LI.coeff(-2) - std::conj(pp.c));
    double res_mag = std::max(std::abs(L0.residue()), std::abs(LI.residue()));
    if (!curve.branched) {
        LocalChart chq = local_expansion(curve, PlaceId::q0, order);
        Laurent Lq = form_laurent(curve, theta, chq, order);
        // int Theta ~ -c/t at q0, so Theta ~ +c t^{-2} dt there
        mismatch = std::max(mismatch, std::abs(Lq.coeff(-2) - pp.c));
    }
    if (mismatch > 1e-8 * scale || res_mag > 1e-8 * scale)
        throw Error(ErrorKind::construction_failure,
                    "principal-part symmetry violated (mismatch " + std::to_string(mismatch) +
                        ", residue " + std::to_string(res_mag) + ")");
    return pp;
}

}  // namespace spectra
