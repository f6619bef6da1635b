#pragma once

#include <optional>
#include <vector>

#include "spectra/core.hpp"
#include "spectra/poly.hpp"
#include "spectra/quadrature.hpp"
#include "spectra/series.hpp"

namespace spectra {

enum class Chart { generic, over_zero, over_infinity, branch };

struct CurvePoint {
    Complex lambda;
    Complex y;
    Chart chart = Chart::generic;
};

enum class PlaceId { p0, q0, p_inf, q_inf, p1, q1, pm1, qm1 };

inline const char* place_name(PlaceId p) {
    switch (p) {
        case PlaceId::p0: return "p0";
        case PlaceId::q0: return "q0";
        case PlaceId::p_inf: return "p_inf";
        case PlaceId::q_inf: return "q_inf";
        case PlaceId::p1: return "p1";
        case PlaceId::q1: return "q1";
        case PlaceId::pm1: return "pm1";
        case PlaceId::qm1: return "qm1";
    }
    return "?";
}

// Local coordinate t at a place: lambda(t) as below.
enum class CoordKind {
    lambda_shift,  // lambda = k + t
    inv,           // lambda = 1/t
    sq,            // lambda = t^2        (branch place over 0)
    inv_sq,        // lambda = 1/t^2      (branch place over infinity)
};

struct BranchPair {
    Complex inner;  // |inner| < 1
    Complex outer;  // = 1/conj(inner)
    double theta;   // common ray angle
};

struct CurveValidation {
    bool valid = false;
    std::vector<std::string> reasons;
    double root_pairing_residual = 0.0;
    double coeff_symmetry_residual = 0.0;
    double circle_min_abs = 0.0;
    double circle_max_imag = 0.0;
    int rho_sign = 0;
};

namespace detail {

// Representative of {w,-w} with argument in [0,pi); real values map to +|w|.
inline Complex canonical_sqrt(const Complex& v) {
    Complex w = std::sqrt(v);
    if (w.imag() < 0.0 || (w.imag() == 0.0 && w.real() < 0.0)) w = -w;
    return w;
}

}  // namespace detail

// Hyperelliptic spectral curve y^2 = a(lambda) (unbranched over 0, inf) or
// y^2 = lambda a(lambda) (branched), with real structure rho over
// lambda -> 1/conj(lambda) and hyperelliptic involution sigma.
class SpectralCurve {
  public:
    ComplexPoly a;                    // phase-normalized
    bool branched = false;
    int genus = 0;
    int rho_sign = 1;                 // sign s in rho(lambda,y) = (1/conj(l), s conj(y)/conj(l)^{g+1})
    std::vector<Complex> branch_points;  // finite nonzero (roots of a)
    std::vector<BranchPair> pairs;       // inner/outer pairing, sorted by ray angle
    ToleranceProfile tol;
    CurveValidation validation;

    // y^2 = P(lambda)
    Complex P(const Complex& lambda) const {
        Complex v = a.eval(lambda);
        return branched ? lambda * v : v;
    }
    ComplexPoly P_poly() const { return branched ? a.shifted(1) : a; }
    int ydeg() const { return genus + 1; }  // y ~ lambda^{g+1} at infinity

    // The root of y^2 = P(l) with argument in [0, pi).
    Complex canonical_y(const Complex& lambda) const { return detail::canonical_sqrt(P(lambda)); }

    CurvePoint point_over(const Complex& lambda) const {
        return CurvePoint{lambda, canonical_y(lambda), Chart::generic};
    }

    bool on_curve(const CurvePoint& pt, double slack = 50.0) const {
        Complex v = P(pt.lambda);
        return std::abs(pt.y * pt.y - v) <= slack * tol.root_tol * (1.0 + std::abs(v));
    }

    CurvePoint sigma(const CurvePoint& pt) const { return CurvePoint{pt.lambda, -pt.y, pt.chart}; }

    CurvePoint rho(const CurvePoint& pt) const {
        if (pt.chart != Chart::generic)
            throw Error(ErrorKind::chart_error, "rho: point must be in the generic chart");
        if (std::abs(pt.lambda) == 0.0)
            throw Error(ErrorKind::chart_error, "rho: lambda = 0 maps out of the generic chart");
        Complex lc = std::conj(pt.lambda);
        Complex l2 = 1.0 / lc;
        Complex denom = std::pow(lc, ydeg());
        return CurvePoint{l2, double(rho_sign) * std::conj(pt.y) / denom, Chart::generic};
    }

    double min_branch_distance(const Complex& lambda) const {
        double d = std::numeric_limits<double>::infinity();
        for (const Complex& b : branch_points) d = std::min(d, std::abs(lambda - b));
        if (branched) d = std::min(d, std::abs(lambda));
        return d;
    }
};

inline SpectralCurve build_curve(const std::vector<Complex>& a_coeffs, bool branched,
                                 const ToleranceProfile& tol = {}) {
    tol.validate();
    if (a_coeffs.empty()) throw Error(ErrorKind::precondition, "empty coefficient list");
    ComplexPoly a(a_coeffs);
    if (a.zero()) throw Error(ErrorKind::precondition, "zero polynomial");

    SpectralCurve curve;
    curve.branched = branched;
    curve.tol = tol;

    const int n = a.degree();
    if (!branched) {
        if (n < 2 || n % 2 != 0)
            throw Error(ErrorKind::degenerate_curve,
                        "unbranched curve needs even deg a = 2g+2 >= 2, got " + std::to_string(n));
        curve.genus = n / 2 - 1;
    } else {
        if (n % 2 != 0)
            throw Error(ErrorKind::degenerate_curve,
                        "branched curve needs even deg a = 2g, got " + std::to_string(n));
        curve.genus = n / 2;
    }

    // Phase normalization: e^{2 i psi} = conj(a_0)/a_n, psi in [0, pi).
    Complex a0 = a.coeffs().front(), an = a.coeffs().back();
    if (std::abs(a0) == 0.0)
        throw Error(ErrorKind::reality_violation, "a(0) = 0: branch point over lambda = 0");
    double kappa_mag = std::abs(a0) / std::abs(an);
    if (std::abs(kappa_mag - 1.0) > 1e-6)
        throw Error(ErrorKind::reality_violation,
                    "|a_0| != |a_n|: roots not closed under unit-circle inversion");
    Complex kappa = std::conj(a0) / an;
    double psi = 0.5 * std::arg(kappa);
    if (psi < 0) psi += kPi;
    ComplexPoly anorm = a * std::exp(Complex(0.0, psi));

    // Coefficient symmetry certificate: anorm_j = conj(anorm_{n-j}).
    double sym_res = 0.0;
    for (int j = 0; j <= n; ++j)
        sym_res = std::max(sym_res, std::abs(anorm[j] - std::conj(anorm[std::size_t(n - j)])));
    double coeff_scale = 1.0 + anorm.max_coeff_mag();
    if (sym_res > 1e3 * tol.root_tol * coeff_scale)
        throw Error(ErrorKind::reality_violation,
                    "coefficient symmetry violated: roots not invariant under a -> 1/conj(a)");
    curve.validation.coeff_symmetry_residual = sym_res;
    curve.a = anorm;

    // Roots, simplicity, circle exclusion.
    if (n >= 1) {
        auto roots = polyroots(curve.a, tol.root_tol);
        for (const auto& r : roots) {
            if (r.multiplicity > 1)
                throw Error(ErrorKind::singular_curve, "repeated branch point (nodal a)");
            curve.branch_points.push_back(r.value);
        }
        for (std::size_t i = 0; i < curve.branch_points.size(); ++i)
            for (std::size_t j = i + 1; j < curve.branch_points.size(); ++j)
                if (std::abs(curve.branch_points[i] - curve.branch_points[j]) <= tol.root_tol)
                    throw Error(ErrorKind::singular_curve, "branch points collide");
        for (const Complex& b : curve.branch_points) {
            if (std::abs(std::abs(b) - 1.0) <= 1e-6)
                throw Error(ErrorKind::reality_violation,
                            "branch point on/near the unit circle (rho would have fixed points)");
            if (std::abs(b) <= tol.root_tol)
                throw Error(ErrorKind::reality_violation, "branch point at lambda = 0");
        }

        // Pair inner roots with their inversion partners.
        std::vector<Complex> inner, outer;
        for (const Complex& b : curve.branch_points)
            (std::abs(b) < 1.0 ? inner : outer).push_back(b);
        if (inner.size() != outer.size())
            throw Error(ErrorKind::reality_violation, "branch points unbalanced across unit circle");
        double pairing_res = 0.0;
        std::vector<bool> used(outer.size(), false);
        for (const Complex& in : inner) {
            Complex target = 1.0 / std::conj(in);
            double best = std::numeric_limits<double>::infinity();
            std::size_t bi = outer.size();
            for (std::size_t j = 0; j < outer.size(); ++j) {
                if (used[j]) continue;
                double d = std::abs(outer[j] - target);
                if (d < best) {
                    best = d;
                    bi = j;
                }
            }
            if (bi == outer.size() || best > 1e3 * tol.root_tol * (1.0 + std::abs(target)))
                throw Error(ErrorKind::reality_violation, "unpaired branch point under inversion");
            used[bi] = true;
            pairing_res = std::max(pairing_res, best);
            BranchPair pr;
            pr.inner = in;
            pr.outer = outer[bi];
            pr.theta = arg_2pi(in);
            curve.pairs.push_back(pr);
        }
        std::sort(curve.pairs.begin(), curve.pairs.end(), [](const BranchPair& x, const BranchPair& y) {
            if (x.theta != y.theta) return x.theta < y.theta;
            return std::abs(x.inner) < std::abs(y.inner);
        });
        curve.validation.root_pairing_residual = pairing_res;
    }

    // Circle condition: lambda^{-(g+1)} P(lambda) real of constant sign on |lambda|=1.
    {
        const int m = 64;
        double min_abs = std::numeric_limits<double>::infinity();
        double max_imag = 0.0;
        int sign = 0;
        for (int i = 0; i < m; ++i) {
            double th = 2.0 * kPi * i / m;
            Complex l(std::cos(th), std::sin(th));
            Complex v = curve.P(l) / std::pow(l, curve.genus + 1);
            max_imag = std::max(max_imag, std::abs(v.imag()));
            min_abs = std::min(min_abs, std::abs(v.real()));
            int s = v.real() > 0 ? 1 : -1;
            if (sign == 0) sign = s;
            if (s != sign)
                throw Error(ErrorKind::reality_violation,
                            "circle condition failed: lambda^{-(g+1)} P changes sign on |lambda|=1");
        }
        if (max_imag > 1e-7 * (1.0 + curve.a.max_coeff_mag()))
            throw Error(ErrorKind::reality_violation,
                        "circle condition failed: lambda^{-(g+1)} P not real on |lambda|=1");
        curve.validation.circle_min_abs = min_abs;
        curve.validation.circle_max_imag = max_imag;
        curve.rho_sign = -sign;  // fixed-point-free lift
        curve.validation.rho_sign = curve.rho_sign;
    }

    curve.validation.valid = true;
    return curve;
}

// ---------------------------------------------------------------------------
// Local charts at the distinguished places.

struct LocalChart {
    PlaceId id;
    CoordKind kind;
    Complex shift;   // lambda = shift + t for lambda_shift
    Laurent y;       // y(t)
    Laurent y_inv;   // 1/y(t)
    Laurent dlambda; // d lambda / dt
    double radius;   // radius of reliable expansion in t
};

namespace detail {

inline Laurent laurent_of_series(Series s, int lead) {
    Laurent L;
    L.lead = lead;
    L.s = std::move(s);
    return L;
}

// Strip structurally zero leading coefficients into the lead exponent.
inline Laurent normalized(const Laurent& L) {
    std::size_t k = 0;
    while (k < L.s.order() && L.s.c[k] == Complex(0.0)) ++k;
    if (k == 0) return L;
    Laurent out;
    out.lead = L.lead + int(k);
    out.s = Series(L.s.order() - k);
    for (std::size_t i = k; i < L.s.order(); ++i) out.s.c[i - k] = L.s.c[i];
    return out;
}

inline Laurent reciprocal(const Laurent& L) {
    Laurent n = normalized(L);
    Laurent out;
    out.lead = -n.lead;
    out.s = n.s.reciprocal();
    return out;
}

}  // namespace detail

// Laurent expansion of poly(lambda(t)) in the chart coordinate.
inline Laurent poly_in_chart(const ComplexPoly& p, CoordKind kind, const Complex& shift,
                             std::size_t order) {
    switch (kind) {
        case CoordKind::lambda_shift:
            return detail::laurent_of_series(taylor_at(p, shift, order), 0);
        case CoordKind::sq:
            return detail::laurent_of_series(taylor_at(p, Complex(0.0), order).compose_square(), 0);
        case CoordKind::inv:
            return detail::laurent_of_series(reversed_series(p, order), -p.degree());
        case CoordKind::inv_sq:
            return detail::laurent_of_series(reversed_series(p, order).compose_square(),
                                             -2 * p.degree());
    }
    throw Error(ErrorKind::chart_error, "bad chart");
}

inline Laurent dlambda_in_chart(CoordKind kind, std::size_t order) {
    Series one = Series::constant(Complex(1.0), order);
    switch (kind) {
        case CoordKind::lambda_shift:
            return detail::laurent_of_series(one, 0);
        case CoordKind::sq:
            return detail::laurent_of_series(one.scale(2.0), 1);
        case CoordKind::inv:
            return detail::laurent_of_series(one.scale(-1.0), -2);
        case CoordKind::inv_sq:
            return detail::laurent_of_series(one.scale(-2.0), -3);
    }
    throw Error(ErrorKind::chart_error, "bad chart");
}

// Expansion of y and 1/y at a distinguished place.  Sign conventions:
//   p0: canonical y (argument in [0,pi)); q places are sigma images;
//   p_inf := rho(p0), so its leading sheet value is rho_sign * conj(y(p0) lead).
inline LocalChart local_expansion(const SpectralCurve& curve, PlaceId place, std::size_t order) {
    LocalChart ch;
    ch.id = place;
    const int g = curve.genus;
    const bool br = curve.branched;
    std::size_t ord = std::max<std::size_t>(order, 4);

    auto finish = [&](Laurent y) {
        ch.y = y;
        ch.y_inv = detail::reciprocal(y);
        ch.dlambda = dlambda_in_chart(ch.kind, ord);
        std::vector<Complex> sing = curve.branch_points;
        if (br) sing.push_back(Complex(0.0));
        double dmin = 1.0;
        for (const Complex& b : sing) {
            double d = std::numeric_limits<double>::infinity();
            switch (ch.kind) {
                case CoordKind::lambda_shift: d = std::abs(b - ch.shift); break;
                case CoordKind::sq:
                    if (std::abs(b) > 0.0) d = std::sqrt(std::abs(b));
                    break;
                case CoordKind::inv:
                    if (std::abs(b) > 0.0) d = 1.0 / std::abs(b);
                    break;
                case CoordKind::inv_sq:
                    if (std::abs(b) > 0.0) d = 1.0 / std::sqrt(std::abs(b));
                    break;
            }
            dmin = std::min(dmin, d);
        }
        if (ch.kind == CoordKind::lambda_shift && std::abs(ch.shift) != 0.0)
            dmin = std::min(dmin, std::abs(ch.shift));  // forms may have poles over lambda = 0
        ch.radius = 0.5 * dmin;
        return ch;
    };

    switch (place) {
        case PlaceId::p0:
        case PlaceId::q0: {
            if (!br) {
                ch.kind = CoordKind::lambda_shift;
                ch.shift = Complex(0.0);
                Series av = taylor_at(curve.a, Complex(0.0), ord);
                Complex y0 = detail::canonical_sqrt(curve.a.eval(Complex(0.0)));
                if (place == PlaceId::q0) y0 = -y0;
                return finish(detail::laurent_of_series(av.sqrt_with(y0), 0));
            }
            if (place == PlaceId::q0)
                throw Error(ErrorKind::chart_error,
                            "q0 is not distinct from p0 on a branched curve");
            ch.kind = CoordKind::sq;
            ch.shift = Complex(0.0);
            Series av = taylor_at(curve.a, Complex(0.0), ord);
            Complex w0 = detail::canonical_sqrt(curve.a.eval(Complex(0.0)));
            Series w = av.sqrt_with(w0).compose_square();
            // y = t * w(t^2)
            return finish(detail::laurent_of_series(w, 1));
        }
        case PlaceId::p_inf:
        case PlaceId::q_inf: {
            Complex y0 = detail::canonical_sqrt(curve.a.eval(Complex(0.0)));
            Complex w0 = double(curve.rho_sign) * std::conj(y0);
            if (place == PlaceId::q_inf) w0 = -w0;
            if (!br) {
                // y = t^{-(g+1)} w(t) with w^2 = t^{2g+2} a(1/t) = reversed(a)
                ch.kind = CoordKind::inv;
                ch.shift = Complex(0.0);
                Series rev = reversed_series(curve.a, ord);
                return finish(detail::laurent_of_series(rev.sqrt_with(w0), -(g + 1)));
            }
            if (place == PlaceId::q_inf)
                throw Error(ErrorKind::chart_error,
                            "q_inf is not distinct from p_inf on a branched curve");
            // y = t^{-(2g+1)} h(t^2) with h^2 = u^{2g} a(1/u) = reversed(a), u = t^2
            ch.kind = CoordKind::inv_sq;
            ch.shift = Complex(0.0);
            Series rev = reversed_series(curve.a, ord);
            Series h = rev.sqrt_with(w0).compose_square();
            return finish(detail::laurent_of_series(h, -(2 * g + 1)));
        }
        case PlaceId::p1:
        case PlaceId::q1:
        case PlaceId::pm1:
        case PlaceId::qm1: {
            Complex k = (place == PlaceId::p1 || place == PlaceId::q1) ? Complex(1.0)
                                                                       : Complex(-1.0);
            if (curve.min_branch_distance(k) <= 1e3 * curve.tol.root_tol)
                throw Error(ErrorKind::degenerate_curve, "lambda = +-1 is a branch point");
            ch.kind = CoordKind::lambda_shift;
            ch.shift = k;
            Series pv = taylor_at(curve.P_poly(), k, ord);
            Complex yk = detail::canonical_sqrt(curve.P(k));
            bool qside = (place == PlaceId::q1 || place == PlaceId::qm1);
            if (qside) yk = -yk;
            return finish(detail::laurent_of_series(pv.sqrt_with(yk), 0));
        }
    }
    throw Error(ErrorKind::chart_error, "unknown place");
}

inline CurvePoint place_point(const SpectralCurve& curve, PlaceId place) {
    switch (place) {
        case PlaceId::p1: return {Complex(1.0), detail::canonical_sqrt(curve.P(Complex(1.0))), Chart::generic};
        case PlaceId::q1: return {Complex(1.0), -detail::canonical_sqrt(curve.P(Complex(1.0))), Chart::generic};
        case PlaceId::pm1: return {Complex(-1.0), detail::canonical_sqrt(curve.P(Complex(-1.0))), Chart::generic};
        case PlaceId::qm1: return {Complex(-1.0), -detail::canonical_sqrt(curve.P(Complex(-1.0))), Chart::generic};
        default:
            throw Error(ErrorKind::chart_error, "place_point only for finite nonzero places");
    }
}

// ---------------------------------------------------------------------------
// Analytic continuation of y along a lambda path (sheet tracking).

struct LiftedSample {
    double t;  // global parameter in [0,1]
    Complex lambda;
    Complex y;
};

struct LiftedPath {
    ContourPath base;
    CurvePoint start;
    std::vector<std::vector<LiftedSample>> samples;  // per segment, uniform t
    bool closes_on_sheet = false;

    const LiftedSample& first() const { return samples.front().front(); }
    const LiftedSample& last() const { return samples.back().back(); }

    // Sheet-consistent y at (segment, t): nearest stored sample disambiguates
    // the square root.
    Complex y_at(const SpectralCurve& curve, std::size_t seg, double t) const {
        const auto& vec = samples[seg];
        std::size_t n = vec.size();
        double ft = t * double(n - 1);
        std::size_t i = std::min<std::size_t>(n - 1, std::size_t(ft + 0.5));
        Complex lambda = base.segments[seg].at(t);
        Complex w = std::sqrt(curve.P(lambda));
        if (std::abs(w - vec[i].y) > std::abs(w + vec[i].y)) w = -w;
        return w;
    }
};

inline LiftedPath lift_path(const SpectralCurve& curve, const ContourPath& path,
                            const CurvePoint& start, int min_per_segment = 64) {
    path.validate(curve.tol.path_tol);
    if (std::abs(path.start() - start.lambda) >
        curve.tol.path_tol * (1.0 + std::abs(start.lambda)))
        throw Error(ErrorKind::precondition, "start point does not lie over path start");
    if (!curve.on_curve(start))
        throw Error(ErrorKind::precondition, "start point not on the curve");

    double margin = 10.0 * curve.tol.path_tol;

    LiftedPath lift;
    lift.base = path;
    lift.start = start;
    lift.samples.resize(path.segments.size());

    Complex yprev = start.y;
    double total_len = path.length();
    double tacc = 0.0;
    for (std::size_t si = 0; si < path.segments.size(); ++si) {
        const auto& seg = path.segments[si];
        int n = min_per_segment;
        bool ok = false;
        std::vector<LiftedSample> out;
        for (int attempt = 0; attempt < 10 && !ok; ++attempt, n *= 2) {
            out.clear();
            ok = true;
            Complex yp = yprev;
            for (int i = 0; i <= n; ++i) {
                double t = double(i) / n;
                Complex l = seg.at(t);
                if (curve.min_branch_distance(l) < margin)
                    throw Error(ErrorKind::path_too_close,
                                "path within margin of a branch point at lambda=" +
                                    std::to_string(l.real()) + "+" + std::to_string(l.imag()) + "i");
                Complex w = std::sqrt(curve.P(l));
                if (std::abs(w - yp) > std::abs(w + yp)) w = -w;
                // reject steps that flip ambiguously (near-equal distances)
                double d1 = std::abs(w - yp), d2 = std::abs(w + yp);
                if (i > 0 && d1 > 0.75 * d2) {
                    ok = false;
                    break;
                }
                out.push_back({tacc + (seg.length() / std::max(total_len, 1e-300)) * t, l, w});
                yp = w;
            }
        }
        if (!ok)
            throw Error(ErrorKind::path_too_close,
                        "sheet tracking failed to stabilize under refinement");
        lift.samples[si] = std::move(out);
        yprev = lift.samples[si].back().y;
        tacc += seg.length() / std::max(total_len, 1e-300);
    }

    if (path.closed) {
        Complex y_end = lift.last().y;
        Complex y_begin = lift.first().y;
        lift.closes_on_sheet =
            std::abs(y_end - y_begin) < std::abs(y_end + y_begin);
    }
    return lift;
}

}  // namespace spectra
