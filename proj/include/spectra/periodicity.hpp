#pragma once

#include <optional>
#include <vector>

#include "spectra/core.hpp"
#include "spectra/curve.hpp"
#include "spectra/differentials.hpp"
#include "spectra/homology.hpp"

namespace spectra {

// Element of H^1(X,O) represented by evaluation against the normalized
// holomorphic basis (and eta^{+1}, eta^{-1} in singular mode).
struct CohomologyVector {
    std::vector<Complex> omega_part;            // length g
    std::optional<std::array<Complex, 2>> eta_part;  // [k=+1, k=-1]

    double distance(const CohomologyVector& o) const {
        double d = 0.0;
        for (std::size_t i = 0; i < omega_part.size(); ++i)
            d = std::max(d, std::abs(omega_part[i] - o.omega_part[i]));
        if (eta_part && o.eta_part)
            for (int i = 0; i < 2; ++i)
                d = std::max(d, std::abs((*eta_part)[i] - (*o.eta_part)[i]));
        return d;
    }
    CohomologyVector scaled(const Complex& s) const {
        CohomologyVector out = *this;
        for (auto& v : out.omega_part) v *= s;
        if (out.eta_part)
            for (auto& v : *out.eta_part) v *= s;
        return out;
    }
};

struct LatticeEntry {
    long long n = 0;
    double residual = 0.0;
    Complex value;
};

struct P2Entry {
    int k = 1;
    long long n = 0;
    double residual = 0.0;        // against 2 pi i Z
    double residual_half = 0.0;   // against pi i Z (sign ambiguity of mu, nu)
    bool half_lattice_only = false;
    Complex value;
};

struct PeriodicityReport {
    // three independently computed vectors for each differential
    CohomologyVector pi_theta, aj_theta, pairing_theta;
    CohomologyVector pi_psi, aj_psi, pairing_psi;
    double cross_discrepancy = 0.0;  // max over the stated equalities
    std::vector<LatticeEntry> p1_theta, p1_psi;  // A periods then B periods
    std::vector<P2Entry> p2_theta, p2_psi;
    bool pass_p1 = false;
    bool pass_p2 = false;
    bool singular_mode = false;
    Complex c, tau;
    std::vector<Complex> s_theta, s_psi;       // A-periods before normalization
    double max_im_s = 0.0;
    double reciprocity_residual = 0.0;
    std::vector<double> rho_b_check;  // | conj(rho-pulled B period) + B period - integer |
};

// --- the three formulations -------------------------------------------------

// Pi vector: omega_part[j] = int_{B_j} Theta0; eta_part[k] = int_{gamma_k} Theta0
// (over the cut-polygon representative of gamma_k).
inline CohomologyVector pi_vector(const SpectralCurve& curve, const RationalDifferential& theta0,
                                  const HomologyBasis& H,
                                  const GammaPath* gamma_p = nullptr,
                                  const GammaPath* gamma_m = nullptr) {
    CohomologyVector v;
    double tol = curve.tol.quad_tol;
    for (int j = 0; j < curve.genus; ++j)
        v.omega_part.push_back(period_B(curve, theta0, H, j, tol));
    if (gamma_p && gamma_m) {
        std::array<Complex, 2> eta;
        eta[0] = gamma_period(curve, theta0, *gamma_p, &H, tol);
        eta[1] = gamma_period(curve, theta0, *gamma_m, &H, tol);
        v.eta_part = eta;
    }
    return v;
}

namespace detail {

// Chart value (f/dt)(place) of a form regular at the place.
inline Complex chart_value(const SpectralCurve& curve, const RationalDifferential& f,
                           PlaceId place, std::size_t order = 16) {
    LocalChart ch = local_expansion(curve, place, order);
    Laurent L = form_laurent(curve, f, ch, order);
    for (int p = L.lead; p < 0; ++p)
        if (std::abs(L.coeff(p)) > 1e-9 * (1.0 + std::abs(L.coeff(0))))
            throw Error(ErrorKind::chart_error, "form has a pole where a value was requested");
    return L.coeff(0);
}

}  // namespace detail

// Abel-Jacobi derivative form: the value on f is
//   2c (f/dl)(p0)   - 2 conj(c) (f/du)(p_inf)     (unbranched)
//    c (f/dzeta)(p0) -  conj(c) (f/dxi)(p_inf)    (branched)
// evaluated for f = omega^1..omega^g and, in singular mode, eta^{+-1};
// the factor argument (1 for Theta, tau for Psi) multiplies c.
inline CohomologyVector aj_form(const SpectralCurve& curve, const Complex& c,
                                const NormalizedBasis& nb, const Complex& factor,
                                const RationalDifferential* eta_p = nullptr,
                                const RationalDifferential* eta_m = nullptr) {
    Complex cc = c * factor;
    double mult = curve.branched ? 1.0 : 2.0;
    CohomologyVector v;
    auto entry = [&](const RationalDifferential& f) {
        Complex v0 = detail::chart_value(curve, f, PlaceId::p0);
        Complex vi = detail::chart_value(curve, f, PlaceId::p_inf);
        return mult * (cc * v0 - std::conj(cc) * vi);
    };
    for (const auto& w : nb.omega) v.omega_part.push_back(entry(w));
    if (eta_p && eta_m) {
        std::array<Complex, 2> eta;
        eta[0] = entry(*eta_p);
        eta[1] = entry(*eta_m);
        v.eta_part = eta;
    }
    return v;
}

// Residue-pairing form: value on f is sum over the places over 0 and infinity
// of Res(P f), with P the principal-part vector of Theta.
inline CohomologyVector pairing_form(const SpectralCurve& curve, const PrincipalPartVector& pp,
                                     const NormalizedBasis& nb,
                                     const RationalDifferential* eta_p = nullptr,
                                     const RationalDifferential* eta_m = nullptr,
                                     std::size_t order = 16) {
    CohomologyVector v;
    std::vector<PlaceId> places;
    if (curve.branched)
        places = {PlaceId::p0, PlaceId::p_inf};
    else
        places = {PlaceId::p0, PlaceId::q0, PlaceId::p_inf, PlaceId::q_inf};

    auto entry = [&](const RationalDifferential& f) {
        Complex sum(0.0);
        for (PlaceId p : places) {
            LocalChart ch = local_expansion(curve, p, order);
            Laurent L = form_laurent(curve, f, ch, order);
            // P is (coefficient) * t^{-1} in the chart coordinate
            sum += pp.at(p) * L.coeff(0);
        }
        return sum;
    };
    for (const auto& w : nb.omega) v.omega_part.push_back(entry(w));
    if (eta_p && eta_m) {
        std::array<Complex, 2> eta;
        eta[0] = entry(*eta_p);
        eta[1] = entry(*eta_m);
        v.eta_part = eta;
    }
    return v;
}

// Residue route for the singular extension: the value of Pi-hat on eta^k from
// local data alone, 2 pi i times the sum over the places over 0 and infinity
// of Res(l_k Theta0) with l_k a local primitive of eta^k.  Theta0 has no
// residues, so only the chart value of eta^k against the double-pole
// coefficient of Theta0 survives.
inline Complex eta_residue_formula(const SpectralCurve& curve,
                                   const RationalDifferential& theta0,
                                   const RationalDifferential& eta, std::size_t order = 16) {
    std::vector<PlaceId> places;
    if (curve.branched)
        places = {PlaceId::p0, PlaceId::p_inf};
    else
        places = {PlaceId::p0, PlaceId::q0, PlaceId::p_inf, PlaceId::q_inf};
    Complex sum(0.0);
    for (PlaceId p : places) {
        LocalChart ch = local_expansion(curve, p, order);
        Laurent Le = form_laurent(curve, eta, ch, order);
        Laurent Lt = form_laurent(curve, theta0, ch, order);
        sum += Le.coeff(0) * Lt.coeff(-2);
    }
    return kTwoPiI * sum;
}

// --- P1 / P2 ------------------------------------------------------------------

inline std::vector<LatticeEntry> check_P1_one(const SpectralCurve& curve,
                                              const RationalDifferential& form,
                                              const HomologyBasis& H) {
    std::vector<LatticeEntry> out;
    double tol = curve.tol.quad_tol;
    for (int i = 0; i < curve.genus; ++i) {
        Complex p = period_A(curve, form, H, i, tol);
        auto lr = lattice_residual(p);
        out.push_back({lr.n, lr.residual, p});
    }
    for (int i = 0; i < curve.genus; ++i) {
        Complex p = period_B(curve, form, H, i, tol);
        auto lr = lattice_residual(p);
        out.push_back({lr.n, lr.residual, p});
    }
    return out;
}

inline P2Entry check_P2_one(const SpectralCurve& curve, const RationalDifferential& form,
                            const GammaPath& gamma, const HomologyBasis* H = nullptr) {
    Complex I = gamma_period(curve, form, gamma, H, curve.tol.quad_tol);
    P2Entry e;
    e.k = (gamma.k.real() > 0) ? 1 : -1;
    e.value = I;
    auto full = lattice_residual(I, kTwoPiI);
    auto half = lattice_residual(I, kTwoPiI * 0.5);
    e.n = full.n;
    e.residual = full.residual;
    e.residual_half = half.residual;
    e.half_lattice_only =
        (half.residual < curve.tol.lattice_tol) && (full.residual >= curve.tol.lattice_tol);
    return e;
}

// --- P1' / P2': meromorphic mu with Theta = d log mu -------------------------

struct LogMuResult {
    Complex value;      // log mu at the target point
    CurvePoint target;
};

namespace detail {

// Path integral of Theta from p_1 (base point over lambda = 1) to the target,
// routing around branch points; a branch-point detour loop reaches the other
// sheet when needed.
inline LogMuResult log_mu(const SpectralCurve& curve, const RationalDifferential& theta,
                          const CurvePoint& target) {
    Complex from(1.0, 0.0);
    std::vector<Complex> avoid = curve.branch_points;
    avoid.push_back(Complex(0.0));
    avoid.push_back(Complex(-1.0));
    double clearance = 0.15;
    for (const Complex& b : curve.branch_points)
        clearance = std::min(clearance, 0.4 * std::abs(b - from));

    auto make_lift = [&](bool flip_sheet) {
        std::vector<Complex> pts =
            homdetail::corridor(from, target.lambda, avoid, clearance);
        ContourPath path;
        if (flip_sheet) {
            // detour once around the branch point nearest the start
            Complex bsel = curve.branch_points.front();
            for (const Complex& b : curve.branch_points)
                if (std::abs(b - from) < std::abs(bsel - from)) bsel = b;
            double r = 0.5 * std::min({clearance, 0.5 * std::abs(bsel)});
            std::vector<Complex> tob = homdetail::corridor(from, bsel + Complex(r, 0), avoid,
                                                           0.8 * r);
            for (std::size_t i = 0; i + 1 < tob.size(); ++i)
                path.segments.push_back(PathSegment::line(tob[i], tob[i + 1]));
            path.segments.push_back(PathSegment::arc(bsel, r, 0.0, 2 * kPi));
            for (std::size_t i = tob.size(); i-- > 1;)
                path.segments.push_back(PathSegment::line(tob[i], tob[i - 1]));
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            path.segments.push_back(PathSegment::line(pts[i], pts[i + 1]));
        return lift_path(curve, path, curve.point_over(from));
    };

    LiftedPath lift = make_lift(false);
    Complex y_end = lift.last().y;
    if (std::abs(y_end - target.y) > std::abs(y_end + target.y)) lift = make_lift(true);
    y_end = lift.last().y;
    if (std::abs(y_end - target.y) > std::abs(y_end + target.y))
        throw Error(ErrorKind::construction_failure, "could not reach the requested sheet");

    LogMuResult r;
    r.value = period_over_lift(curve, theta, lift, curve.tol.quad_tol);
    r.target = target;
    return r;
}

}  // namespace detail

struct P1PrimeReport {
    bool p1_precondition = false;
    double max_single_valued_residual = 0.0;   // homologous-path differences mod 2 pi i Z
    double max_mu_sigma_residual = 0.0;        // log mu(x) + log mu(sigma x) mod 2 pi i Z
    std::vector<P2Entry> mu_at_pm1;            // log mu at q1, p-1, q-1 mod pi i Z
    bool pass = false;
};

inline P1PrimeReport check_P1_prime(const SpectralCurve& curve, const RationalDifferential& theta,
                                    const HomologyBasis& H, bool p1_passes,
                                    const std::vector<Complex>& sample_lambdas) {
    if (!p1_passes)
        throw Error(ErrorKind::precondition,
                    "P1' requires P1: log mu is multivalued beyond 2 pi i Z otherwise");
    P1PrimeReport rep;
    rep.p1_precondition = true;
    double ltol = curve.tol.lattice_tol;

    // single-valuedness: adding a full homology cycle changes log mu by 2 pi i Z
    for (int i = 0; i < curve.genus; ++i) {
        Complex pa = period_A(curve, theta, H, i, curve.tol.quad_tol);
        Complex pb = period_B(curve, theta, H, i, curve.tol.quad_tol);
        rep.max_single_valued_residual = std::max(
            {rep.max_single_valued_residual, lattice_residual(pa).residual,
             lattice_residual(pb).residual});
    }

    // sigma-symmetric normalization: log mu(x) = int_{p_1}^{x} Theta - offset
    // with offset = (1/2) int_{p_1}^{q_1} Theta, so that mu sigma*mu = 1
    // identically (the remaining freedom is the +- sign of mu).
    Complex offset = 0.5 * detail::log_mu(curve, theta, place_point(curve, PlaceId::q1)).value;

    for (const Complex& l : sample_lambdas) {
        CurvePoint x = curve.point_over(l);
        auto lx = detail::log_mu(curve, theta, x);
        auto lsx = detail::log_mu(curve, theta, curve.sigma(x));
        rep.max_mu_sigma_residual = std::max(
            rep.max_mu_sigma_residual,
            lattice_residual(lx.value + lsx.value - 2.0 * offset).residual);
    }

    // P2': mu = +-1 over lambda = +-1
    for (PlaceId p : {PlaceId::q1, PlaceId::pm1, PlaceId::qm1}) {
        CurvePoint pt = place_point(curve, p);
        Complex lv = detail::log_mu(curve, theta, pt).value - offset;
        P2Entry e;
        e.k = (p == PlaceId::q1) ? 1 : -1;
        e.value = lv;
        auto full = lattice_residual(lv, kTwoPiI);
        auto half = lattice_residual(lv, kTwoPiI * 0.5);
        e.n = half.n;
        e.residual = full.residual;
        e.residual_half = half.residual;
        e.half_lattice_only = (half.residual < ltol) && (full.residual >= ltol);
        rep.mu_at_pm1.push_back(e);
    }

    rep.pass = rep.max_single_valued_residual < ltol && rep.max_mu_sigma_residual < ltol;
    return rep;
}

// --- full crosscheck -----------------------------------------------------------

struct CrosscheckOptions {
    bool singular = false;     // include eta parts / gamma integrals
    bool rho_b_diagnostic = false;
    std::size_t order = 16;
};

inline PeriodicityReport crosscheck(const SpectralCurve& curve, const Complex& c,
                                    const Complex& tau, const CrosscheckOptions& opt = {}) {
    PeriodicityReport rep;
    rep.c = c;
    rep.tau = tau;
    rep.singular_mode = opt.singular;
    const int g = curve.genus;
    double qtol = curve.tol.quad_tol;

    RationalDifferential theta = build_second_kind(curve, c, opt.order);
    RationalDifferential psi = build_second_kind(curve, c * tau, opt.order);

    HomologyBasis H;
    NormalizedBasis nb;
    RationalDifferential theta0 = theta, psi0 = psi;
    if (g >= 1) {
        H = build_homology(curve);
        nb = normalize_basis(curve, H);
        auto an_t = a_normalize(curve, theta, nb, H);
        auto an_p = a_normalize(curve, psi, nb, H);
        theta0 = an_t.form;
        psi0 = an_p.form;
        rep.s_theta = an_t.s;
        rep.s_psi = an_p.s;
        rep.max_im_s = std::max(an_t.max_im_s, an_p.max_im_s);
    }

    std::optional<GammaPath> gp, gm;
    std::optional<RationalDifferential> etap, etam;
    if (opt.singular) {
        gp = build_gamma(curve, +1, g >= 1 ? &H : nullptr);
        gm = build_gamma(curve, -1, g >= 1 ? &H : nullptr);
        etap = build_eta(curve, +1, g >= 1 ? &nb : nullptr, g >= 1 ? &H : nullptr, opt.order);
        etam = build_eta(curve, -1, g >= 1 ? &nb : nullptr, g >= 1 ? &H : nullptr, opt.order);
    }

    auto forms_for = [&](const RationalDifferential& f0, const Complex& factor,
                         CohomologyVector& pi_v, CohomologyVector& aj_v,
                         CohomologyVector& pair_v, const RationalDifferential& f_raw) {
        if (g >= 1)
            pi_v = pi_vector(curve, f0, H, gp ? &*gp : nullptr, gm ? &*gm : nullptr);
        else if (gp && gm) {
            std::array<Complex, 2> eta;
            eta[0] = gamma_period(curve, f0, *gp, nullptr, qtol);
            eta[1] = gamma_period(curve, f0, *gm, nullptr, qtol);
            pi_v.eta_part = eta;
        }
        aj_v = aj_form(curve, c, nb, factor, etap ? &*etap : nullptr, etam ? &*etam : nullptr);
        PrincipalPartVector pp = principal_parts(curve, f_raw, opt.order);
        pair_v = pairing_form(curve, pp, nb, etap ? &*etap : nullptr, etam ? &*etam : nullptr,
                              opt.order);
    };

    forms_for(theta0, Complex(1.0), rep.pi_theta, rep.aj_theta, rep.pairing_theta, theta);
    forms_for(psi0, tau, rep.pi_psi, rep.aj_psi, rep.pairing_psi, psi);

    Complex minus_inv_2pii = Complex(-1.0) / kTwoPiI;
    double d = 0.0;
    d = std::max(d, rep.pi_theta.scaled(minus_inv_2pii).distance(rep.aj_theta));
    d = std::max(d, rep.pairing_theta.distance(rep.aj_theta));
    d = std::max(d, rep.pi_psi.scaled(minus_inv_2pii).distance(rep.aj_psi));
    d = std::max(d, rep.pairing_psi.distance(rep.aj_psi));
    rep.cross_discrepancy = d;

    if (g >= 1) {
        rep.p1_theta = check_P1_one(curve, theta, H);
        rep.p1_psi = check_P1_one(curve, psi, H);
    }
    rep.pass_p1 = true;
    for (const auto& e : rep.p1_theta) rep.pass_p1 = rep.pass_p1 && e.residual < curve.tol.lattice_tol;
    for (const auto& e : rep.p1_psi) rep.pass_p1 = rep.pass_p1 && e.residual < curve.tol.lattice_tol;

    if (opt.singular) {
        const HomologyBasis* Hp = (g >= 1) ? &H : nullptr;
        rep.p2_theta.push_back(check_P2_one(curve, theta, *gp, Hp));
        rep.p2_theta.push_back(check_P2_one(curve, theta, *gm, Hp));
        rep.p2_psi.push_back(check_P2_one(curve, psi, *gp, Hp));
        rep.p2_psi.push_back(check_P2_one(curve, psi, *gm, Hp));
        rep.pass_p2 = true;
        for (const auto& e : rep.p2_theta)
            rep.pass_p2 = rep.pass_p2 && e.residual < curve.tol.lattice_tol;
        for (const auto& e : rep.p2_psi)
            rep.pass_p2 = rep.pass_p2 && e.residual < curve.tol.lattice_tol;
    }

    // reciprocity instance: int_{B_j}Theta0 + (4 or 2) pi i (a_j c + conj(a_j c)) = 0
    if (g >= 1) {
        double mult = curve.branched ? 1.0 : 2.0;
        double worst = 0.0;
        for (int j = 0; j < g; ++j) {
            Complex aj = detail::chart_value(curve, nb.omega[std::size_t(j)], PlaceId::p0);
            Complex expect = -mult * kTwoPiI * (aj * c + std::conj(aj * c));
            worst = std::max(worst, std::abs(rep.pi_theta.omega_part[std::size_t(j)] - expect));
        }
        rep.reciprocity_residual = worst;
    }

    // rho-reality of the B cycles: conj(rho-image period) + period must be
    // integral for the normalized basis (B_i recombines with A's under rho)
    if (opt.rho_b_diagnostic && g >= 1) {
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) {
                Complex pb = nb.normalized.B[j][i];
                // conj of the omega^j period over the rho image of B_i must be
                // -pb up to the A-period lattice (integers here)
                Complex prho(0.0);
                for (const CycleRef& ref : H.b_parts[std::size_t(i)]) {
                    const Cycle& cyc = H.chain[ref.chain_index];
                    Complex v = ref.rho_image
                                    ? period_over_lift(curve, nb.omega[std::size_t(j)], cyc.lift, qtol)
                                    : period_over_rho_image(curve, nb.omega[std::size_t(j)],
                                                            cyc.lift, qtol);
                    prho += ref.weight * double(cyc.sign) * v;
                }
                Complex v = std::conj(prho) + pb;
                double dist = std::abs(v - std::nearbyint(v.real()));
                rep.rho_b_check.push_back(dist);
            }
        }
    }

    return rep;
}

}  // namespace spectra
