#include <gtest/gtest.h>

#include <random>

#include "spectra/curve.hpp"
#include "spectra/differentials.hpp"
#include "spectra/homology.hpp"

using namespace spectra;

namespace {

SpectralCurve genus1_fixture() {
    std::vector<Complex> inner{Complex(0.5, 0.1), Complex(-0.1, 0.55)};
    std::vector<Complex> roots;
    for (const Complex& a : inner) {
        roots.push_back(a);
        roots.push_back(1.0 / std::conj(a));
    }
    return build_curve(ComplexPoly::from_roots(roots).coeffs(), false);
}

SpectralCurve genus2_fixture() {
    std::vector<Complex> inner{Complex(0.55, 0.05), Complex(-0.2, 0.5), Complex(-0.35, -0.4)};
    std::vector<Complex> roots;
    for (const Complex& a : inner) {
        roots.push_back(a);
        roots.push_back(1.0 / std::conj(a));
    }
    return build_curve(ComplexPoly::from_roots(roots).coeffs(), false);
}

SpectralCurve branched_genus1_fixture() {
    std::vector<Complex> inner{Complex(0.3, 0.35)};
    std::vector<Complex> roots{inner[0], 1.0 / std::conj(inner[0])};
    return build_curve(ComplexPoly::from_roots(roots).coeffs(), true);
}

SpectralCurve genus0_fixture() {
    ComplexPoly a = ComplexPoly::from_roots({Complex(0.5), Complex(2.0)}) * Complex(-1.0);
    return build_curve(a.coeffs(), false);
}

}  // namespace

TEST(NormalizeBasis, KroneckerAndRiemann) {
    for (SpectralCurve c : {genus1_fixture(), genus2_fixture(), branched_genus1_fixture()}) {
        HomologyBasis H = build_homology(c);
        NormalizedBasis nb = normalize_basis(c, H);
        const int g = c.genus;
        for (int j = 0; j < g; ++j)
            for (int i = 0; i < g; ++i) {
                Complex want = (i == j) ? Complex(1.0) : Complex(0.0);
                EXPECT_LT(std::abs(nb.normalized.A[j][i] - want), 1e-8);
            }
        EXPECT_LT(nb.riemann_symmetry, 1e-7);
        EXPECT_TRUE(nb.riemann_im_positive);
    }
}

TEST(Residue, HolomorphicBasisVanishesAtP0) {
    SpectralCurve c = genus1_fixture();
    RationalDifferential w = monomial_form(0);
    ResidueResult r = residue(c, w, PlaceId::p0);
    EXPECT_LT(std::abs(r.series), 1e-12);
    EXPECT_LT(std::abs(r.circle), 1e-9);
}

TEST(SecondKind, PrincipalPartRoundTripAndResidues) {
    Complex cval(0.3, 0.7);
    for (SpectralCurve c : {genus1_fixture(), genus2_fixture(), branched_genus1_fixture()}) {
        RationalDifferential theta = build_second_kind(c, cval);
        PrincipalPartVector pp = principal_parts(c, theta);
        EXPECT_LT(std::abs(pp.c - cval), 1e-10);
        // entry at q0 is the negative of the entry at p0
        if (!c.branched) EXPECT_EQ(pp.at(PlaceId::q0), -pp.at(PlaceId::p0));

        // zero residues at p0 and p_inf: series and independent circle quadrature
        ResidueResult r0 = residue(c, theta, PlaceId::p0);
        EXPECT_LT(std::abs(r0.series), 1e-10);
        EXPECT_LT(std::abs(r0.circle), 1e-8);
        ResidueResult ri = residue(c, theta, PlaceId::p_inf);
        EXPECT_LT(std::abs(ri.series), 1e-10);
        EXPECT_LT(std::abs(ri.circle), 1e-8);

        // rho-reality as a coefficient identity
        EXPECT_LT(reality_residual(c, theta), 1e-9);

        // sigma pullback is the negative: automatic for this representation
        Complex l(0.4, 0.9);
        Complex y = c.canonical_y(l);
        EXPECT_EQ(theta.value(l, -y), -theta.value(l, y));
    }
}

TEST(SecondKind, Genus0ClosedFormOracle) {
    // Frozen values computed from the rational parametrization
    //   t^2 = a2 (l - beta)/(l - alpha), R(t) by partial fractions.
    SpectralCurve c = genus0_fixture();
    RationalDifferential theta = build_second_kind(c, Complex(0.3, 0.7));
    struct Case {
        Complex lambda, y, want;
    };
    const Case cases[] = {
        {{1.5932568149210904, -0.3098995695839311},
         {0.7489239598278334, 0.14203730272596843},
         {-0.7392366854637316, 0.449758981279087}},
        {{1.2826805712349043, 0.5149599272424042},
         {-0.9093724169712458, 0.018506372385273973},
         {0.21281282270826324, 0.2786386878583721}},
        {{0.8549563838223633, 0.129421094369548},
         {0.6551942902458368, 0.07803330689928625},
         {0.2242940110651947, -0.10634995164556235}},
    };
    for (const Case& k : cases) {
        Complex got = theta.value(k.lambda, k.y);
        EXPECT_LT(std::abs(got - k.want), 1e-10) << "lambda = " << k.lambda;
    }
}

TEST(ANormalize, AKillsPeriodsAndImaginaryB) {
    Complex cval(0.45, -0.2);
    for (SpectralCurve c : {genus1_fixture(), genus2_fixture()}) {
        HomologyBasis H = build_homology(c);
        NormalizedBasis nb = normalize_basis(c, H);
        RationalDifferential theta = build_second_kind(c, cval);
        ANormalized an = a_normalize(c, theta, nb, H);
        // A-periods of Theta0 vanish
        for (int j = 0; j < c.genus; ++j)
            EXPECT_LT(std::abs(period_A(c, an.form, H, j, 1e-10)), 1e-8);
        // s is real (reality certificate)
        EXPECT_LT(an.max_im_s, 1e-8);
        // idempotence: normalizing Theta0 gives s = 0
        ANormalized an2 = a_normalize(c, an.form, nb, H);
        for (const Complex& s : an2.s) EXPECT_LT(std::abs(s), 1e-8);
        // B-periods purely imaginary
        for (int j = 0; j < c.genus; ++j) {
            Complex pb = period_B(c, an.form, H, j, 1e-10);
            EXPECT_LT(std::abs(pb.real()), 1e-7) << "j=" << j;
        }
    }
}

TEST(Eta, ResiduesAndAPeriods) {
    for (SpectralCurve c : {genus1_fixture(), branched_genus1_fixture()}) {
        HomologyBasis H = build_homology(c);
        NormalizedBasis nb = normalize_basis(c, H);
        for (int k : {1, -1}) {
            RationalDifferential eta = build_eta(c, k, &nb, &H);
            PlaceId pk = (k == 1) ? PlaceId::p1 : PlaceId::pm1;
            PlaceId qk = (k == 1) ? PlaceId::q1 : PlaceId::qm1;
            ResidueResult rp = residue(c, eta, pk);
            ResidueResult rq = residue(c, eta, qk);
            EXPECT_LT(std::abs(rp.series - 1.0 / kTwoPiI), 1e-10);
            EXPECT_LT(std::abs(rq.series + 1.0 / kTwoPiI), 1e-10);
            // regular over 0 and infinity
            EXPECT_LT(std::abs(residue(c, eta, PlaceId::p0).series), 1e-10);
            EXPECT_LT(std::abs(residue(c, eta, PlaceId::p_inf).series), 1e-10);
            // zero A-periods
            for (int j = 0; j < c.genus; ++j)
                EXPECT_LT(std::abs(period_A(c, eta, H, j, 1e-10)), 1e-8);
        }
    }
}

TEST(Periods, ExactDifferentialVanishesOnCycles) {
    SpectralCurve c = genus1_fixture();
    HomologyBasis H = build_homology(c);
    // df for the global function f = y
    RationalDifferential df;
    df.num = c.P_poly().derivative() * Complex(0.5);
    for (const auto& cyc : H.chain)
        EXPECT_LT(std::abs(period_cycle(c, df, cyc, 1e-10)), 1e-8);
}

TEST(Periods, SelfConvergenceUnderTolHalving) {
    SpectralCurve c = genus1_fixture();
    HomologyBasis H = build_homology(c);
    RationalDifferential theta = build_second_kind(c, Complex(0.3, 0.7));
    Complex loose = period_B(c, theta, H, 0, 1e-8);
    Complex tight = period_B(c, theta, H, 0, 1e-11);
    EXPECT_LT(std::abs(loose - tight), 1e-7 * (1.0 + std::abs(tight)));
}

TEST(Reality, RhoPullbackNegatesPeriods) {
    // conj(int_{rho C} omega) = -int_C omega for the normalized basis
    SpectralCurve c = genus1_fixture();
    HomologyBasis H = build_homology(c);
    NormalizedBasis nb = normalize_basis(c, H);
    for (const auto& cyc : H.chain) {
        for (int j = 0; j < c.genus; ++j) {
            Complex direct = period_cycle(c, nb.omega[std::size_t(j)], cyc, 1e-10);
            // integrate the pullback through rho along the same lift
            Complex pulled(0.0);
            for (std::size_t si = 0; si < cyc.lift.base.segments.size(); ++si) {
                const auto& seg = cyc.lift.base.segments[si];
                auto f = [&](double t) {
                    Complex l = seg.at(t);
                    Complex y = cyc.lift.y_at(c, si, t);
                    CurvePoint im = c.rho({l, y, Chart::generic});
                    Complex dl = seg.deriv(t);
                    Complex dim = -std::conj(dl) / std::conj(l * l);
                    return nb.omega[std::size_t(j)].value(im.lambda, im.y) * dim;
                };
                pulled += double(cyc.sign) * integrate_param(f, 1e-10);
            }
            EXPECT_LT(std::abs(std::conj(pulled) + direct), 1e-7 * (1.0 + std::abs(direct)));
        }
    }
}

TEST(Pairing, MonomialSecondKindFamilyFullRank) {
    // residue pairing of increasing-order principal parts against the
    // normalized basis has full numerical rank
    SpectralCurve c = genus2_fixture();
    HomologyBasis H = build_homology(c);
    NormalizedBasis nb = normalize_basis(c, H);
    const int g = c.genus;
    LocalChart p0 = local_expansion(c, PlaceId::p0, 16);
    std::size_t gs = std::size_t(g);
    std::vector<std::vector<Complex>> T(gs, std::vector<Complex>(gs));
    for (int m = 1; m <= g; ++m)
        for (int j = 0; j < g; ++j) {
            Laurent L = form_laurent(c, nb.omega[std::size_t(j)], p0, 16);
            // Res(t^{-m} omega^j) at p0; the sigma partner doubles it
            T[std::size_t(m - 1)][std::size_t(j)] = 2.0 * L.coeff(m - 1);
        }
    double cond = 0.0;
    std::vector<Complex> rhs(std::size_t(g), Complex(0.0));
    rhs[0] = 1.0;
    EXPECT_NO_THROW(lu_solve(T, rhs, &cond));
    EXPECT_LT(cond, 1e10);
}
