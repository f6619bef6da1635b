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

}  // namespace

TEST(BuildCurve, Genus0FromPairedRoots) {
    // roots {1/2, 2} closed under inversion: 1/conj(1/2) = 2
    ComplexPoly a = ComplexPoly::from_roots({Complex(0.5), Complex(2.0)}) * Complex(-1.0);
    SpectralCurve c = build_curve(a.coeffs(), false);
    EXPECT_EQ(c.genus, 0);
    EXPECT_TRUE(c.validation.valid);
    // circle condition was certified numerically
    EXPECT_GT(c.validation.circle_min_abs, 0.0);
}

TEST(BuildCurve, DegreeGenusArithmetic) {
    SpectralCurve c = genus1_fixture();
    EXPECT_EQ(c.a.degree(), 4);
    EXPECT_EQ(c.genus, 1);
    SpectralCurve b = branched_genus1_fixture();
    EXPECT_EQ(b.a.degree(), 2);
    EXPECT_EQ(b.genus, 1);
}

TEST(BuildCurve, UnitCircleRootRejected) {
    // root within 1e-6 of the circle, inversion partner included
    double r = 1.0 - 5e-7;
    ComplexPoly a = ComplexPoly::from_roots({Complex(r), Complex(1.0 / r)});
    try {
        build_curve(a.coeffs(), false);
        FAIL() << "expected reality violation";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::reality_violation);
    }
}

TEST(BuildCurve, AsymmetricRootsRejected) {
    ComplexPoly a = ComplexPoly::from_roots({Complex(0.5), Complex(3.0)});
    EXPECT_THROW(build_curve(a.coeffs(), false), Error);
}

TEST(BuildCurve, RepeatedRootsRejected) {
    Complex r(0.5, 0.1);
    ComplexPoly a =
        ComplexPoly::from_roots({r, r, 1.0 / std::conj(r), 1.0 / std::conj(r)});
    try {
        build_curve(a.coeffs(), false);
        FAIL() << "expected singular-curve error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::singular_curve);
    }
}

TEST(Involutions, SigmaRhoAreInvolutions) {
    SpectralCurve c = genus1_fixture();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (int i = 0; i < 32; ++i) {
        Complex l(U(rng), U(rng));
        if (std::abs(l) < 0.05 || c.min_branch_distance(l) < 0.05) continue;
        CurvePoint pt = c.point_over(l);
        ASSERT_TRUE(c.on_curve(pt));

        CurvePoint ss = c.sigma(c.sigma(pt));
        EXPECT_LT(std::abs(ss.y - pt.y) + std::abs(ss.lambda - pt.lambda), 1e-14);

        CurvePoint rr = c.rho(c.rho(pt));
        EXPECT_LT(std::abs(rr.y - pt.y) + std::abs(rr.lambda - pt.lambda), 1e-12);

        // rho lands on the curve and lambda transforms exactly
        CurvePoint r = c.rho(pt);
        EXPECT_TRUE(c.on_curve(r));
        EXPECT_EQ(r.lambda, 1.0 / std::conj(pt.lambda));

        // sigma and rho commute
        CurvePoint sr = c.sigma(c.rho(pt));
        CurvePoint rs = c.rho(c.sigma(pt));
        EXPECT_LT(std::abs(sr.y - rs.y), 1e-10);
    }
}

TEST(Involutions, RhoFixedPointFreeOnCircle) {
    SpectralCurve c = genus1_fixture();
    for (int i = 0; i < 128; ++i) {
        double th = 2 * kPi * i / 128;
        CurvePoint pt = c.point_over(Complex(std::cos(th), std::sin(th)));
        CurvePoint r = c.rho(pt);
        // rho acts as the sheet swap over the circle: distance bounded below
        EXPECT_GT(std::abs(r.y - pt.y), 0.5 * std::abs(pt.y));
    }
}

TEST(LocalExpansion, SheetConventionAndReciprocal) {
    for (SpectralCurve c : {genus1_fixture(), branched_genus1_fixture()}) {
        LocalChart p0 = local_expansion(c, PlaceId::p0, 12);
        if (!c.branched) {
            Complex y0 = p0.y.coeff(0);
            EXPECT_LT(std::abs(y0 - c.canonical_y(Complex(0.0))), 1e-12);
            LocalChart q0 = local_expansion(c, PlaceId::q0, 12);
            for (int k = 0; k < 6; ++k)
                EXPECT_LT(std::abs(q0.y.coeff(k) + p0.y.coeff(k)), 1e-12);
        }
        // y * (1/y) = 1 + O(t^order)
        Laurent prod = p0.y.mul(p0.y_inv);
        EXPECT_LT(std::abs(prod.coeff(0) - Complex(1.0)), 1e-12);
        for (int k = 1; k < 6; ++k) EXPECT_LT(std::abs(prod.coeff(k)), 1e-10);

        // series evaluation against direct y at radius/2
        double r = 0.5 * p0.radius;
        Complex t(r * 0.7071, r * 0.7071);
        Complex lam = c.branched ? t * t : t;
        Complex y_series = std::pow(t, p0.y.lead) * p0.y.s.eval(t);
        Complex y_direct = std::sqrt(c.P(lam));
        if (std::abs(y_direct - y_series) > std::abs(y_direct + y_series)) y_direct = -y_direct;
        EXPECT_LT(std::abs(y_series - y_direct), 1e-9 * (1.0 + std::abs(y_direct)));
    }
}

TEST(LocalExpansion, InfinityChartConsistent) {
    SpectralCurve c = genus1_fixture();
    LocalChart pi = local_expansion(c, PlaceId::p_inf, 12);
    // evaluate y at u = 0.05 -> lambda = 20 and compare with direct sqrt
    Complex u(0.05, 0.013);
    Complex lam = 1.0 / u;
    Complex y_series = std::pow(u, pi.y.lead) * pi.y.s.eval(u);
    Complex y_direct = std::sqrt(c.P(lam));
    if (std::abs(y_direct - y_series) > std::abs(y_direct + y_series)) y_direct = -y_direct;
    EXPECT_LT(std::abs(y_series - y_direct) / std::abs(y_direct), 1e-8);

    // rho convention: leading coefficient is rho_sign * conj(y(p0))
    Complex y0 = c.canonical_y(Complex(0.0));
    EXPECT_LT(std::abs(pi.y.s.c[0] - double(c.rho_sign) * std::conj(y0)), 1e-12);
}

TEST(Lift, SingleBranchPointMonodromy) {
    SpectralCurve c = genus1_fixture();
    Complex a = c.pairs[0].inner;

    // small loop around a single branch point: sheet exchange
    double r = 0.3;
    for (const Complex& b : c.branch_points)
        if (std::abs(b - a) > 1e-12) r = std::min(r, 0.4 * std::abs(b - a));
    r = std::min(r, 0.4 * std::abs(a));
    ContourPath loop;
    loop.segments.push_back(PathSegment::arc(a, r, 0.0, 2 * kPi));
    loop.closed = true;
    CurvePoint start = c.point_over(a + Complex(r, 0.0));
    LiftedPath lift = lift_path(c, loop, start);
    EXPECT_FALSE(lift.closes_on_sheet);
    EXPECT_LT(std::abs(lift.last().y + start.y), 1e-8 * (1.0 + std::abs(start.y)));

    // loop around the full pair: trivial monodromy
    ContourPath tube = homdetail::tube_around({c.pairs[0].inner, c.pairs[0].outer}, 0.15);
    CurvePoint s2 = c.point_over(tube.start());
    LiftedPath l2 = lift_path(c, tube, s2);
    EXPECT_TRUE(l2.closes_on_sheet);
}

TEST(Lift, MarginViolationRejected) {
    SpectralCurve c = genus1_fixture();
    Complex a = c.pairs[0].inner;
    ContourPath seg;
    seg.segments.push_back(PathSegment::line(a + Complex(0.3, 0.0), a + Complex(1e-9, 0.0)));
    try {
        lift_path(c, seg, c.point_over(a + Complex(0.3, 0.0)));
        FAIL() << "expected margin error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::path_too_close);
    }
}

TEST(Lift, EvenTotalWindingCloses) {
    SpectralCurve c = genus1_fixture();
    // doubled loop around a single branch point: winding 2 is trivial
    Complex a = c.pairs[1].inner;
    ContourPath loop;
    loop.segments.push_back(PathSegment::arc(a, 0.12, 0.0, 4 * kPi));
    loop.closed = true;
    CurvePoint start = c.point_over(a + Complex(0.12, 0.0));
    LiftedPath lift = lift_path(c, loop, start);
    EXPECT_TRUE(lift.closes_on_sheet);
}

TEST(Homology, Genus1ChainAndDeterminism) {
    SpectralCurve c = genus1_fixture();
    HomologyBasis H1 = build_homology(c);
    HomologyBasis H2 = build_homology(c);
    EXPECT_EQ(H1.genus(), 1);
    ASSERT_EQ(H1.chain.size(), 3u);
    for (const auto& cyc : H1.chain) EXPECT_TRUE(cyc.lift.closes_on_sheet);
    // determinism: identical path descriptions
    for (std::size_t k = 0; k < H1.chain.size(); ++k) {
        EXPECT_EQ(H1.chain[k].sign, H2.chain[k].sign);
        ASSERT_EQ(H1.chain[k].path.segments.size(), H2.chain[k].path.segments.size());
        for (std::size_t s = 0; s < H1.chain[k].path.segments.size(); ++s) {
            EXPECT_EQ(H1.chain[k].path.segments[s].z0, H2.chain[k].path.segments[s].z0);
            EXPECT_EQ(H1.chain[k].path.segments[s].z1, H2.chain[k].path.segments[s].z1);
        }
    }
}

TEST(Homology, Genus2Builds) {
    SpectralCurve c = genus2_fixture();
    HomologyBasis H = build_homology(c);
    EXPECT_EQ(H.genus(), 2);
    EXPECT_EQ(H.chain.size(), 5u);
    for (const auto& cyc : H.chain) EXPECT_TRUE(cyc.lift.closes_on_sheet);
}

TEST(Homology, BranchedBuilds) {
    SpectralCurve c = branched_genus1_fixture();
    HomologyBasis H = build_homology(c);
    EXPECT_EQ(H.genus(), 1);
    EXPECT_EQ(H.chain.size(), 2u);
    for (const auto& cyc : H.chain) EXPECT_TRUE(cyc.lift.closes_on_sheet);
}

TEST(Gamma, EndpointsAndExactDifferential) {
    for (SpectralCurve c : {genus1_fixture(), branched_genus1_fixture()}) {
        HomologyBasis H = build_homology(c);
        for (int k : {1, -1}) {
            GammaPath g = build_gamma(c, k, &H);
            // q_k = sigma(p_k)
            EXPECT_LT(std::abs(g.to.y + g.from.y), 1e-12);
            EXPECT_LT(std::abs(g.lift.last().y - g.to.y), 1e-7 * (1.0 + std::abs(g.to.y)));

            // exact differential df for f = y: int_gamma df = y(q) - y(p) = -2 y_k
            RationalDifferential df;
            df.num = c.P_poly().derivative() * Complex(0.5);
            Complex I = period_over_lift(c, df, g.lift, 1e-10);
            EXPECT_LT(std::abs(I - (-2.0 * g.from.y)), 1e-8 * (1.0 + std::abs(g.from.y)));
        }
    }
}

TEST(Gamma, DegenerateWhenBranchPointAtK) {
    // curve with a branch point exactly at lambda = -1 is rejected at build
    ComplexPoly a = ComplexPoly::from_roots({Complex(-1.0), Complex(-1.0)});
    EXPECT_THROW(build_curve(a.coeffs(), false), Error);
}
