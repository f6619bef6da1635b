#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spectra/core.hpp"
#include "spectra/ode.hpp"
#include "spectra/poly.hpp"
#include "spectra/quadrature.hpp"

using namespace spectra;

TEST(PolyRoots, FactoredQuadratics) {
    auto r1 = polyroots(ComplexPoly({-1.0, 0.0, 1.0}));  // l^2 - 1
    ASSERT_EQ(r1.size(), 2u);
    EXPECT_NEAR(std::abs(r1[0].value - Complex(1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r1[1].value - Complex(-1.0)), 0.0, 1e-12);

    auto r2 = polyroots(ComplexPoly({1.0, 0.0, 1.0}));  // l^2 + 1
    ASSERT_EQ(r2.size(), 2u);
    // sorted by argument: i (pi/2) before -i (3pi/2)
    EXPECT_NEAR(std::abs(r2[0].value - Complex(0, 1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r2[1].value - Complex(0, -1)), 0.0, 1e-12);
}

TEST(PolyRoots, InversionClosedQuartet) {
    // roots closed under a -> 1/conj(a)
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.3, 0.8);
    std::uniform_real_distribution<double> A(0.0, 2 * kPi);
    for (int rep = 0; rep < 5; ++rep) {
        Complex a1 = U(rng) * std::polar(1.0, A(rng));
        Complex a2 = U(rng) * std::polar(1.0, A(rng));
        std::vector<Complex> roots{a1, 1.0 / std::conj(a1), a2, 1.0 / std::conj(a2)};
        auto found = polyroots(ComplexPoly::from_roots(roots));
        ASSERT_EQ(found.size(), 4u);
        // returned set closed under inversion within 1e-10
        for (const auto& r : found) {
            Complex partner = 1.0 / std::conj(r.value);
            double best = 1e18;
            for (const auto& s : found) best = std::min(best, std::abs(s.value - partner));
            EXPECT_LT(best, 1e-10);
        }
    }
}

TEST(PolyRoots, RoundTripDegreeTwelve) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int rep = 0; rep < 8; ++rep) {
        std::vector<Complex> roots;
        while (roots.size() < 12) {
            Complex cand(U(rng), U(rng));
            bool ok = true;
            for (const Complex& r : roots) ok = ok && std::abs(r - cand) > 1e-3;
            if (ok) roots.push_back(cand);
        }
        auto found = polyroots(ComplexPoly::from_roots(roots, Complex(0.7, 0.2)));
        ASSERT_EQ(found.size(), 12u);
        for (const Complex& r : roots) {
            double best = 1e18;
            for (const auto& s : found) best = std::min(best, std::abs(s.value - r));
            EXPECT_LT(best, 1e-7);
        }
    }
}

TEST(PolyRoots, DoubledRootDetected) {
    ComplexPoly p = ComplexPoly::from_roots({Complex(0.5, 0.2), Complex(0.5, 0.2), Complex(-1.5)});
    auto roots = polyroots(p);
    int maxmult = 0;
    for (const auto& r : roots) maxmult = std::max(maxmult, r.multiplicity);
    EXPECT_EQ(maxmult, 2);
}

TEST(PolyRoots, IllConditionedReported) {
    // an unreachable residual bound raises the explicit error
    ComplexPoly p({-2.0, 0.0, 1.0});  // roots +-sqrt(2), residual ~ machine eps
    EXPECT_NO_THROW(polyroots(p, 1e-10));
    EXPECT_THROW(polyroots(p, 1e-18), Error);
}

TEST(Quadrature, ResidueOfOneOverLambda) {
    ContourPath circle;
    circle.segments.push_back(PathSegment::arc(Complex(0.0), 1.0, 0.0, 2 * kPi));
    circle.closed = true;
    Complex v = integrate_contour([](const Complex& z) { return 1.0 / z; }, circle, 1e-12);
    EXPECT_LT(std::abs(v - kTwoPiI), 1e-11);
}

TEST(Quadrature, SegmentAntiderivative) {
    ContourPath seg;
    seg.segments.push_back(PathSegment::line(Complex(0.0), Complex(1.0)));
    Complex v = integrate_contour([](const Complex& z) { return z * z; }, seg, 1e-12);
    EXPECT_LT(std::abs(v - Complex(1.0 / 3.0)), 1e-12);
}

TEST(Quadrature, MatchesDenseTrapezoidOn1OverY) {
    // 1/y around a loop enclosing two branch points of y^2 = (l-a)(l-b)(l-c)(l-d):
    // circle || of radius 1.2 centered between a,b; y continued along the path.
    Complex a(0.4, 0.0), b(-0.45, 0.1), c(2.2, -0.3), d(-2.4, 0.2);
    auto P = [&](const Complex& l) { return (l - a) * (l - b) * (l - c) * (l - d); };
    auto param = [&](double t) {
        double th = 2 * kPi * t;
        return 1.2 * Complex(std::cos(th), std::sin(th));
    };
    // continued sqrt along the closed path with dense sampling
    auto make_y = [&](std::size_t n) {
        std::vector<Complex> ys(n + 1);
        Complex yp = std::sqrt(P(param(0.0)));
        ys[0] = yp;
        for (std::size_t i = 1; i <= n; ++i) {
            Complex w = std::sqrt(P(param(double(i) / n)));
            if (std::abs(w - yp) > std::abs(w + yp)) w = -w;
            ys[i] = w;
            yp = w;
        }
        return ys;
    };
    const std::size_t N = 1u << 20;  // dense oracle
    auto ys = make_y(N);
    auto f = [&](double t) {
        std::size_t i = std::min<std::size_t>(N, std::size_t(t * N + 0.5));
        double th = 2 * kPi * t;
        Complex dz = 1.2 * 2 * kPi * Complex(-std::sin(th), std::cos(th));
        return dz / ys[i];
    };
    Complex oracle = oracles::trapezoid(f, N);

    // adaptive quadrature with the library kernel over the same integrand
    auto ys_coarse = make_y(4096);
    auto fa = [&](double t) {
        std::size_t i = std::min<std::size_t>(4096, std::size_t(t * 4096 + 0.5));
        Complex z = param(t);
        Complex w = std::sqrt(P(z));
        if (std::abs(w - ys_coarse[i]) > std::abs(w + ys_coarse[i])) w = -w;
        double th = 2 * kPi * t;
        Complex dz = 1.2 * 2 * kPi * Complex(-std::sin(th), std::cos(th));
        return dz / w;
    };
    Complex got = integrate_param(fa, 1e-11);
    EXPECT_LT(std::abs(got - oracle) / (1.0 + std::abs(oracle)), 1e-8);
}

TEST(Quadrature, ExactDifferentialClosedPathVanishes) {
    // d/dz of f(z) = z^3/(z-3) around assorted closed paths
    auto df = [](const Complex& z) {
        Complex d = z - 3.0;
        return (3.0 * z * z * d - z * z * z) / (d * d);
    };
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int rep = 0; rep < 4; ++rep) {
        Complex c(U(rng), U(rng));
        double r = 0.5 + 0.4 * std::abs(U(rng));
        ContourPath path;
        path.segments.push_back(PathSegment::arc(c, r, 0.3, 0.3 + 2 * kPi));
        path.closed = true;
        if (std::abs(c - 3.0) < r + 0.2) continue;
        Complex v = integrate_contour(df, path, 1e-11);
        EXPECT_LT(std::abs(v), 1e-9);
    }
}

TEST(Quadrature, NonConvergenceError) {
    // non-integrable singularity on the path
    ContourPath seg;
    seg.segments.push_back(PathSegment::line(Complex(-1.0), Complex(1.0)));
    EXPECT_THROW(integrate_contour([](const Complex& z) { return 1.0 / (z * z); }, seg, 1e-10),
                 Error);
}

TEST(Ode, ConstantAndExponential) {
    auto rhs0 = [](double, const OdeState&, OdeState& dy) { dy.assign(1, Complex(0.0)); };
    auto t0 = ode_solve(rhs0, {Complex(2.5, -1.0)}, 0.0, 3.0, 1e-10);
    EXPECT_LT(std::abs(t0.back()[0] - Complex(2.5, -1.0)), 1e-14);

    auto rhs = [](double, const OdeState& y, OdeState& dy) {
        dy.resize(1);
        dy[0] = Complex(0, 1) * y[0];
    };
    auto tr = ode_solve(rhs, {Complex(1.0)}, 0.0, 2 * kPi, 1e-10);
    EXPECT_LT(std::abs(tr.back()[0] - Complex(1.0)), 1e-9);
}

TEST(Ode, MatrixEquationAgainstExpmOracle) {
    M2 m = M2::of(Complex(0.3, 0.8), Complex(-0.2, 0.1), Complex(0.4, -0.5), Complex(-0.3, -0.8));
    auto rhs = [&](double, const OdeState& y, OdeState& dy) {
        M2 Y;
        Y.a = {y[0], y[1], y[2], y[3]};
        M2 d = m * Y;
        dy = {d.a[0], d.a[1], d.a[2], d.a[3]};
    };
    auto tr = ode_solve(rhs, {Complex(1), Complex(0), Complex(0), Complex(1)}, 0.0, 1.7, 1e-11);
    M2 got;
    got.a = {tr.back()[0], tr.back()[1], tr.back()[2], tr.back()[3]};
    M2 want = oracles::expm_taylor(m * 1.7);
    EXPECT_LT((got - want).norm(), 1e-9);
}

TEST(Ode, HalvingToleranceReducesError) {
    auto rhs = [](double, const OdeState& y, OdeState& dy) {
        dy.resize(1);
        dy[0] = Complex(0, 1) * y[0];
    };
    double errs[2];
    double tols[2] = {1e-6, 1e-8};
    for (int i = 0; i < 2; ++i) {
        auto tr = ode_solve(rhs, {Complex(1.0)}, 0.0, 2 * kPi, tols[i]);
        errs[i] = std::abs(tr.back()[0] - Complex(1.0));
    }
    EXPECT_LT(errs[1], errs[0]);
}

TEST(Ode, DenseOutputInterpolates) {
    auto rhs = [](double t, const OdeState&, OdeState& dy) {
        dy.resize(1);
        dy[0] = Complex(3.0 * t * t, 0.0);
    };
    auto tr = ode_solve(rhs, {Complex(0.0)}, 0.0, 1.0, 1e-10);
    for (double t : {0.1, 0.37, 0.62, 0.95}) {
        EXPECT_LT(std::abs(tr.at(t)[0] - Complex(t * t * t)), 1e-8);
    }
}

TEST(Ode, StiffnessError) {
    // finite-time blowup: y' = y^2, y(0)=1 blows up at t=1
    auto rhs = [](double, const OdeState& y, OdeState& dy) {
        dy.resize(1);
        dy[0] = y[0] * y[0];
    };
    EXPECT_THROW(ode_solve(rhs, {Complex(1.0)}, 0.0, 2.0, 1e-10), Error);
}

TEST(Lattice, Residuals) {
    auto r0 = lattice_residual(kTwoPiI);
    EXPECT_EQ(r0.n, 1);
    EXPECT_NEAR(r0.residual, 0.0, 1e-15);

    auto r1 = lattice_residual(Complex(0.0));
    EXPECT_EQ(r1.n, 0);
    EXPECT_NEAR(r1.residual, 0.0, 1e-15);

    auto r2 = lattice_residual(3.0 * kTwoPiI + Complex(1e-7, 0.0));
    EXPECT_EQ(r2.n, 3);
    EXPECT_NEAR(r2.residual, 1e-7, 1e-12);
}

TEST(Lattice, TiesToEven) {
    // v/base exactly half-integer: rounds to the even neighbor
    Complex v = 0.5 * kTwoPiI;
    EXPECT_EQ(lattice_residual(v).n, 0);
    Complex w = 1.5 * kTwoPiI;
    EXPECT_EQ(lattice_residual(w).n, 2);
}
