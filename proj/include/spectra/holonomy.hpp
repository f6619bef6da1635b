#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "spectra/core.hpp"
#include "spectra/curve.hpp"
#include "spectra/homology.hpp"
#include "spectra/laxflow.hpp"
#include "spectra/linalg.hpp"
#include "spectra/ode.hpp"
#include "spectra/parallel.hpp"

namespace spectra {

// Family of flat connections nabla_lambda = nabla^L + phi_lambda over the
// torus C / (Z + tau Z).  phi(z, lambda) returns the (dz, dzbar) coefficient
// pair, trace-free 2x2.  Families that are themselves produced by a flow
// (the Lax fields) expose an auxiliary state so transport can integrate the
// flow and the parallel transport jointly along a path.
class ConnectionFamily {
  public:
    virtual ~ConnectionFamily() = default;
    Complex tau{0.0, 1.0};

    virtual std::pair<M2, M2> phi(const Complex& z, const Complex& lambda) const = 0;

    virtual std::size_t aux_dim() const { return 0; }
    virtual OdeState aux_at(const Complex& /*z*/) const { return {}; }
    virtual void aux_rhs(const Complex& /*dir*/, const OdeState& /*aux*/,
                         OdeState& /*daux*/) const {}
    virtual std::pair<M2, M2> phi_aux(const OdeState& /*aux*/, const Complex& z,
                                      const Complex& lambda) const {
        return phi(z, lambda);
    }
};

// Homogeneous harmonic torus f = exp(x A) exp(y B) with A = i pi p (u.sigma),
// B = i pi q (e3.sigma), u = (sin gamma, 0, cos gamma); lattice 1, i.  The
// group-level family is
//   phi_lambda = 1/2 (1 + 1/lambda) phi_z dz + 1/2 (1 + lambda) phi_zbar dzbar,
// unitary on |lambda| = 1 and trivial at lambda = -1.
class HomogeneousFamily : public ConnectionFamily {
  public:
    int p = 1, q = 2;
    double angle = 1.0;  // u.v = cos(angle)
    M2 A, B;

    HomogeneousFamily(int p_, int q_, double angle_) : p(p_), q(q_), angle(angle_) {
        double c = std::cos(angle), s = std::sin(angle);
        A = M2::of(Complex(0, kPi * p * c), Complex(0, kPi * p * s),
                   Complex(0, kPi * p * s), Complex(0, -kPi * p * c));
        B = M2::of(Complex(0, kPi * q), 0, 0, Complex(0, -kPi * q));
        tau = Complex(0.0, 1.0);
    }

    std::pair<M2, M2> phi_base(const Complex& z) const {
        double y = z.imag();
        // P(y) = e^{-yB} A e^{yB}
        Complex ph = std::exp(Complex(0, -2 * kPi * q * y));
        M2 P = A;
        P.a[1] = A.a[1] * ph;
        P.a[2] = A.a[2] / ph;
        M2 phz = (P - B * Complex(0, 1)) * 0.5;
        M2 phzb = (P + B * Complex(0, 1)) * 0.5;
        return {phz, phzb};
    }

    std::pair<M2, M2> phi(const Complex& z, const Complex& lambda) const override {
        auto [pz, pzb] = phi_base(z);
        Complex u = 0.5 * (1.0 + 1.0 / lambda);
        Complex v = 0.5 * (1.0 + lambda);
        return {pz * u, pzb * v};
    }

    // holonomy exponents for the two generators (closed forms used as oracles)
    M2 exponent_gen1(const Complex& lambda) const {
        auto [pz, pzb] = phi(Complex(0.0), lambda);
        return (pz + pzb) * Complex(-1.0);
    }
};

// Family generated by a Lax field: phi_lambda from xi(z), with xi flowed from
// the origin.  tau defaults to i.
class LaxFamily : public ConnectionFamily {
  public:
    LieAlgebraSpec spec;
    LoopElement xi0;
    double ode_tol = 1e-11;

    LaxFamily(LieAlgebraSpec s, LoopElement x0, Complex tau_ = Complex(0, 1))
        : spec(std::move(s)), xi0(std::move(x0)) {
        tau = tau_;
    }

    LoopElement xi_at(const Complex& z) const {
        LoopElement cur = xi0;
        auto flow = [&](double cx, double cy, double h) {
            if (h == 0.0) return;
            int d = cur.d;
            const LieAlgebraSpec& sp = spec;
            auto rhs = [&sp, d, cx, cy](double, const OdeState& y, OdeState& dy) {
                laxdetail::flow_rhs(sp, d, cx, cy, y, dy);
            };
            auto tr = ode_solve(rhs, laxdetail::flatten(cur), 0.0, h, ode_tol);
            cur = laxdetail::unflatten(spec, d, tr.back());
        };
        flow(1.0, 0.0, z.real());
        flow(0.0, 1.0, z.imag());
        return cur;
    }

    std::pair<M2, M2> phi(const Complex& z, const Complex& lambda) const override {
        return phi_lambda(spec, xi_at(z), lambda);
    }

    std::size_t aux_dim() const override {
        return std::size_t(2 * xi0.d + 1) * std::size_t(spec.dim);
    }
    OdeState aux_at(const Complex& z) const override { return laxdetail::flatten(xi_at(z)); }
    void aux_rhs(const Complex& dir, const OdeState& aux, OdeState& daux) const override {
        laxdetail::flow_rhs(spec, xi0.d, dir.real(), dir.imag(), aux, daux);
    }
    std::pair<M2, M2> phi_aux(const OdeState& aux, const Complex& /*z*/,
                              const Complex& lambda) const override {
        LoopElement xi = laxdetail::unflatten(spec, xi0.d, aux);
        return phi_lambda(spec, xi, lambda);
    }
};

struct HolonomySample {
    Complex lambda;
    M2 H;
    Complex mu;            // eigenvalue with |mu| >= 1 (ties: Im mu >= 0)
    Complex discriminant;  // tr(H)^2 - 4
    double det_residual = 0.0;
};

// Parallel transport of nabla_lambda along the straight generator path from
// the basepoint: solves Psi' = -phi_lambda(gamma') Psi, Psi(0) = I.
inline HolonomySample transport(const ConnectionFamily& fam, const Complex& generator,
                                const Complex& lambda, const Complex& basepoint = Complex(0.0),
                                double ode_tol = 1e-10) {
    if (std::abs(lambda) <= 1e-6)
        throw Error(ErrorKind::precondition, "lambda too close to the connection pole at 0");

    const std::size_t na = fam.aux_dim();
    OdeState y0 = fam.aux_at(basepoint);
    for (int i = 0; i < 4; ++i) y0.push_back(i % 3 == 0 ? Complex(1.0) : Complex(0.0));

    auto rhs = [&](double t, const OdeState& y, OdeState& dy) {
        dy.assign(y.size(), Complex(0.0));
        std::pair<M2, M2> ph;
        if (na > 0) {
            OdeState aux(y.begin(), y.begin() + long(na));
            OdeState daux;
            fam.aux_rhs(generator, aux, daux);
            for (std::size_t i = 0; i < na; ++i) dy[i] = daux[i];
            ph = fam.phi_aux(aux, basepoint + t * generator, lambda);
        } else {
            ph = fam.phi(basepoint + t * generator, lambda);
        }
        M2 coeff = ph.first * generator + ph.second * std::conj(generator);
        M2 Psi;
        Psi.a = {y[na], y[na + 1], y[na + 2], y[na + 3]};
        M2 d = (coeff * Psi) * Complex(-1.0);
        for (int i = 0; i < 4; ++i) dy[na + std::size_t(i)] = d.a[std::size_t(i)];
    };

    auto tr = ode_solve(rhs, y0, 0.0, 1.0, ode_tol);
    const OdeState& e = tr.back();
    HolonomySample hs;
    hs.lambda = lambda;
    hs.H.a = {e[na], e[na + 1], e[na + 2], e[na + 3]};
    Complex det = hs.H.det();
    hs.det_residual = std::abs(det - Complex(1.0));
    hs.H = hs.H * (1.0 / std::sqrt(det));  // principal branch: det ~ 1
    Complex tr2 = hs.H.trace();
    hs.discriminant = tr2 * tr2 - 4.0;
    Complex root = std::sqrt(hs.discriminant);
    Complex mu1 = 0.5 * (tr2 + root), mu2 = 0.5 * (tr2 - root);
    hs.mu = std::abs(mu1) > std::abs(mu2) ? mu1 : mu2;
    if (std::abs(std::abs(mu1) - std::abs(mu2)) < 1e-12)
        hs.mu = (mu1.imag() >= 0) ? mu1 : mu2;
    return hs;
}

// --- audits -------------------------------------------------------------------

struct LambdaGrid {
    int n_radial = 64;
    int n_angular = 64;
    int n_circle = 256;
    double r_min = 0.05, r_max = 20.0;

    std::vector<Complex> points() const {
        std::vector<Complex> out;
        for (int i = 0; i < n_radial; ++i) {
            double r = r_min * std::pow(r_max / r_min, double(i) / (n_radial - 1));
            for (int j = 0; j < n_angular; ++j) {
                double th = 2 * kPi * j / n_angular;
                out.push_back(r * Complex(std::cos(th), std::sin(th)));
            }
        }
        for (int j = 0; j < n_circle; ++j) {
            double th = 2 * kPi * j / n_circle;
            out.push_back(Complex(std::cos(th), std::sin(th)));
        }
        return out;
    }
};

struct SymmetryAudit {
    double max_symmetry = 0.0;      // |conj(H_{1/conj(l)})^T H_l - I|
    double max_unitarity = 0.0;     // |H H^* - I| on |l| = 1
    double max_det = 0.0;           // |det H - 1| before renormalization
    double max_commutator = 0.0;    // |H_1 H_tau - H_tau H_1|
};

inline SymmetryAudit symmetry_audit(const ConnectionFamily& fam,
                                    const std::vector<Complex>& lambdas,
                                    const Complex& basepoint = Complex(0.0),
                                    double ode_tol = 1e-10, int jobs = 1) {
    SymmetryAudit audit;
    struct Row {
        double sym, uni, det, comm;
    };
    auto rows = parallel_map(lambdas, [&](const Complex& l) -> Row {
        HolonomySample h1 = transport(fam, Complex(1.0), l, basepoint, ode_tol);
        HolonomySample h1i = transport(fam, Complex(1.0), 1.0 / std::conj(l), basepoint, ode_tol);
        HolonomySample ht = transport(fam, fam.tau, l, basepoint, ode_tol);
        Row r{};
        r.sym = (h1i.H.conj_elem().transpose() * h1.H - M2::identity()).norm();
        r.det = std::max(h1.det_residual, ht.det_residual);
        r.comm = (h1.H * ht.H - ht.H * h1.H).norm();
        r.uni = (std::abs(std::abs(l) - 1.0) < 1e-12)
                    ? (h1.H * h1.H.conj_transpose() - M2::identity()).norm()
                    : 0.0;
        return r;
    }, jobs);
    for (const auto& r : rows) {
        audit.max_symmetry = std::max(audit.max_symmetry, r.sym);
        audit.max_unitarity = std::max(audit.max_unitarity, r.uni);
        audit.max_det = std::max(audit.max_det, r.det);
        audit.max_commutator = std::max(audit.max_commutator, r.comm);
    }
    return audit;
}

// --- discriminant scan ----------------------------------------------------------

struct ScanSample {
    Complex lambda;
    Complex trace;
    Complex discriminant;
};

struct DetectedRoot {
    Complex lambda;
    int multiplicity = 1;   // winding of the discriminant around the cell
    bool resolved = true;   // false: cluster flagged, not polished
};

struct DiscriminantScan {
    std::vector<ScanSample> samples;
    std::vector<DetectedRoot> roots;
    int grid_radial = 0, grid_angular = 0;
};

inline DiscriminantScan discriminant_scan(const ConnectionFamily& fam, int n_radial,
                                          int n_angular, double r_min, double r_max,
                                          const Complex& basepoint = Complex(0.0),
                                          double ode_tol = 1e-10, int jobs = 1) {
    DiscriminantScan scan;
    scan.grid_radial = n_radial;
    scan.grid_angular = n_angular;

    std::vector<Complex> pts;
    for (int i = 0; i < n_radial; ++i) {
        double r = r_min * std::pow(r_max / r_min, double(i) / (n_radial - 1));
        for (int j = 0; j < n_angular; ++j) {
            double th = 2 * kPi * j / n_angular;
            pts.push_back(r * Complex(std::cos(th), std::sin(th)));
        }
    }
    auto disc_of = [&](const Complex& l) {
        return transport(fam, Complex(1.0), l, basepoint, ode_tol);
    };
    auto samples = parallel_map(pts, [&](const Complex& l) {
        HolonomySample h = disc_of(l);
        return ScanSample{l, h.H.trace(), h.discriminant};
    }, jobs);
    scan.samples = samples;

    auto at = [&](int i, int j) -> const ScanSample& {
        return scan.samples[std::size_t(i) * std::size_t(n_angular) +
                            std::size_t((j % n_angular + n_angular) % n_angular)];
    };
    auto wrap = [](double x) {
        while (x > kPi) x -= 2 * kPi;
        while (x < -kPi) x += 2 * kPi;
        return x;
    };

    std::vector<DetectedRoot> found;
    for (int i = 0; i + 1 < n_radial; ++i) {
        for (int j = 0; j < n_angular; ++j) {
            const ScanSample* cell[4] = {&at(i, j), &at(i + 1, j), &at(i + 1, j + 1),
                                         &at(i, j + 1)};
            double winding = 0.0;
            bool degenerate = false;
            for (int k = 0; k < 4; ++k) {
                Complex a = cell[k]->discriminant, b = cell[(k + 1) % 4]->discriminant;
                if (std::abs(a) == 0.0 || std::abs(b) == 0.0) degenerate = true;
                winding += wrap(std::arg(b) - std::arg(a));
            }
            int w = int(std::lround(winding / (2 * kPi)));
            if (degenerate || w == 0) continue;

            // secant polish from two cell corners
            Complex z0 = cell[0]->lambda, z1 = cell[2]->lambda;
            Complex f0 = cell[0]->discriminant, f1 = cell[2]->discriminant;
            bool ok = false;
            for (int it = 0; it < 60; ++it) {
                Complex denom = f1 - f0;
                if (std::abs(denom) < 1e-300) break;
                Complex z2 = z1 - f1 * (z1 - z0) / denom;
                if (!finite(z2) || std::abs(z2) < 1e-6) break;
                z0 = z1;
                f0 = f1;
                z1 = z2;
                f1 = disc_of(z1).discriminant;
                if (std::abs(z1 - z0) < 1e-11 * (1.0 + std::abs(z1))) {
                    ok = true;
                    break;
                }
            }
            DetectedRoot root;
            root.lambda = z1;
            root.resolved = ok;
            // multiplicity by local scaling: |disc(z+2h)/disc(z+h)| ~ 2^m
            if (ok) {
                Complex h(1e-4 * (1.0 + std::abs(z1)), 5e-5);
                Complex d1 = disc_of(z1 + h).discriminant;
                Complex d2 = disc_of(z1 + 2.0 * h).discriminant;
                double m = std::log(std::abs(d2 / d1)) / std::log(2.0);
                root.multiplicity = std::max(1, std::min(3, int(std::lround(m))));
            } else {
                root.multiplicity = std::max(1, std::abs(w));
            }
            found.push_back(root);
        }
    }
    // dedupe
    for (const auto& r : found) {
        bool dup = false;
        for (auto& s : scan.roots)
            if (std::abs(s.lambda - r.lambda) < 1e-6 * (1.0 + std::abs(r.lambda))) {
                dup = true;
                s.multiplicity = std::max(s.multiplicity, r.multiplicity);
                s.resolved = s.resolved && r.resolved;
            }
        if (!dup) scan.roots.push_back(r);
    }
    std::sort(scan.roots.begin(), scan.roots.end(), [](const DetectedRoot& a, const DetectedRoot& b) {
        double aa = arg_2pi(a.lambda), ab = arg_2pi(b.lambda);
        if (aa != ab) return aa < ab;
        return std::abs(a.lambda) < std::abs(b.lambda);
    });
    return scan;
}

// --- empirical curve ------------------------------------------------------------

struct EmpiricalSpectralCurve {
    SpectralCurve curve;
    double fit_residual = 0.0;
};

// points: simple branch points; an entry at (numerically) lambda = 0 marks the
// branched case (odd count including 0 <=> conformal).
inline EmpiricalSpectralCurve fit_empirical_curve(std::vector<Complex> points,
                                                  const ToleranceProfile& tol = {}) {
    bool branched = false;
    std::vector<Complex> finite_pts;
    for (const Complex& p : points) {
        if (std::abs(p) < 1e-6)
            branched = true;
        else
            finite_pts.push_back(p);
    }
    if (points.empty())
        throw Error(ErrorKind::degenerate_curve,
                    "no branch points detected: trivial holonomy direction");
    if ((points.size() % 2) == 1 && !branched) branched = true;  // parity decides the mode
    if (finite_pts.size() % 2 != 0)
        throw Error(ErrorKind::precondition, "odd number of finite branch points");

    ComplexPoly a = ComplexPoly::from_roots(finite_pts);
    EmpiricalSpectralCurve out;
    out.curve = build_curve(a.coeffs(), branched, tol);
    double res = 0.0;
    for (const Complex& p : finite_pts)
        res = std::max(res, std::abs(out.curve.a.eval(p)) / (1.0 + out.curve.a.max_coeff_mag()));
    out.fit_residual = res;
    return out;
}

// --- empirical periodicity -------------------------------------------------------

struct EmpiricalPeriod {
    std::string cycle;
    long long n = 0;
    double residual = 0.0;
    Complex value;
};

struct EmpiricalPeriodicityReport {
    std::vector<EmpiricalPeriod> periods;   // d log mu over A/B cycles
    Complex residue_at_zero;                // loop around p0: must vanish
    Complex c_mu, c_nu;                     // principal parts at p0
    Complex tau_recovered;
    bool pass = false;
};

namespace holdetail {

// Continued log mu increments along a lifted path; mu-branch tracked by
// continuity, paired to the lift's y-sheet only through the common start.
inline Complex log_mu_increment(const ConnectionFamily& fam, const Complex& generator,
                                const std::vector<Complex>& lambdas, const Complex& basepoint,
                                double ode_tol, int jobs) {
    auto mus = parallel_map(lambdas, [&](const Complex& l) {
        HolonomySample h = transport(fam, generator, l, basepoint, ode_tol);
        return h;
    }, jobs);
    Complex total(0.0);
    Complex prev = mus.front().mu;
    for (std::size_t i = 1; i < mus.size(); ++i) {
        Complex m = mus[i].mu;
        // continuation: pick the eigenvalue branch closer to the previous one
        Complex alt = 1.0 / m;
        if (std::abs(alt - prev) < std::abs(m - prev)) m = alt;
        total += std::log(m / prev);
        prev = m;
    }
    return total;
}

inline std::vector<Complex> lambdas_of_lift(const LiftedPath& lift, int stride) {
    std::vector<Complex> out;
    for (const auto& seg : lift.samples)
        for (std::size_t i = 0; i < seg.size(); i += std::size_t(stride)) out.push_back(seg[i].lambda);
    out.push_back(lift.last().lambda);
    return out;
}

}  // namespace holdetail

inline EmpiricalPeriodicityReport empirical_periodicity(const ConnectionFamily& fam,
                                                        const SpectralCurve& curve,
                                                        const Complex& basepoint = Complex(0.0),
                                                        double ode_tol = 1e-10, int jobs = 1) {
    EmpiricalPeriodicityReport rep;
    double ltol = 1e-7;

    // cycles: loops around each branch pair; plus B chains when g >= 1
    std::vector<std::pair<std::string, std::vector<Complex>>> loops;
    {
        if (curve.genus >= 1) {
            HomologyBasis H = build_homology(curve);
            // chain loops: gap tubes and pair tubes cover the basis up to
            // orientation and the rho images, whose d log mu periods are
            // again lattice points; loop over every chain tube.
            for (std::size_t k = 0; k < H.chain.size(); ++k)
                loops.push_back({"chain" + std::to_string(k + 1),
                                 holdetail::lambdas_of_lift(H.chain[k].lift, 4)});
        }
        // pair loops (genus 0 included): rectangle-ish tube around each pair
        for (std::size_t pi = 0; pi < curve.pairs.size(); ++pi) {
            const BranchPair& pr = curve.pairs[pi];
            ContourPath tube = homdetail::tube_around({pr.inner, pr.outer},
                                                      0.25 * std::abs(pr.outer - pr.inner));
            LiftedPath lift = lift_path(curve, tube, curve.point_over(tube.start()));
            loops.push_back({"pair" + std::to_string(pi), holdetail::lambdas_of_lift(lift, 4)});
        }
    }

    rep.pass = true;
    for (const auto& [name, ls] : loops) {
        std::vector<Complex> closed = ls;
        if (std::abs(closed.front() - closed.back()) > 1e-12)
            closed.push_back(closed.front());
        Complex I = holdetail::log_mu_increment(fam, Complex(1.0), closed, basepoint, ode_tol, jobs);
        auto lr = lattice_residual(I);
        rep.periods.push_back({name, lr.n, lr.residual, I});
        rep.pass = rep.pass && lr.residual < ltol;
    }

    // residue over 0 and principal parts at p0 via a small lambda circle
    {
        double r0 = 0.5;
        for (const Complex& b : curve.branch_points) r0 = std::min(r0, 0.5 * std::abs(b));
        r0 = std::max(r0, 0.08);
        int N = 768;
        double turns = curve.branched ? 2.0 : 1.0;  // zeta chart needs a double loop
        std::vector<Complex> ls;
        for (int i = 0; i <= N; ++i) {
            double th = turns * 2 * kPi * i / N;
            ls.push_back(r0 * Complex(std::cos(th), std::sin(th)));
        }
        // log mu samples along the circle (continued)
        auto hs = parallel_map(ls, [&](const Complex& l) {
            return transport(fam, Complex(1.0), l, basepoint, ode_tol);
        }, jobs);
        auto ht = parallel_map(ls, [&](const Complex& l) {
            return transport(fam, fam.tau, l, basepoint, ode_tol);
        }, jobs);
        // branch-track both eigenvalue families from a common start
        std::vector<Complex> lmu(ls.size()), lnu(ls.size());
        Complex mu_prev = hs.front().mu;
        // pair nu to mu through the common eigenvector at the start
        Complex nu_prev;
        {
            const M2& H1 = hs.front().H;
            const M2& Ht = ht.front().H;
            // eigenvector of H1 for mu_prev
            Complex a = H1.a[0] - mu_prev, b = H1.a[1];
            Complex v0, v1;
            if (std::abs(b) > std::abs(a)) {
                v0 = 1.0;
                v1 = (mu_prev - H1.a[0]) / H1.a[1];
            } else {
                v0 = H1.a[2] == Complex(0.0) ? Complex(0.0) : (mu_prev - H1.a[3]) / H1.a[2];
                v1 = 1.0;
            }
            Complex w0 = Ht.a[0] * v0 + Ht.a[1] * v1;
            Complex w1 = Ht.a[2] * v0 + Ht.a[3] * v1;
            nu_prev = (std::abs(v0) > std::abs(v1)) ? w0 / v0 : w1 / v1;
            Complex alt = 1.0 / nu_prev;
            if (std::abs(ht.front().mu - nu_prev) > std::abs(ht.front().mu - alt))
                ;  // nu_prev already the matched branch
        }
        lmu[0] = std::log(mu_prev);
        lnu[0] = std::log(nu_prev);
        for (std::size_t i = 1; i < ls.size(); ++i) {
            Complex m = hs[i].mu;
            if (std::abs(1.0 / m - mu_prev) < std::abs(m - mu_prev)) m = 1.0 / m;
            lmu[i] = lmu[i - 1] + std::log(m / mu_prev);
            mu_prev = m;
            Complex n = ht[i].mu;
            if (std::abs(1.0 / n - nu_prev) < std::abs(n - nu_prev)) n = 1.0 / n;
            lnu[i] = lnu[i - 1] + std::log(n / nu_prev);
            nu_prev = n;
        }
        rep.residue_at_zero = (lmu.back() - lmu.front()) / kTwoPiI;

        // c = -(1/2 pi i) contour-sum t dm in the chart coordinate t
        Complex cmu(0.0), cnu(0.0);
        for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
            Complex t0 = ls[i], t1 = ls[i + 1];
            if (curve.branched) {
                double th0 = turns * 2 * kPi * double(i) / N * 0.5;
                double th1 = turns * 2 * kPi * double(i + 1) / N * 0.5;
                t0 = std::sqrt(r0) * Complex(std::cos(th0), std::sin(th0));
                t1 = std::sqrt(r0) * Complex(std::cos(th1), std::sin(th1));
            }
            Complex tmid = 0.5 * (t0 + t1);
            cmu += tmid * (lmu[i + 1] - lmu[i]);
            cnu += tmid * (lnu[i + 1] - lnu[i]);
        }
        cmu /= -kTwoPiI;
        cnu /= -kTwoPiI;
        rep.c_mu = cmu;
        rep.c_nu = cnu;
        rep.tau_recovered = cnu / cmu;
        rep.pass = rep.pass && std::abs(rep.residue_at_zero) < 1e-6;
    }
    return rep;
}

}  // namespace spectra
