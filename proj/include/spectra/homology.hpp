#pragma once

#include <vector>

#include "spectra/core.hpp"
#include "spectra/curve.hpp"
#include "spectra/linalg.hpp"
#include "spectra/quadrature.hpp"

namespace spectra {

// A lifted closed cycle with an orientation multiplier.
struct Cycle {
    ContourPath path;
    LiftedPath lift;
    int sign = 1;
};

// Homology basis built from a chain of thin tube loops c_1..c_m around
// consecutive branch points e_k, e_{k+1} of the ordering
//   e = (a_0, 1/conj(a_0), a_1, 1/conj(a_1), ...)
// (pairs sorted by ray angle; odd segments are the radial cuts).  The
// measured intersection chain is normalized to c_k . c_{k+1} = +1 and the
// basis is assembled from the pair loops E_i = c_{2i-1} and gap loops
// D_i = c_{2i} as
//   A_i = (D_i - rho_* D_i) / 2,   B_j = - (E_1 + ... + E_j),
// which satisfies A_i . B_j = delta_ij together with the real-structure
// normalizations rho_* A_i = -A_i and rho_* B_j = B_j.
struct CycleRef {
    std::size_t chain_index;
    double weight = 1.0;
    bool rho_image = false;  // integrate over the pointwise rho image
};

struct HomologyBasis {
    std::vector<Cycle> chain;
    std::vector<std::vector<CycleRef>> a_parts;  // A_1..A_g
    std::vector<std::vector<CycleRef>> b_parts;  // B_1..B_g
    CurvePoint basepoint;
    double tube_width_min = 0.0;
    std::vector<double> cap_width;  // tube width per chain loop

    int genus() const { return static_cast<int>(a_parts.size()); }
};

// Open path from p_k to q_k over lambda = k in {+1,-1}, crossing the
// reference cut once.  Built to be lambda-disjoint from every A tube, so its
// class is pinned modulo the A span (invisible to A-normalized forms).
struct GammaPath {
    Complex k;
    LiftedPath lift;
    CurvePoint from, to;
    // measured class shift: the built path may differ from the cut-polygon
    // representative by B classes; b_shift[i] = (gamma.D_i - gamma.rhoD_i)/2
    // with the chain sign folded in, so that
    //   int_{gamma,std} = -( int_{gamma} + sum_i b_shift[i] int_{B_i} )
    // (the leading sign is the boundary orientation of the cut polygon).
    std::vector<double> b_shift;
};

namespace homdetail {

// Tube (offset boundary) of width w around an open polyline, counterclockwise.
inline ContourPath tube_around(const std::vector<Complex>& pts, double w) {
    if (pts.size() < 2) throw Error(ErrorKind::precondition, "tube needs >= 2 points");
    ContourPath path;
    auto normal = [](const Complex& d) { return Complex(0.0, 1.0) * (d / std::abs(d)); };
    const std::size_t m = pts.size() - 1;

    // + side forward
    for (std::size_t i = 0; i < m; ++i) {
        Complex d = pts[i + 1] - pts[i];
        Complex n = normal(d);
        path.segments.push_back(PathSegment::line(pts[i] + w * n, pts[i + 1] + w * n));
        if (i + 1 < m) {
            Complex d2 = pts[i + 2] - pts[i + 1];
            Complex n2 = normal(d2);
            double t0 = std::arg(n), t1 = std::arg(n2);
            double sweep = t1 - t0;
            while (sweep > kPi) sweep -= 2 * kPi;
            while (sweep < -kPi) sweep += 2 * kPi;
            if (std::abs(sweep) > 1e-12)
                path.segments.push_back(PathSegment::arc(pts[i + 1], w, t0, t0 + sweep));
        }
    }
    // cap at the far end: +n to -n through +d
    {
        Complex d = pts[m] - pts[m - 1];
        Complex n = normal(d);
        double t0 = std::arg(n);
        path.segments.push_back(PathSegment::arc(pts[m], w, t0, t0 - kPi));
    }
    // - side backward
    for (std::size_t i = m; i-- > 0;) {
        Complex d = pts[i + 1] - pts[i];
        Complex n = normal(d);
        path.segments.push_back(PathSegment::line(pts[i + 1] - w * n, pts[i] - w * n));
        if (i > 0) {
            Complex d2 = pts[i] - pts[i - 1];
            Complex n2 = normal(d2);
            double t0 = std::arg(-normal(d)), t1 = std::arg(-n2);
            double sweep = t1 - t0;
            while (sweep > kPi) sweep -= 2 * kPi;
            while (sweep < -kPi) sweep += 2 * kPi;
            if (std::abs(sweep) > 1e-12)
                path.segments.push_back(PathSegment::arc(pts[i], w, t0, t0 + sweep));
        }
    }
    // cap at the start: -n to +n through -d
    {
        Complex d = pts[1] - pts[0];
        Complex n = normal(d);
        double t0 = std::arg(-n);
        path.segments.push_back(PathSegment::arc(pts[0], w, t0, t0 - kPi));
    }
    path.closed = true;
    return path;
}

inline double dist_point_segment(const Complex& p, const Complex& a, const Complex& b) {
    Complex d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = (std::conj(d) * (p - a)).real() / len2;
    t = std::max(0.0, std::min(1.0, t));
    return std::abs(p - (a + t * d));
}

inline double dist_point_polyline(const Complex& p, const std::vector<Complex>& poly) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
        d = std::min(d, dist_point_segment(p, poly[i], poly[i + 1]));
    return d;
}

// Detour an [a,b] corridor around nearby special points (form poles): the
// tube interior must keep clear of them or periods lose accuracy.
inline std::vector<Complex> corridor(const Complex& a, const Complex& b,
                                     const std::vector<Complex>& avoid, double clearance) {
    std::vector<Complex> pts{a, b};
    for (int pass = 0; pass < 4; ++pass) {
        bool changed = false;
        std::vector<Complex> out;
        out.push_back(pts.front());
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            Complex s0 = pts[i], s1 = pts[i + 1];
            Complex worst;
            double worst_d = clearance;
            for (const Complex& p : avoid) {
                if (std::abs(p - s0) < 1e-12 || std::abs(p - s1) < 1e-12) continue;
                double d = dist_point_segment(p, s0, s1);
                if (d < worst_d) {
                    worst_d = d;
                    worst = p;
                }
            }
            if (worst_d < clearance) {
                Complex dseg = (s1 - s0) / std::abs(s1 - s0);
                // foot of the perpendicular, pushed sideways off the point
                double t = ((std::conj(s1 - s0) * (worst - s0)).real()) / std::norm(s1 - s0);
                t = std::max(0.15, std::min(0.85, t));
                Complex foot = s0 + t * (s1 - s0);
                Complex n = Complex(0, 1) * dseg;
                Complex off = foot - worst;
                double side = (std::conj(n) * off).real();
                Complex mid = worst + (side >= 0 ? 1.0 : -1.0) * n * (2.2 * clearance);
                out.push_back(mid);
                changed = true;
            }
            out.push_back(s1);
        }
        pts = out;
        if (!changed) break;
    }
    return pts;
}

inline std::vector<Complex> polyline_of(const LiftedPath& lift) {
    std::vector<Complex> out;
    for (const auto& seg : lift.samples)
        for (const auto& s : seg) out.push_back(s.lambda);
    return out;
}

struct CrossingCount {
    int signed_same_sheet = 0;
    int raw = 0;
};

inline std::vector<LiftedSample> flat_samples(const LiftedPath& lift) {
    std::vector<LiftedSample> out;
    for (const auto& seg : lift.samples)
        for (const auto& s : seg) out.push_back(s);
    return out;
}

inline std::vector<LiftedSample> rho_samples(const SpectralCurve& curve,
                                             const std::vector<LiftedSample>& in) {
    std::vector<LiftedSample> out = in;
    for (auto& s : out) {
        CurvePoint im = curve.rho({s.lambda, s.y, Chart::generic});
        s.lambda = im.lambda;
        s.y = im.y;
    }
    return out;
}

// Signed on-curve intersection count of two densely sampled lifted paths, by
// polyline crossing detection plus sheet comparison.
inline CrossingCount intersections_samples(const SpectralCurve& curve,
                                           const std::vector<LiftedSample>& xs,
                                           const std::vector<LiftedSample>& ys) {
    CrossingCount cc;

    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        Complex a0 = xs[i].lambda, a1 = xs[i + 1].lambda;
        Complex da = a1 - a0;
        if (std::abs(da) == 0.0) continue;
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            Complex b0 = ys[j].lambda, b1 = ys[j + 1].lambda;
            Complex db = b1 - b0;
            if (std::abs(db) == 0.0) continue;
            // solve a0 + s da = b0 + t db over reals
            double ax = da.real(), ay = da.imag(), bx = -db.real(), by = -db.imag();
            double det = ax * by - ay * bx;
            if (std::abs(det) < 1e-300) continue;
            double rx = b0.real() - a0.real(), ry = b0.imag() - a0.imag();
            double s = (rx * by - ry * bx) / det;
            double t = (ax * ry - ay * rx) / det;
            if (s < 0.0 || s >= 1.0 || t < 0.0 || t >= 1.0) continue;
            Complex z = a0 + s * da;
            // sheet of each path at z
            Complex w = std::sqrt(curve.P(z));
            Complex yx = (s < 0.5) ? xs[i].y : xs[i + 1].y;
            Complex yy = (t < 0.5) ? ys[j].y : ys[j + 1].y;
            Complex wx = (std::abs(w - yx) <= std::abs(w + yx)) ? w : -w;
            Complex wy = (std::abs(w - yy) <= std::abs(w + yy)) ? w : -w;
            ++cc.raw;
            if (std::abs(wx - wy) < std::abs(wx + wy)) {
                double cross = da.real() * db.imag() - da.imag() * db.real();
                cc.signed_same_sheet += (cross > 0) ? 1 : -1;
            }
        }
    }
    return cc;
}

inline CrossingCount intersections(const SpectralCurve& curve, const LiftedPath& X,
                                   const LiftedPath& Y) {
    return intersections_samples(curve, flat_samples(X), flat_samples(Y));
}

// Monomial differentials lambda^{j-1} dlambda / y integrated over a lifted
// cycle (local helper; the differentials module has the full machinery).
inline Complex monomial_period(const SpectralCurve& curve, const LiftedPath& lift, int j,
                               double tol) {
    Complex total(0.0);
    for (std::size_t si = 0; si < lift.base.segments.size(); ++si) {
        const auto& seg = lift.base.segments[si];
        auto f = [&](double t) {
            Complex l = seg.at(t);
            Complex y = lift.y_at(curve, si, t);
            return std::pow(l, j - 1) / y * seg.deriv(t);
        };
        total += integrate_param(f, tol);
    }
    return total;
}

}  // namespace homdetail

inline HomologyBasis build_homology(const SpectralCurve& curve) {
    const int g = curve.genus;
    if (!curve.validation.valid) throw Error(ErrorKind::precondition, "curve not validated");
    if (g < 1) throw Error(ErrorKind::precondition, "build_homology requires genus >= 1");

    HomologyBasis H;

    // Ordered branch point list: pairs by ray angle, (inner, outer) within a
    // pair.  Branched curves use the (0, infinity) pair as the reference cut.
    std::vector<Complex> e;
    const auto& pairs = curve.pairs;
    const int npairs = static_cast<int>(pairs.size());
    if (!curve.branched && npairs != g + 1)
        throw Error(ErrorKind::construction_failure, "expected g+1 pairs");
    if (curve.branched && npairs != g)
        throw Error(ErrorKind::construction_failure, "expected g pairs");
    for (const auto& pr : pairs) {
        e.push_back(pr.inner);
        e.push_back(pr.outer);
    }

    // chain segments: e_1..e_{2g+2}; branched appends the origin so the last
    // gap loop winds the 0-infinity cut partner.
    std::size_t nloops = curve.branched ? std::size_t(2 * g) : std::size_t(2 * g + 1);
    if (curve.branched) e.push_back(Complex(0.0));

    std::vector<Complex> poles{Complex(0.0), Complex(1.0), Complex(-1.0)};

    double scale = 0.0;
    for (const Complex& b : curve.branch_points) scale = std::max(scale, std::abs(b));
    double wmin_abs = 1e4 * curve.tol.path_tol * (1.0 + scale);

    H.tube_width_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nloops; ++k) {
        Complex a = e[k], b = e[k + 1];
        // clearance from all other branch points to the corridor
        std::vector<Complex> others;
        for (const Complex& p : curve.branch_points)
            if (std::abs(p - a) > 1e-12 && std::abs(p - b) > 1e-12) others.push_back(p);
        if (curve.branched && std::abs(a) > 1e-12 && std::abs(b) > 1e-12)
            others.push_back(Complex(0.0));
        std::vector<Complex> avoid = others;
        for (const Complex& p : poles)
            if (std::abs(p - a) > 1e-12 && std::abs(p - b) > 1e-12) avoid.push_back(p);

        double clearance = std::min(0.25 * std::abs(b - a), 0.35);

        std::vector<Complex> mid = homdetail::corridor(a, b, avoid, clearance);
        // slim tubes: the rho image of a tube around z widens like w/|z|^2,
        // and the gamma corridors must thread between the images
        double w = std::min(clearance / 2.0, 0.05);
        for (const Complex& p : others)
            w = std::min(w, homdetail::dist_point_polyline(p, mid) / 3.0);
        if (!(w > wmin_abs))
            throw Error(ErrorKind::construction_failure,
                        "branch points cluster: tube width " + std::to_string(w));
        H.tube_width_min = std::min(H.tube_width_min, w);

        Cycle c;
        c.path = homdetail::tube_around(mid, w);
        CurvePoint start = curve.point_over(c.path.start());
        c.lift = lift_path(curve, c.path, start);
        if (!c.lift.closes_on_sheet)
            throw Error(ErrorKind::construction_failure,
                        "chain loop does not close on its sheet");
        H.chain.push_back(std::move(c));
        H.cap_width.push_back(w);
    }

    // Measure consecutive intersection numbers and normalize the chain to
    // c_k . c_{k+1} = +1; non-consecutive loops must be disjoint.
    for (std::size_t k = 0; k + 1 < H.chain.size(); ++k) {
        auto cc = homdetail::intersections(curve, H.chain[k].lift, H.chain[k + 1].lift);
        int v = cc.signed_same_sheet * H.chain[k].sign * H.chain[k + 1].sign;
        if (v == 0 || std::abs(v) != 1)
            throw Error(ErrorKind::construction_failure,
                        "consecutive chain loops have intersection " + std::to_string(v));
        if (v < 0) H.chain[k + 1].sign = -H.chain[k + 1].sign;
    }
    for (std::size_t k = 0; k < H.chain.size(); ++k)
        for (std::size_t j = k + 2; j < H.chain.size(); ++j) {
            auto cc = homdetail::intersections(curve, H.chain[k].lift, H.chain[j].lift);
            if (cc.signed_same_sheet != 0)
                throw Error(ErrorKind::construction_failure,
                            "non-consecutive chain loops intersect");
        }

    for (int i = 1; i <= g; ++i) {
        std::vector<CycleRef> ai;
        ai.push_back({std::size_t(2 * i - 1), 0.5, false});
        ai.push_back({std::size_t(2 * i - 1), -0.5, true});
        H.a_parts.push_back(ai);
        std::vector<CycleRef> bj;
        for (int k = 1; k <= i; ++k) bj.push_back({std::size_t(2 * k - 2), -1.0, false});
        H.b_parts.push_back(bj);
    }

    H.basepoint = CurvePoint{H.chain.front().lift.first().lambda,
                             H.chain.front().lift.first().y, Chart::generic};
    return H;
}

// gamma_k from p_k to q_k: a single crossing of a designated cut.  Candidate
// corridors are tried until the lifted path has zero net signed intersection
// with every A cycle (gap tube minus rho image), which pins its class modulo
// the A span; A-normalized forms then cannot see the remaining ambiguity.
inline GammaPath build_gamma(const SpectralCurve& curve, int k_sign,
                             const HomologyBasis* homology = nullptr) {
    if (k_sign != 1 && k_sign != -1)
        throw Error(ErrorKind::precondition, "k must be +1 or -1");
    Complex k(double(k_sign), 0.0);
    if (curve.min_branch_distance(k) < 1e-6)
        throw Error(ErrorKind::degenerate_curve, "lambda = k is (nearly) a branch point");

    auto wrap = [](double x) {
        while (x > kPi) x -= 2 * kPi;
        while (x < -kPi) x += 2 * kPi;
        return x;
    };
    auto polar = [](double th, double r) { return r * Complex(std::cos(th), std::sin(th)); };

    // A representatives: gap tubes and their rho images, as sample sets.
    struct ARep {
        std::vector<LiftedSample> direct, image;
        double weight_sign;  // chain sign
    };
    std::vector<ARep> areps;
    if (homology) {
        for (const auto& parts : homology->a_parts) {
            // parts = {(idx, +1/2, direct), (idx, -1/2, image)} over one gap tube
            ARep rep;
            rep.weight_sign = 1.0;
            for (const CycleRef& ref : parts) {
                auto samples = homdetail::flat_samples(homology->chain[ref.chain_index].lift);
                rep.weight_sign = double(homology->chain[ref.chain_index].sign);
                if (ref.rho_image)
                    rep.image = homdetail::rho_samples(curve, samples);
                else
                    rep.direct = samples;
            }
            areps.push_back(std::move(rep));
        }
    }

    double r_min = 1.0;
    for (const Complex& b : curve.branch_points) r_min = std::min(r_min, std::abs(b));
    double rho_travel = (0.42 + 0.04 * (k_sign > 0 ? 0 : 1)) * r_min;
    double rho2 = rho_travel * 1.05;
    double r_top = 2.0;
    for (const Complex& b : curve.branch_points) r_top = std::max(r_top, std::abs(b));
    r_top = 1.6 * r_top + 0.75;

    double phi0 = (k_sign > 0) ? 0.0 : kPi;
    auto half_gap = [&](double theta) {
        double d = 2 * kPi;
        for (const auto& pr : curve.pairs) {
            double dd = std::abs(wrap(pr.theta - theta));
            if (dd > 1e-9) d = std::min(d, dd);
        }
        return 0.5 * d;
    };

    // leg angle: keep a sensible margin from branch rays
    double phi_leg = phi0;
    {
        auto ray_margin = [&](double phi) {
            double d = 2 * kPi;
            for (const auto& pr : curve.pairs) d = std::min(d, std::abs(wrap(pr.theta - phi)));
            return d;
        };
        for (int step = 0; step <= 16; ++step) {
            bool done = false;
            for (double sgn : {1.0, -1.0}) {
                double cand = phi0 + sgn * 0.05 * step;
                if (ray_margin(cand) > 0.08) {
                    phi_leg = cand;
                    done = true;
                    break;
                }
                if (step == 0) break;
            }
            if (done) break;
        }
    }

    // candidate crossing cuts
    struct Cand {
        double theta;
        double lo, hi;
        double max_omega;
    };
    std::vector<Cand> cands;
    if (!curve.branched) {
        std::vector<std::size_t> order(curve.pairs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return std::abs(wrap(curve.pairs[x].theta - phi0)) <
                   std::abs(wrap(curve.pairs[y].theta - phi0));
        });
        for (std::size_t idx : order) {
            const BranchPair& pr = curve.pairs[idx];
            double r = std::abs(pr.inner);
            cands.push_back({pr.theta, r * 1.1, 0.9 / r, half_gap(pr.theta) / 1.5});
        }
    } else {
        std::vector<double> th;
        for (const auto& pr : curve.pairs) th.push_back(pr.theta);
        std::sort(th.begin(), th.end());
        double best = 2 * kPi, at = kPi / 2;
        if (!th.empty()) {
            best = -1.0;
            for (std::size_t i = 0; i < th.size(); ++i) {
                double next = (i + 1 < th.size()) ? th[i + 1] : th[0] + 2 * kPi;
                if (next - th[i] > best) {
                    best = next - th[i];
                    at = 0.5 * (next + th[i]);
                }
            }
        }
        cands.push_back({std::fmod(at + 2 * kPi, 2 * kPi), 0.8, 1.25, std::max(best / 3.0, 0.05)});
    }

    CurvePoint from = curve.point_over(k);
    std::string last_fail = "no candidate crossing assembled";

    for (const Cand& cd : cands) {
        double d_ray = wrap(cd.theta - phi_leg);
        if (std::abs(d_ray) < 0.05) continue;
        for (double omega : {0.25, 0.18, 0.12, 0.35, 0.08}) {
            if (omega > cd.max_omega) continue;
            if (curve.branched && std::abs(d_ray) < omega + 0.02) continue;
            for (double s_app : {1.0, -1.0}) {
                if (curve.branched && s_app != ((d_ray >= 0) ? -1.0 : 1.0)) continue;
                for (int exit_style = 0; exit_style < (curve.branched ? 1 : 2); ++exit_style) {
                    for (double xfrac : {0.5, 0.3, 0.7}) {
                        double cross_r = cd.lo * std::pow(cd.hi / cd.lo, xfrac);
                        if (curve.min_branch_distance(polar(cd.theta, cross_r)) < 0.04) continue;
                        double a_in = cd.theta + s_app * omega;
                        double a_out = cd.theta - s_app * omega;

                        ContourPath path;
                        if (phi_leg != phi0)
                            path.segments.push_back(
                                PathSegment::arc(Complex(0.0), 1.0, phi0, phi_leg));
                        path.segments.push_back(
                            PathSegment::line(polar(phi_leg, 1.0), polar(phi_leg, rho_travel)));
                        double sweep_out = wrap(a_in - phi_leg);
                        if (curve.branched) {
                            bool passes = (sweep_out * d_ray > 0) &&
                                          (std::abs(d_ray) < std::abs(sweep_out));
                            if (passes)
                                sweep_out = (sweep_out > 0) ? sweep_out - 2 * kPi
                                                            : sweep_out + 2 * kPi;
                        }
                        path.segments.push_back(PathSegment::arc(Complex(0.0), rho_travel,
                                                                 phi_leg, phi_leg + sweep_out));
                        path.segments.push_back(
                            PathSegment::line(polar(a_in, rho_travel), polar(a_in, cross_r)));
                        path.segments.push_back(
                            PathSegment::arc(Complex(0.0), cross_r, a_in, a_out));
                        if (exit_style == 0 && !curve.branched) {
                            path.segments.push_back(
                                PathSegment::line(polar(a_out, cross_r), polar(a_out, r_top)));
                            double sweep_top = wrap(phi_leg - a_out);
                            path.segments.push_back(PathSegment::arc(Complex(0.0), r_top, a_out,
                                                                     a_out + sweep_top));
                            path.segments.push_back(
                                PathSegment::line(polar(phi_leg, r_top), polar(phi_leg, 1.0)));
                        } else {
                            path.segments.push_back(
                                PathSegment::line(polar(a_out, cross_r), polar(a_out, rho2)));
                            double delta = wrap(phi_leg - a_out);
                            double dray2 = wrap(cd.theta - a_out);
                            bool passes =
                                (delta * dray2 > 0) && (std::abs(dray2) < std::abs(delta));
                            double sweep_back = (curve.branched && passes)
                                                    ? (delta > 0 ? delta - 2 * kPi
                                                                 : delta + 2 * kPi)
                                                    : delta;
                            path.segments.push_back(PathSegment::arc(Complex(0.0), rho2, a_out,
                                                                     a_out + sweep_back));
                            path.segments.push_back(
                                PathSegment::line(polar(phi_leg, rho2), polar(phi_leg, 1.0)));
                        }
                        if (phi_leg != phi0)
                            path.segments.push_back(
                                PathSegment::arc(Complex(0.0), 1.0, phi_leg, phi0));
                        path.closed = false;

                        LiftedPath lift;
                        try {
                            lift = lift_path(curve, path, from);
                        } catch (const Error& e) {
                            last_fail = e.what();
                            continue;
                        }
                        Complex y_end = lift.last().y;
                        if (!(std::abs(y_end + from.y) < std::abs(y_end - from.y))) {
                            last_fail = "gamma candidate does not change sheet";
                            continue;
                        }
                        // measure the class shift against each A cycle
                        GammaPath gp;
                        auto gsamples = homdetail::flat_samples(lift);
                        for (const ARep& rep : areps) {
                            auto cd1 = homdetail::intersections_samples(curve, gsamples,
                                                                        rep.direct);
                            auto cd2 = homdetail::intersections_samples(curve, gsamples,
                                                                        rep.image);
                            gp.b_shift.push_back(
                                0.5 * rep.weight_sign *
                                double(cd1.signed_same_sheet - cd2.signed_same_sheet));
                        }
                        gp.k = k;
                        gp.lift = std::move(lift);
                        gp.from = from;
                        gp.to = curve.sigma(from);
                        return gp;
                    }
                }
            }
        }
    }
    throw Error(ErrorKind::construction_failure, "gamma construction failed: " + last_fail);
}

}  // namespace spectra
