#pragma once

#include <random>
#include <vector>

#include "spectra/core.hpp"
#include "spectra/linalg.hpp"
#include "spectra/ode.hpp"

namespace spectra {

// Finite-dimensional data of a compact Lie algebra g with symmetric-space
// grading g = h + m and Iwasawa splitting of h^C.  Elements are coefficient
// vectors over a fixed real basis of the compact form; the compact-form
// conjugation is coefficient conjugation in that basis.
struct LieAlgebraSpec {
    int dim = 0;
    std::vector<std::vector<std::vector<double>>> f;  // [e_i, e_j] = sum_k f[i][j][k] e_k
    std::vector<std::vector<double>> proj_h, proj_m;  // grading projectors
    std::vector<std::vector<Complex>> proj_n, proj_t, proj_nbar;  // Iwasawa on h^C
    std::vector<double> ip;                            // <e_i, e_j> = ip[i] delta_ij
    std::vector<M2> rep;                               // matrix realization

    using Vec = std::vector<Complex>;

    Vec bracket(const Vec& x, const Vec& y) const {
        Vec out(std::size_t(dim), Complex(0.0));
        for (int i = 0; i < dim; ++i) {
            if (x[std::size_t(i)] == Complex(0.0)) continue;
            for (int j = 0; j < dim; ++j) {
                Complex c = x[std::size_t(i)] * y[std::size_t(j)];
                if (c == Complex(0.0)) continue;
                for (int k = 0; k < dim; ++k) {
                    double fk = f[std::size_t(i)][std::size_t(j)][std::size_t(k)];
                    if (fk != 0.0) out[std::size_t(k)] += c * fk;
                }
            }
        }
        return out;
    }

    Vec conjugate(const Vec& x) const {
        Vec out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::conj(x[i]);
        return out;
    }

    Vec apply(const std::vector<std::vector<double>>& P, const Vec& x) const {
        Vec out(std::size_t(dim), Complex(0.0));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out[std::size_t(i)] += P[std::size_t(i)][std::size_t(j)] * x[std::size_t(j)];
        return out;
    }
    Vec applyC(const std::vector<std::vector<Complex>>& P, const Vec& x) const {
        Vec out(std::size_t(dim), Complex(0.0));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out[std::size_t(i)] += P[std::size_t(i)][std::size_t(j)] * x[std::size_t(j)];
        return out;
    }

    Complex inner(const Vec& x, const Vec& y) const {  // C-bilinear
        Complex s(0.0);
        for (int i = 0; i < dim; ++i) s += ip[std::size_t(i)] * x[std::size_t(i)] * y[std::size_t(i)];
        return s;
    }

    M2 matrix_of(const Vec& x) const {
        M2 m;
        for (int i = 0; i < dim; ++i) m = m + rep[std::size_t(i)] * x[std::size_t(i)];
        return m;
    }

    double norm(const Vec& x) const {
        double s = 0.0;
        for (const Complex& v : x) s += std::norm(v);
        return std::sqrt(s);
    }

    void validate() const {
        // Jacobi identity
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                for (int c = 0; c < dim; ++c) {
                    Vec ea(std::size_t(dim), Complex(0.0)), eb = ea, ec = ea;
                    ea[std::size_t(a)] = 1.0;
                    eb[std::size_t(b)] = 1.0;
                    ec[std::size_t(c)] = 1.0;
                    Vec s1 = bracket(ea, bracket(eb, ec));
                    Vec s2 = bracket(eb, bracket(ec, ea));
                    Vec s3 = bracket(ec, bracket(ea, eb));
                    for (int k = 0; k < dim; ++k) {
                        Complex v = s1[std::size_t(k)] + s2[std::size_t(k)] + s3[std::size_t(k)];
                        if (std::abs(v) > 1e-12)
                            throw Error(ErrorKind::precondition, "Jacobi identity fails");
                    }
                }
        // projectors idempotent and complementary
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double hij = proj_h[std::size_t(i)][std::size_t(j)];
                double mij = proj_m[std::size_t(i)][std::size_t(j)];
                double hh = 0.0, mm = 0.0;
                for (int k = 0; k < dim; ++k) {
                    hh += proj_h[std::size_t(i)][std::size_t(k)] * proj_h[std::size_t(k)][std::size_t(j)];
                    mm += proj_m[std::size_t(i)][std::size_t(k)] * proj_m[std::size_t(k)][std::size_t(j)];
                }
                if (std::abs(hh - hij) > 1e-12 || std::abs(mm - mij) > 1e-12)
                    throw Error(ErrorKind::precondition, "projectors not idempotent");
                double sum = hij + mij - (i == j ? 1.0 : 0.0);
                if (std::abs(sum) > 1e-12)
                    throw Error(ErrorKind::precondition, "h + m projectors not complementary");
            }
        // ad-invariance of the inner product
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                for (int c = 0; c < dim; ++c) {
                    Vec ea(std::size_t(dim), Complex(0.0)), eb = ea, ec = ea;
                    ea[std::size_t(a)] = 1.0;
                    eb[std::size_t(b)] = 1.0;
                    ec[std::size_t(c)] = 1.0;
                    Complex v = inner(bracket(ea, eb), ec) + inner(eb, bracket(ea, ec));
                    if (std::abs(v) > 1e-12)
                        throw Error(ErrorKind::precondition, "inner product not ad-invariant");
                }
    }
};

// su(2) with sigma = Ad(diag(1,-1)): h = span(e1), m = span(e2, e3).
inline LieAlgebraSpec su2_spec() {
    LieAlgebraSpec s;
    s.dim = 3;
    s.f.assign(3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
    auto set = [&](int i, int j, int k, double v) {
        s.f[std::size_t(i)][std::size_t(j)][std::size_t(k)] = v;
        s.f[std::size_t(j)][std::size_t(i)][std::size_t(k)] = -v;
    };
    set(0, 1, 2, 2.0);  // [e1,e2] = 2 e3
    set(1, 2, 0, 2.0);  // [e2,e3] = 2 e1
    set(2, 0, 1, 2.0);  // [e3,e1] = 2 e2
    s.proj_h.assign(3, std::vector<double>(3, 0.0));
    s.proj_m.assign(3, std::vector<double>(3, 0.0));
    s.proj_h[0][0] = 1.0;
    s.proj_m[1][1] = 1.0;
    s.proj_m[2][2] = 1.0;
    s.proj_n.assign(3, std::vector<Complex>(3, Complex(0.0)));
    s.proj_nbar = s.proj_n;
    s.proj_t = s.proj_n;
    s.proj_t[0][0] = 1.0;  // h^C is the torus: n = nbar = 0
    s.ip = {1.0, 1.0, 1.0};
    s.rep = {M2::of(Complex(0, 1), 0, 0, Complex(0, -1)),
             M2::of(0, Complex(1, 0), Complex(-1, 0), 0),
             M2::of(0, Complex(0, 1), Complex(0, 1), 0)};
    return s;
}

// Truncated twisted loop algebra element xi = sum_{|j| <= d} xi_j lambda^j
// with xi_{-j} = conj(xi_j), even coefficients in h^C, odd in m^C.
struct LoopElement {
    int d = 1;
    std::vector<LieAlgebraSpec::Vec> coeffs;  // index j + d

    const LieAlgebraSpec::Vec& at(int j) const { return coeffs[std::size_t(j + d)]; }
    LieAlgebraSpec::Vec& at(int j) { return coeffs[std::size_t(j + d)]; }

    static LoopElement zero(const LieAlgebraSpec& spec, int d) {
        LoopElement x;
        x.d = d;
        x.coeffs.assign(std::size_t(2 * d + 1),
                        LieAlgebraSpec::Vec(std::size_t(spec.dim), Complex(0.0)));
        return x;
    }

    double norm(const LieAlgebraSpec& spec) const {
        double s = 0.0;
        for (const auto& v : coeffs) {
            double nv = spec.norm(v);
            s += nv * nv;
        }
        return std::sqrt(s);
    }
};

struct LoopInvariantResiduals {
    double reality = 0.0;
    double parity = 0.0;
};

inline LoopInvariantResiduals loop_invariants(const LieAlgebraSpec& spec, const LoopElement& xi) {
    LoopInvariantResiduals r;
    for (int j = 0; j <= xi.d; ++j) {
        auto cj = spec.conjugate(xi.at(j));
        for (int k = 0; k < spec.dim; ++k)
            r.reality = std::max(r.reality, std::abs(xi.at(-j)[std::size_t(k)] - cj[std::size_t(k)]));
    }
    for (int j = -xi.d; j <= xi.d; ++j) {
        const auto& P = (std::abs(j) % 2 == 0) ? spec.proj_m : spec.proj_h;  // wrong part must vanish
        auto bad = spec.apply(P, xi.at(j));
        r.parity = std::max(r.parity, spec.norm(bad));
    }
    return r;
}

// r(eta) = eta_nbar + eta_t / 2 on h^C.
inline LieAlgebraSpec::Vec r_project(const LieAlgebraSpec& spec, const LieAlgebraSpec::Vec& eta) {
    auto inm = spec.apply(spec.proj_m, eta);
    if (spec.norm(inm) > 1e-10 * (1.0 + spec.norm(eta)))
        throw Error(ErrorKind::precondition, "r_project input not in h^C");
    auto a = spec.applyC(spec.proj_nbar, eta);
    auto b = spec.applyC(spec.proj_t, eta);
    LieAlgebraSpec::Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + 0.5 * b[i];
    return out;
}

// The Lax generators: Z = lambda xi_d + r(xi_{d-1}) and its compact-form
// conjugate flip Z^theta = lambda^{-1} xi_{-d} + conj(r(xi_{d-1})).
struct LaxDerivatives {
    LoopElement dz;     // [xi, Z]
    LoopElement dzbar;  // [xi, Z^theta]
    double top_coefficient = 0.0;  // numerically asserted ~0 at degree d+1
};

inline LaxDerivatives lax_rhs(const LieAlgebraSpec& spec, const LoopElement& xi) {
    const int d = xi.d;
    auto r = r_project(spec, xi.at(d - 1));
    auto rbar = spec.conjugate(r);

    LaxDerivatives out;
    out.dz = LoopElement::zero(spec, d);
    out.dzbar = LoopElement::zero(spec, d);

    // top coefficients that must cancel identically
    auto top1 = spec.bracket(xi.at(d), xi.at(d));
    auto top2 = spec.bracket(xi.at(-d), xi.at(-d));
    out.top_coefficient = std::max(spec.norm(top1), spec.norm(top2));
    if (out.top_coefficient > 1e-10 * (1.0 + xi.norm(spec)))
        throw Error(ErrorKind::numerical_inconsistency,
                    "lambda^{d+1} coefficient of the Lax bracket did not cancel");

    for (int j = -d; j <= d; ++j) {
        // dz_j = [xi_{j-1}, xi_d] + [xi_j, r]
        LieAlgebraSpec::Vec v(std::size_t(spec.dim), Complex(0.0));
        if (j - 1 >= -d) v = spec.bracket(xi.at(j - 1), xi.at(d));
        auto w = spec.bracket(xi.at(j), r);
        for (int k = 0; k < spec.dim; ++k) v[std::size_t(k)] += w[std::size_t(k)];
        out.dz.at(j) = v;
        // dzbar_j = [xi_{j+1}, xi_{-d}] + [xi_j, rbar]
        LieAlgebraSpec::Vec u(std::size_t(spec.dim), Complex(0.0));
        if (j + 1 <= d) u = spec.bracket(xi.at(j + 1), xi.at(-d));
        auto w2 = spec.bracket(xi.at(j), rbar);
        for (int k = 0; k < spec.dim; ++k) u[std::size_t(k)] += w2[std::size_t(k)];
        out.dzbar.at(j) = u;
    }
    return out;
}

namespace laxdetail {

inline OdeState flatten(const LoopElement& xi) {
    OdeState s;
    for (const auto& v : xi.coeffs)
        for (const Complex& c : v) s.push_back(c);
    return s;
}

inline LoopElement unflatten(const LieAlgebraSpec& spec, int d, const OdeState& s,
                             std::size_t offset = 0) {
    LoopElement xi = LoopElement::zero(spec, d);
    std::size_t idx = offset;
    for (auto& v : xi.coeffs)
        for (Complex& c : v) c = s[idx++];
    return xi;
}

// real-direction generators: X = Z + Z^theta, Y = i (Z - Z^theta)
inline void flow_rhs(const LieAlgebraSpec& spec, int d, double cx, double cy, const OdeState& y,
                     OdeState& dy) {
    LoopElement xi = unflatten(spec, d, y);
    LaxDerivatives L = lax_rhs(spec, xi);
    LoopElement out = LoopElement::zero(spec, d);
    Complex az(cx, cy);           // dz direction coefficient: dz(v) for v = cx d/dx + cy d/dy
    Complex azb(cx, -cy);
    for (int j = -d; j <= d; ++j)
        for (int k = 0; k < spec.dim; ++k)
            out.at(j)[std::size_t(k)] =
                az * L.dz.at(j)[std::size_t(k)] + azb * L.dzbar.at(j)[std::size_t(k)];
    OdeState f = flatten(out);
    dy = f;
}

}  // namespace laxdetail

// Admissible seeded initial condition: random coefficients projected onto the
// twisted real subspace and normalized.
inline LoopElement random_admissible(const LieAlgebraSpec& spec, int d, std::uint64_t seed) {
    if (d % 2 == 0 || d < 1) throw Error(ErrorKind::precondition, "d must be odd and positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    LoopElement xi = LoopElement::zero(spec, d);
    for (int j = 0; j <= d; ++j) {
        LieAlgebraSpec::Vec v(std::size_t(spec.dim));
        for (int k = 0; k < spec.dim; ++k) v[std::size_t(k)] = Complex(U(rng), U(rng));
        const auto& P = (j % 2 == 0) ? spec.proj_h : spec.proj_m;
        v = spec.apply(P, v);
        if (j == 0)
            for (auto& c : v) c = Complex(c.real(), 0.0);  // xi_0 = conj(xi_0)
        xi.at(j) = v;
        xi.at(-j) = spec.conjugate(v);
    }
    double n = xi.norm(spec);
    if (n > 0)
        for (auto& v : xi.coeffs)
            for (auto& c : v) c /= n;
    return xi;
}

struct GridSpec {
    int nx = 5, ny = 5;
    double hx = 1e-3, hy = 1e-3;
    double x0 = 0.0, y0 = 0.0;
};

struct LaxField {
    LieAlgebraSpec spec;
    GridSpec grid;
    int d = 1;
    std::vector<LoopElement> nodes;  // row-major: (ix, iy) -> ix * ny + iy
    double conservation_drift = 0.0;

    const LoopElement& at(int ix, int iy) const {
        return nodes[std::size_t(ix) * std::size_t(grid.ny) + std::size_t(iy)];
    }
};

// Flow xi0 with the x-flow then the y-flow over the grid; monitors <xi,xi>.
inline LaxField evolve(const LieAlgebraSpec& spec, const LoopElement& xi0, const GridSpec& grid,
                       double ode_tol) {
    LaxField F;
    F.spec = spec;
    F.grid = grid;
    F.d = xi0.d;
    F.nodes.resize(std::size_t(grid.nx) * std::size_t(grid.ny));

    auto inner_loop = [&](const LoopElement& xi) {
        Complex s(0.0);
        for (int j = -xi.d; j <= xi.d; ++j) s += spec.inner(xi.at(j), xi.at(-j));
        return s;
    };
    Complex c0 = inner_loop(xi0);

    const int d = xi0.d;
    auto rhs_dir = [&](double cx, double cy) {
        return [&spec, d, cx, cy](double, const OdeState& y, OdeState& dy) {
            laxdetail::flow_rhs(spec, d, cx, cy, y, dy);
        };
    };

    // x-axis sweep
    std::vector<LoopElement> row0(std::size_t(grid.nx));
    {
        LoopElement cur = xi0;
        if (grid.x0 != 0.0 || grid.y0 != 0.0) {
            // move base point first
            if (grid.x0 != 0.0) {
                auto tr = ode_solve(rhs_dir(1.0, 0.0), laxdetail::flatten(cur), 0.0, grid.x0,
                                    ode_tol);
                cur = laxdetail::unflatten(spec, d, tr.back());
            }
            if (grid.y0 != 0.0) {
                auto tr = ode_solve(rhs_dir(0.0, 1.0), laxdetail::flatten(cur), 0.0, grid.y0,
                                    ode_tol);
                cur = laxdetail::unflatten(spec, d, tr.back());
            }
        }
        row0[0] = cur;
        for (int ix = 1; ix < grid.nx; ++ix) {
            auto tr = ode_solve(rhs_dir(1.0, 0.0), laxdetail::flatten(row0[std::size_t(ix - 1)]),
                                0.0, grid.hx, ode_tol);
            row0[std::size_t(ix)] = laxdetail::unflatten(spec, d, tr.back());
        }
    }
    for (int ix = 0; ix < grid.nx; ++ix) {
        F.nodes[std::size_t(ix) * std::size_t(grid.ny)] = row0[std::size_t(ix)];
        for (int iy = 1; iy < grid.ny; ++iy) {
            auto tr = ode_solve(rhs_dir(0.0, 1.0),
                                laxdetail::flatten(F.nodes[std::size_t(ix) * std::size_t(grid.ny) +
                                                           std::size_t(iy - 1)]),
                                0.0, grid.hy, ode_tol);
            F.nodes[std::size_t(ix) * std::size_t(grid.ny) + std::size_t(iy)] =
                laxdetail::unflatten(spec, d, tr.back());
        }
    }
    for (const auto& xi : F.nodes)
        F.conservation_drift =
            std::max(F.conservation_drift, std::abs(inner_loop(xi) - c0));
    return F;
}

// phi_lambda at one node: (phi_z, phi_zbar) as 2x2 matrices.
inline std::pair<M2, M2> phi_lambda(const LieAlgebraSpec& spec, const LoopElement& xi,
                                    const Complex& lambda) {
    auto r = r_project(spec, xi.at(xi.d - 1));
    auto rbar = spec.conjugate(r);
    M2 phz = spec.matrix_of(xi.at(xi.d)) * lambda + spec.matrix_of(r);
    M2 phzb = spec.matrix_of(xi.at(-xi.d)) * (1.0 / lambda) + spec.matrix_of(rbar);
    return {phz, phzb};
}

// max-norm of d phi + 1/2 [phi ^ phi] over interior nodes, central differences
inline double maurer_cartan_residual(const LaxField& F, const Complex& lambda) {
    const GridSpec& g = F.grid;
    if (g.nx < 4 || g.ny < 4)
        throw Error(ErrorKind::precondition, "grid too coarse for finite differences");
    auto phi_xy = [&](int ix, int iy) {
        auto [pz, pzb] = phi_lambda(F.spec, F.at(ix, iy), lambda);
        M2 px = pz + pzb;
        M2 py = (pz - pzb) * Complex(0, 1);
        return std::pair<M2, M2>(px, py);
    };
    double worst = 0.0;
    for (int ix = 1; ix + 1 < g.nx; ++ix)
        for (int iy = 1; iy + 1 < g.ny; ++iy) {
            auto [pxE, pyE] = phi_xy(ix + 1, iy);
            auto [pxW, pyW] = phi_xy(ix - 1, iy);
            auto [pxN, pyN] = phi_xy(ix, iy + 1);
            auto [pxS, pyS] = phi_xy(ix, iy - 1);
            auto [px, py] = phi_xy(ix, iy);
            M2 dpy_dx = (pyE - pyW) * (1.0 / (2 * g.hx));
            M2 dpx_dy = (pxN - pxS) * (1.0 / (2 * g.hy));
            M2 res = dpy_dx - dpx_dy + commutator(px, py);
            worst = std::max(worst, res.norm());
        }
    return worst;
}

// "adapted" diagnostic: per-node norm of (xi_d + r(xi_{d-1})) - phi_zbar(1).
inline double adapted_residual(const LaxField& F) {
    double worst = 0.0;
    for (const auto& xi : F.nodes) {
        auto r = r_project(F.spec, xi.at(xi.d - 1));
        auto rbar = F.spec.conjugate(r);
        LieAlgebraSpec::Vec v(std::size_t(F.spec.dim));
        for (int k = 0; k < F.spec.dim; ++k)
            v[std::size_t(k)] = xi.at(xi.d)[std::size_t(k)] + r[std::size_t(k)] -
                                xi.at(-xi.d)[std::size_t(k)] - rbar[std::size_t(k)];
        worst = std::max(worst, F.spec.norm(v));
    }
    return worst;
}

struct FrameGrid {
    GridSpec grid;
    std::vector<M2> F;                       // frames, row-major
    std::vector<std::pair<M2, M2>> phi;      // (phi_z, phi_zbar) per node
    double plaquette_residual = 0.0;
    double unitarity_residual = 0.0;

    const M2& at(int ix, int iy) const {
        return F[std::size_t(ix) * std::size_t(grid.ny) + std::size_t(iy)];
    }
};

// Integrate dF = F phi along grid lines (joint ODE with the xi flow keeps phi
// exact along the path); plaquette consistency audited on every cell.
inline FrameGrid integrate_frame(const LaxField& field, const Complex& lambda, double ode_tol) {
    const LieAlgebraSpec& spec = field.spec;
    const GridSpec& g = field.grid;
    const int d = field.d;

    auto joint_rhs = [&](double cx, double cy) {
        return [&spec, d, cx, cy, lambda](double, const OdeState& y, OdeState& dy) {
            std::size_t nxi = y.size() - 4;
            laxdetail::flow_rhs(spec, d, cx, cy, y, dy);  // fills xi part (resizes dy)
            dy.resize(y.size());
            LoopElement xi = laxdetail::unflatten(spec, d, y);
            auto [pz, pzb] = phi_lambda(spec, xi, lambda);
            M2 F;
            F.a = {y[nxi], y[nxi + 1], y[nxi + 2], y[nxi + 3]};
            M2 dir = (pz + pzb) * Complex(cx, 0.0) + (pz - pzb) * Complex(0, 1) * Complex(cy, 0.0);
            M2 dF = F * dir;
            for (int i = 0; i < 4; ++i) dy[nxi + std::size_t(i)] = dF.a[std::size_t(i)];
        };
    };
    auto step = [&](const LoopElement& xi, const M2& F0, double cx, double cy, double h) {
        OdeState y = laxdetail::flatten(xi);
        for (int i = 0; i < 4; ++i) y.push_back(F0.a[std::size_t(i)]);
        auto tr = ode_solve(joint_rhs(cx, cy), y, 0.0, h, ode_tol);
        OdeState e = tr.back();
        M2 F;
        std::size_t nxi = e.size() - 4;
        F.a = {e[nxi], e[nxi + 1], e[nxi + 2], e[nxi + 3]};
        return F;
    };

    FrameGrid out;
    out.grid = g;
    out.F.resize(std::size_t(g.nx) * std::size_t(g.ny));
    auto set = [&](int ix, int iy, const M2& m) {
        out.F[std::size_t(ix) * std::size_t(g.ny) + std::size_t(iy)] = m;
    };

    set(0, 0, M2::identity());
    for (int ix = 1; ix < g.nx; ++ix)
        set(ix, 0, step(field.at(ix - 1, 0), out.at(ix - 1, 0), 1.0, 0.0, g.hx));
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 1; iy < g.ny; ++iy)
            set(ix, iy, step(field.at(ix, iy - 1), out.at(ix, iy - 1), 0.0, 1.0, g.hy));

    // plaquette audit: right-transport of the left-top corner vs stored
    for (int ix = 0; ix + 1 < g.nx; ++ix)
        for (int iy = 1; iy < g.ny; ++iy) {
            M2 via_row = step(field.at(ix, iy), out.at(ix, iy), 1.0, 0.0, g.hx);
            M2 diff = via_row - out.at(ix + 1, iy);
            out.plaquette_residual = std::max(out.plaquette_residual, diff.norm());
        }
    if (out.plaquette_residual > 100 * ode_tol * (1.0 + 10.0))
        throw Error(ErrorKind::numerical_inconsistency,
                    "plaquette inconsistency: input connection not flat");

    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            auto [pz, pzb] = phi_lambda(spec, field.at(ix, iy), lambda);
            out.phi.push_back({pz, pzb});
            M2 U = out.at(ix, iy);
            out.unitarity_residual = std::max(
                {out.unitarity_residual, (U * U.conj_transpose() - M2::identity()).norm(),
                 std::abs(U.det() - Complex(1.0))});
        }
    return out;
}

// Cartan embedding g H -> sigma(g) g^{-1} with sigma = Ad(diag(1,-1)).
inline std::vector<M2> cartan_embed(const FrameGrid& frames) {
    M2 D = M2::of(1.0, 0.0, 0.0, -1.0);
    std::vector<M2> out;
    out.reserve(frames.F.size());
    for (const M2& F : frames.F) out.push_back((D * F * D) * F.inverse());
    return out;
}

// Harmonicity of the symmetric-space map: d*Phi = d_x Phi_x + d_y Phi_y for
// Phi = (iota f)^{-1} d(iota f) = -2 Ad_F(phi_m), with *dx = dy so the vacuum
// is exactly zero.  Central differences on the interior nodes.
inline double harmonicity_residual(const LaxField& field, const FrameGrid& frames) {
    const GridSpec& g = field.grid;
    if (g.nx < 4 || g.ny < 4)
        throw Error(ErrorKind::precondition, "grid too coarse for finite differences");
    const LieAlgebraSpec& spec = field.spec;
    auto Phi_xy = [&](int ix, int iy) {
        const LoopElement& xi = field.at(ix, iy);
        // phi_m at lambda = 1: the odd part of phi; r-terms live in h
        M2 pzm = spec.matrix_of(xi.at(xi.d));
        M2 pzbm = spec.matrix_of(xi.at(-xi.d));
        M2 px_m = pzm + pzbm;
        M2 py_m = (pzm - pzbm) * Complex(0, 1);
        const M2& F = frames.at(ix, iy);
        M2 Fi = F.inverse();
        M2 Px = (F * px_m * Fi) * Complex(-2.0);
        M2 Py = (F * py_m * Fi) * Complex(-2.0);
        return std::pair<M2, M2>(Px, Py);
    };
    double worst = 0.0;
    for (int ix = 1; ix + 1 < g.nx; ++ix)
        for (int iy = 1; iy + 1 < g.ny; ++iy) {
            auto [pxE, pyE] = Phi_xy(ix + 1, iy);
            auto [pxW, pyW] = Phi_xy(ix - 1, iy);
            auto [pxN, pyN] = Phi_xy(ix, iy + 1);
            auto [pxS, pyS] = Phi_xy(ix, iy - 1);
            M2 div = (pxE - pxW) * (1.0 / (2 * g.hx)) + (pyN - pyS) * (1.0 / (2 * g.hy));
            worst = std::max(worst, div.norm());
        }
    return worst;
}

}  // namespace spectra
