#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "spectra/core.hpp"

namespace spectra {

// Piecewise path in the lambda plane: straight segments and circular arcs.
struct PathSegment {
    enum class Kind { line, arc } kind = Kind::line;
    // line: z0 -> z1
    Complex z0, z1;
    // arc: center + radius, angle theta0 -> theta1 (direction by sign of sweep)
    Complex center;
    double radius = 0.0;
    double theta0 = 0.0, theta1 = 0.0;

    static PathSegment line(const Complex& a, const Complex& b) {
        PathSegment s;
        s.kind = Kind::line;
        s.z0 = a;
        s.z1 = b;
        return s;
    }
    static PathSegment arc(const Complex& c, double r, double t0, double t1) {
        PathSegment s;
        s.kind = Kind::arc;
        s.center = c;
        s.radius = r;
        s.theta0 = t0;
        s.theta1 = t1;
        s.z0 = c + r * Complex(std::cos(t0), std::sin(t0));
        s.z1 = c + r * Complex(std::cos(t1), std::sin(t1));
        return s;
    }

    Complex at(double t) const {  // t in [0,1]
        if (kind == Kind::line) return z0 + t * (z1 - z0);
        double th = theta0 + t * (theta1 - theta0);
        return center + radius * Complex(std::cos(th), std::sin(th));
    }
    Complex deriv(double t) const {  // dz/dt
        if (kind == Kind::line) return z1 - z0;
        double th = theta0 + t * (theta1 - theta0);
        return radius * (theta1 - theta0) * Complex(-std::sin(th), std::cos(th));
    }
    double length() const {
        if (kind == Kind::line) return std::abs(z1 - z0);
        return radius * std::abs(theta1 - theta0);
    }
};

struct ContourPath {
    std::vector<PathSegment> segments;
    bool closed = false;

    Complex start() const { return segments.front().z0; }
    Complex end() const { return segments.back().z1; }

    void validate(double path_tol) const {
        if (segments.empty()) throw Error(ErrorKind::precondition, "empty path");
        double scale = 1.0;
        for (const auto& s : segments) scale = std::max(scale, std::abs(s.z0));
        for (std::size_t i = 0; i + 1 < segments.size(); ++i)
            if (std::abs(segments[i].z1 - segments[i + 1].z0) > path_tol * scale)
                throw Error(ErrorKind::precondition, "path segments do not join");
        if (closed && std::abs(end() - start()) > path_tol * scale)
            throw Error(ErrorKind::precondition, "closed path does not return to start");
    }

    double length() const {
        double L = 0.0;
        for (const auto& s : segments) L += s.length();
        return L;
    }
};

namespace gk {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
inline constexpr double xk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Result {
    Complex value;
    double error;
};

// One G7/K15 evaluation of f over [a,b] (parameter interval).
template <class F>
Result eval(F&& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex fc = f(c);
    Complex kron = wk[7] * fc;
    Complex gauss = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        Complex f1 = f(c - h * xk[i]);
        Complex f2 = f(c + h * xk[i]);
        kron += wk[i] * (f1 + f2);
        if (i % 2 == 1) gauss += wg[i / 2] * (f1 + f2);
    }
    kron *= h;
    gauss *= h;
    double err = std::abs(kron - gauss);
    if (!finite(kron)) err = std::numeric_limits<double>::infinity();
    return {kron, err};
}

}  // namespace gk

struct QuadratureStats {
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
};

// Adaptive Gauss-Kronrod over parameter t in [0,1] with deterministic
// left-first bisection.  Error target: total_err < tol * (1 + |result|).
template <class F>
Complex integrate_param(F&& f, double tol, QuadratureStats* stats = nullptr,
                        int max_depth = 48, std::size_t max_intervals = 200000) {
    struct Item {
        double a, b;
        int depth;
        gk::Result r;
    };
    std::vector<Item> stack;
    auto push = [&](double a, double b, int depth) {
        Item it;
        it.a = a;
        it.b = b;
        it.depth = depth;
        it.r = gk::eval(f, a, b);
        if (stats) stats->evaluations += 15;
        stack.push_back(it);
    };

    gk::Result whole = gk::eval(f, 0.0, 1.0);
    if (stats) stats->evaluations += 15;
    double scale = finite(whole.value) ? 1.0 + std::abs(whole.value) : 1.0;

    Complex sum(0.0);
    std::size_t done = 0;
    push(0.0, 1.0, 0);
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        double local_tol = tol * scale * (it.b - it.a);
        if ((it.r.error <= local_tol && finite(it.r.value)) || it.depth >= max_depth) {
            if (it.depth >= max_depth && (it.r.error > 1e3 * local_tol || !finite(it.r.value)))
                throw Error(ErrorKind::quadrature_nonconvergence,
                            "subdivision limit reached on [" + std::to_string(it.a) + "," +
                                std::to_string(it.b) + "], err=" + std::to_string(it.r.error));
            sum += it.r.value;
            ++done;
            if (done > max_intervals)
                throw Error(ErrorKind::quadrature_nonconvergence, "interval budget exhausted");
            continue;
        }
        double m = 0.5 * (it.a + it.b);
        push(m, it.b, it.depth + 1);  // pushed first, processed second
        push(it.a, m, it.depth + 1);  // left handled first: deterministic order
    }
    if (stats) stats->intervals += done;
    return sum;
}

// Contour integral of f(z) dz along the path.  f must be finite on the path.
inline Complex integrate_contour(const std::function<Complex(const Complex&)>& f,
                                 const ContourPath& path, double tol,
                                 QuadratureStats* stats = nullptr) {
    path.validate(1e-6);
    Complex total(0.0);
    for (const auto& seg : path.segments) {
        auto integrand = [&](double t) { return f(seg.at(t)) * seg.deriv(t); };
        total += integrate_param(integrand, tol, stats);
    }
    return total;
}

}  // namespace spectra
