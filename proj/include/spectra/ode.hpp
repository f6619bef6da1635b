#pragma once

#include <functional>
#include <vector>

#include "spectra/core.hpp"

namespace spectra {

using OdeState = std::vector<Complex>;
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dy)>;

// Dense trajectory: accepted steps with derivatives, cubic Hermite between.
class Trajectory {
  public:
    struct Node {
        double t;
        OdeState y;
        OdeState f;
    };

    const std::vector<Node>& nodes() const { return nodes_; }
    double t0() const { return nodes_.front().t; }
    double t1() const { return nodes_.back().t; }
    const OdeState& back() const { return nodes_.back().y; }

    OdeState at(double t) const {
        if (nodes_.size() == 1) return nodes_.front().y;
        // locate segment (nodes sorted by |t - t0| increasing along integration)
        std::size_t lo = 0, hi = nodes_.size() - 1;
        bool fwd = nodes_.back().t >= nodes_.front().t;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if ((nodes_[mid].t <= t) == fwd)
                lo = mid;
            else
                hi = mid;
        }
        const Node& A = nodes_[lo];
        const Node& B = nodes_[hi];
        double h = B.t - A.t;
        if (h == 0.0) return A.y;
        double s = (t - A.t) / h;
        double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        double h10 = s * (1 - s) * (1 - s);
        double h01 = s * s * (3 - 2 * s);
        double h11 = s * s * (s - 1);
        OdeState out(A.y.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = h00 * A.y[i] + h10 * h * A.f[i] + h01 * B.y[i] + h11 * h * B.f[i];
        return out;
    }

    void push(double t, const OdeState& y, const OdeState& f) { nodes_.push_back({t, y, f}); }

  private:
    std::vector<Node> nodes_;
};

// Adaptive Dormand-Prince 5(4) with PI step control.
inline Trajectory ode_solve(const OdeRhs& rhs, const OdeState& y0, double t0, double t1,
                            double tol, std::size_t max_steps = 2000000) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y0.size();
    if (!std::isfinite(t0) || !std::isfinite(t1))
        throw Error(ErrorKind::precondition, "ode span must be finite");

    Trajectory traj;
    if (t1 == t0) {
        OdeState f(n);
        rhs(t0, y0, f);
        traj.push(t0, y0, f);
        return traj;
    }

    double dir = (t1 > t0) ? 1.0 : -1.0;
    OdeState y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
    rhs(t0, y, k1);
    traj.push(t0, y, k1);

    double span = std::abs(t1 - t0);
    double h = dir * std::min(0.01 * span + 1e-12, 0.1);
    double t = t0;
    double err_prev = 1.0;
    std::size_t steps = 0;

    while ((t - t1) * dir < 0) {
        if (++steps > max_steps)
            throw Error(ErrorKind::ode_stiffness, "step budget exhausted");
        if (std::abs(h) < 1e-14 * (1.0 + std::abs(t)))
            throw Error(ErrorKind::ode_stiffness, "step underflow at t=" + std::to_string(t));
        if ((t + h - t1) * dir > 0) h = t1 - t;

        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, yt, k2);
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, yt, k3);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, yt, k4);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, yt, k5);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, yt, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
            double sk = tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
            double q = std::abs(e) / sk;
            err += q * q;
        }
        err = std::sqrt(err / std::max<std::size_t>(n, 1));

        if (!std::isfinite(err)) {
            h *= 0.1;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            traj.push(t, y, k1);
            double e = std::max(err, 1e-10);
            double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            fac = std::min(5.0, std::max(0.2, fac));
            h *= fac;
            err_prev = e;
        } else {
            double fac = std::max(0.1, 0.9 * std::pow(err, -1.0 / 5.0));
            h *= fac;
        }
    }
    return traj;
}

}  // namespace spectra
