#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline const Complex kTwoPiI{0.0, 2.0 * kPi};

inline bool finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Argument normalized to [0, 2*pi).
inline double arg_2pi(const Complex& z) {
    double a = std::arg(z);
    if (a < 0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a -= 2.0 * kPi;
    return a;
}

enum class ErrorKind {
    ill_conditioned_poly,
    quadrature_nonconvergence,
    ode_stiffness,
    reality_violation,
    singular_curve,
    degenerate_curve,
    path_too_close,
    chart_error,
    numerical_inconsistency,
    construction_failure,
    ill_conditioned_system,
    precondition,
    schema,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::ill_conditioned_poly: return "ill-conditioned-polynomial";
        case ErrorKind::quadrature_nonconvergence: return "quadrature-nonconvergence";
        case ErrorKind::ode_stiffness: return "ode-stiffness";
        case ErrorKind::reality_violation: return "reality-violation";
        case ErrorKind::singular_curve: return "singular-curve";
        case ErrorKind::degenerate_curve: return "degenerate-curve";
        case ErrorKind::path_too_close: return "path-too-close-to-branch-point";
        case ErrorKind::chart_error: return "chart-error";
        case ErrorKind::numerical_inconsistency: return "numerical-inconsistency";
        case ErrorKind::construction_failure: return "construction-failure";
        case ErrorKind::ill_conditioned_system: return "ill-conditioned-system";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::schema: return "schema";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

struct ToleranceProfile {
    double quad_tol = 1e-9;     // relative quadrature tolerance
    double ode_tol = 1e-10;     // ODE local error per step
    double root_tol = 1e-10;    // polynomial root residual bound
    double lattice_tol = 1e-6;  // acceptance threshold for 2*pi*i integrality
    double path_tol = 1e-8;     // path continuity / endpoint tolerance

    void validate() const {
        if (!(quad_tol > 0 && ode_tol > 0 && root_tol > 0 && lattice_tol > 0 && path_tol > 0))
            throw Error(ErrorKind::precondition, "tolerances must be strictly positive");
        if (!(lattice_tol > quad_tol))
            throw Error(ErrorKind::precondition, "lattice_tol must exceed quad_tol");
    }
};

// Nearest integer with ties broken toward even, and the lattice residual
// |v - n*base|.  Default base is 2*pi*sqrt(-1).
struct LatticeResidual {
    long long n = 0;
    double residual = 0.0;
};

inline LatticeResidual lattice_residual(const Complex& v, const Complex& base = kTwoPiI) {
    double x = (v / base).real();
    double nr = std::nearbyint(x);  // FE_TONEAREST: ties to even
    LatticeResidual out;
    out.n = static_cast<long long>(nr);
    out.residual = std::abs(v - nr * base);
    return out;
}

}  // namespace spectra
