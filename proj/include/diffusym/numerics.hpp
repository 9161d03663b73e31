#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "diffusym/error.hpp"

namespace diffusym {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 10000;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw SpecError("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 1) throw SpecError("QuadratureSpec: max_subdivisions >= 1");
    }
};

/// Adaptive Gauss–Kronrod (7,15) quadrature. Handles integrable endpoint
/// singularities (nodes are interior) by bisection toward the endpoint.
/// lo > hi is allowed and flips the sign.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec = {});

struct OdeSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 = choose automatically
    bool dense_output = true;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw SpecError("OdeSpec: tolerances must be positive");
    }
};

using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

/// Dense-output solution of an initial value problem, queryable anywhere
/// between t0 and t_end (inclusive). Immutable after construction.
class OdeSolution {
public:
    std::vector<double> operator()(double t) const;
    double component(double t, std::size_t i) const;

    double t_begin() const { return t0_; }
    double t_end() const { return t1_; }
    std::size_t dimension() const { return dim_; }

private:
    friend OdeSolution solve_ode(const OdeRhs&, double, std::vector<double>, double,
                                 const OdeSpec&);

    struct Step {
        double t, h;
        std::vector<double> y;       // state at step start
        std::vector<double> interp;  // dense coefficients, 5 per component
    };

    std::size_t find_step(double t) const;

    double t0_ = 0.0, t1_ = 0.0;
    std::size_t dim_ = 0;
    bool reversed_ = false;  // integration ran in -t
    std::vector<Step> steps_;
    std::vector<double> y_final_;
};

/// Dormand–Prince 5(4) with PI step control and 4th-order dense interpolant.
/// Integrates from t0 to t_end (either direction).
OdeSolution solve_ode(const OdeRhs& rhs, double t0, std::vector<double> y0, double t_end,
                      const OdeSpec& spec = {});

struct FitResult {
    std::vector<double> coefficients;
    double rms_residual = 0.0;
    double max_residual = 0.0;
    double condition = 0.0;  // estimate for the normal system (kappa(R)^2)
};

/// Dense least squares min ||A c - b|| by Householder QR; A is row-major
/// rows x cols. Throws NumericError on rank deficiency.
FitResult lstsq(std::vector<double> A, std::size_t rows, std::size_t cols,
                std::vector<double> b);

/// Linear least squares onto a fixed function basis, solved by Householder QR
/// (never the normal equations). Requires >= 2x more samples than basis
/// functions and distinct abscissae; throws NumericError on rank deficiency.
FitResult fit_basis(const std::vector<std::pair<double, double>>& samples,
                    const std::vector<std::function<double(double)>>& basis);

/// Cumulative antiderivative F(s) = F0 + \int_{anchor}^{s} f, cached on a
/// uniform grid over [lo, hi] with cubic Hermite interpolation (the exact
/// derivative f is used at the nodes). The anchor may lie outside [lo, hi];
/// the gap is covered by one (possibly endpoint-singular) quadrature.
class Antiderivative {
public:
    Antiderivative() = default;
    Antiderivative(const std::function<double(double)>& f, double anchor, double lo, double hi,
                   int nodes = 1025, const QuadratureSpec& spec = {}, double offset = 0.0);

    double operator()(double s) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double lo_ = 0.0, hi_ = 0.0, dx_ = 1.0;
    std::vector<double> values_, derivs_;
};

} // namespace diffusym
