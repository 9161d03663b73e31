#pragma once

#include <functional>
#include <vector>

#include "diffusym/numerics.hpp"

namespace diffusym {

using SpaceTimeFn = std::function<double(double, double)>;

/// Uniform verification grid. The x spacing h is the stencil step of the
/// fourth-order spatial differences; the time derivative uses an internal
/// analytic step, so nt only controls where the residual is reported.
struct Grid {
    double x_lo = -1.0, x_hi = 1.0;
    int nx = 129;
    double t_lo = 0.1, t_hi = 1.0;
    int nt = 17;

    double h() const { return (x_hi - x_lo) / (nx - 1); }
    double tau_step() const { return (t_hi - t_lo) / (nt - 1); }
    void validate() const;
};

struct ResidualReport {
    double max_abs = 0.0;
    double rms = 0.0;
    double scale = 0.0;      // max |u| over the grid
    double relative = 0.0;   // max_abs / scale
};

/// PDE residual r = u_t - a u_xx - b u_x - c u sampled over interior nodes,
/// with fourth-order central differences in x (step h) and second-order
/// central differences in t (small analytic step).
ResidualReport residual(const SpaceTimeFn& a, const SpaceTimeFn& b, const SpaceTimeFn& c,
                        const SpaceTimeFn& u, const Grid& grid);

struct EvolveResult {
    std::vector<double> times;
    std::vector<double> l2_error;   // discrete L2 distance to the reference
    double final_l2 = 0.0;
    double max_l2 = 0.0;
    double mass_initial = 0.0;
    double mass_drift = 0.0;        // max |mass(t) - mass(t0)|
};

/// Crank-Nicolson evolution of the variable-coefficient operator from the
/// reference profile at t_lo, Dirichlet boundary values from the reference;
/// returns the discrete L2 error curve. Time step: tau = h/2 by default.
EvolveResult evolve_compare(const SpaceTimeFn& a, const SpaceTimeFn& b, const SpaceTimeFn& c,
                            const SpaceTimeFn& reference, const Grid& grid,
                            double tau_step = 0.0);

/// Quadrature of u(., t) (times an optional weight) over [lo, hi].
double mass(const SpaceTimeFn& u, double t, double lo, double hi,
            const std::function<double(double)>& weight = {},
            const QuadratureSpec& spec = {});

} // namespace diffusym
