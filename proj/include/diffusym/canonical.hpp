#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "diffusym/classify.hpp"
#include "diffusym/invariants.hpp"

namespace diffusym {

struct MobiusParams {
    double alpha = 1.0, beta = 0.0, gamma = 0.0, delta = 1.0;
    double det() const { return alpha * delta - beta * gamma; }
};

enum class SchwarzCase { Flat, Hyperbolic, Trigonometric };

/// Closed-form solution of {T,t} = 8 c2 for the three cases: a Moebius map of
/// t, of {cosh, sinh}(2 lambda t), or of {cos, sin}(2 lambda t).
/// rho = Tddot/Tdot satisfies rho' - rho^2/2 = 8 c2.
struct SchwarzianSolution {
    SchwarzCase case_tag = SchwarzCase::Flat;
    double lambda = 0.0;
    MobiusParams mobius;
    std::function<double(double)> T, Tdot, rho;
    /// Zeros of the denominator inside [t_lo, t_hi] (poles of T).
    std::vector<double> scan_poles(double t_lo, double t_hi, int n = 2048) const;
};

SchwarzianSolution solve_schwarzian(double c2, const MobiusParams& p);

/// Dense solution of omega'' + 4 c2 omega = 2 c1 from given initial data.
struct OmegaSolution {
    std::function<double(double)> omega, omega_dot;
};

OmegaSolution solve_omega(const std::function<double(double)>& c2,
                          const std::function<double(double)>& c1,
                          std::pair<double, double> initial, double t_lo, double t_hi,
                          const OdeSpec& spec = {});
OmegaSolution solve_omega(double c2, double c1, std::pair<double, double> initial, double t_lo,
                          double t_hi, const OdeSpec& spec = {});

enum class CanonicalTarget { FirstCanonical, SecondCanonical };

struct HeatMapOptions {
    std::optional<MobiusParams> mobius;  // default per case, see build_heat_map
    double C = 1.0;
    CanonicalTarget target = CanonicalTarget::FirstCanonical;
    std::pair<double, double> omega_init{0.0, 0.0};
    /// Forces omega to a caller-supplied solution of the omega ODE.
    std::optional<OmegaSolution> omega_override;
};

/// The point transformation to canonical form:
///   t~ = T(t),  x~ = sqrt(Tdot) (I + omega),
///   u  = C (Tdot a)^{1/4} exp[ -int b/(2a) dx + (Tddot/8Tdot)(I+omega)^2
///          + omega_dot I / 2 - int (c2 omega^2 - omega_dot^2/4 - c0) dt ] u~.
/// Immutable after construction; evaluators are pure.
class HeatMap {
public:
    SchwarzCase case_tag() const { return schwarz_.case_tag; }
    double lambda() const { return schwarz_.lambda; }
    const MobiusParams& mobius() const { return schwarz_.mobius; }
    CanonicalTarget target() const { return target_; }
    double mu() const { return mu_; }
    double constant() const { return C_; }
    const std::vector<double>& pole_scan() const { return poles_; }

    double t_tilde(double t) const { return schwarz_.T(t); }
    double T_dot(double t) const { return schwarz_.Tdot(t); }
    double rho(double t) const { return schwarz_.rho(t); }
    double omega(double t) const { return omega_.omega(t); }
    double omega_dot(double t) const { return omega_.omega_dot(t); }
    double x_tilde(double x, double t) const;
    double multiplier(double x, double t) const;

    /// u(x,t) = multiplier * u~(x~, t~) for a caller-supplied heat-side solution.
    std::function<double(double, double)> pull_back(
        std::function<double(double, double)> u_tilde) const;
    /// Image of u~ == 1.
    std::function<double(double, double)> pull_back_constant() const;

    /// Numeric inverses on the build window (monotone bisection).
    double invert_T(double t_tilde) const;
    double invert_x(double x_tilde, double t) const;

    /// Push-forward of a solution u of the original PDE: u~(x~,t~) = u/multiplier.
    std::function<double(double, double)> push_forward(
        std::function<double(double, double)> u) const;

    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }

private:
    friend HeatMap build_heat_map(const CoefficientSet&, const InvariantProfile&,
                                  const SymmetryClass&, const HeatMapOptions&);

    SchwarzianSolution schwarz_;
    OmegaSolution omega_;
    CanonicalTarget target_ = CanonicalTarget::FirstCanonical;
    double mu_ = 0.0;
    double C_ = 1.0;
    double iota_ = 0.0;
    double t_lo_ = 0.0, t_hi_ = 1.0;
    double x_lo_ = 0.0, x_hi_ = 1.0;
    std::vector<double> poles_;
    std::function<double(double)> I_;         // includes the FourDim offset
    std::function<double(double)> a_;
    std::function<double(double)> B_;         // int b/(2a) dx
    std::function<double(double)> Q_;         // int (c2 w^2 - w'^2/4 - c0) dt
};

/// Builds the map for a SixDim class (first canonical form) or a FourDim class
/// (second canonical form, omega = 0); the window is the profile's domain.
HeatMap build_heat_map(const CoefficientSet& coeffs, const InvariantProfile& prof,
                       const SymmetryClass& cls, const HeatMapOptions& opt = {});

/// Transformation for the linear-drift family (a=1, b=m+nx, c=q+rx):
///   t~ = int e^{2 alpha} dt, x~ = e^alpha x + beta,
///   u = exp[int (q + e^{2 alpha} gamma^2 + m e^alpha gamma) dt] u~,
/// with alpha' = n, gamma = int e^{-alpha} r dt, beta' = e^alpha (m + 2 e^alpha gamma).
struct TimeDepMapOptions {
    double alpha0 = 0.0, beta0 = 0.0, gamma0 = 0.0, t_tilde0 = 0.0, log_mult0 = 0.0;
};

class TimeDepMap {
public:
    double alpha(double t) const { return alpha_(t); }
    double beta(double t) const { return beta_(t); }
    double gamma(double t) const { return gamma_(t); }
    double t_tilde(double t) const { return t_tilde_(t); }
    double x_tilde(double x, double t) const;
    double multiplier(double t) const;

    std::function<double(double, double)> pull_back(
        std::function<double(double, double)> u_tilde) const;

private:
    friend TimeDepMap build_timedep_map(const LinearDriftForm&, double, double,
                                        const TimeDepMapOptions&);
    Antiderivative alpha_, gamma_, beta_, t_tilde_, log_mult_;
};

TimeDepMap build_timedep_map(const LinearDriftForm& form, double t_lo, double t_hi,
                             const TimeDepMapOptions& opt = {});

} // namespace diffusym
