#pragma once

#include <cmath>
#include <functional>
#include <memory>

#include "diffusym/expr.hpp"
#include "diffusym/invariants.hpp"
#include "diffusym/numerics.hpp"

namespace diffusym {

enum class InvariantFormKind { Four, Six };

/// Target invariant profile f4 = mu/I^2 + c2 I^2 + c0 or f6 = c2 I^2 + c1 I + c0.
struct InvariantForm {
    InvariantFormKind kind = InvariantFormKind::Six;
    double mu = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;

    double operator()(double I) const {
        const double base = c2 * I * I + c0;
        if (kind == InvariantFormKind::Six) return base + c1 * I;
        return base + mu / (I * I);
    }
};

/// Conversion between the Riccati normalisation (1/2) dOmega/dI - (1/4) Omega^2
/// = f and the linearised form 4 v'' - g v = 0: g = -4 f (the paper's re-signing
/// before the Cole-Hopf step). Kept as the single documented conversion.
inline double riccati_to_linear_rhs(double f) { return -4.0 * f; }

/// Omega(I) = -2 v'/v where v solves the linearised equation; valid between
/// consecutive zeros of v containing the initial point.
class RiccatiSolution {
public:
    double Omega(double I) const;
    /// dOmega/dI from the Riccati equation itself (exact along the solution).
    double Omega_prime(double I) const { return 2.0 * f_(I) + 0.5 * std::pow(Omega(I), 2); }
    double f(double I) const { return f_(I); }
    double I_lo() const { return lo_; }
    double I_hi() const { return hi_; }

private:
    friend RiccatiSolution solve_omega_profile(const InvariantForm&, std::pair<double, double>,
                                               std::pair<double, double>);
    std::function<double(double)> f_;
    std::shared_ptr<OdeSolution> v_;
    double lo_ = 0.0, hi_ = 0.0;
};

/// Integrates 4 v'' - (-4 f) v = 0 (i.e. v'' = -f v) over I_range from
/// v(I_range.first) = v_init and truncates the validity interval at zeros of v.
RiccatiSolution solve_omega_profile(const InvariantForm& form,
                                    std::pair<double, double> v_init,
                                    std::pair<double, double> I_range);

/// Drift q(x) = p'(x)/2 + sqrt(p) Omega(I(x)) guaranteeing the symmetry class
/// of the conserved-form PDE u_t = d_x(p u_x + q u).
std::function<double(double)> design_drift(const ExprPtr& p, const ParamEnv& env,
                                           const RiccatiSolution& sol, const WorkingDomain& dom);

/// Coefficient evaluators of the designed Fokker-Planck PDE expanded to
/// a = p, b = p' + q, c = q' (derivatives exact via the Riccati identity).
CoeffFns fokker_planck_coeffs(const ExprPtr& p, const ParamEnv& env, const RiccatiSolution& sol,
                              const WorkingDomain& dom);

/// Kummer-equation parameter maps (parameter level only; c2 > 0 required).
struct KummerParams {
    InvariantFormKind kind;
    // f6: z = (sqrt(c2)/2)(I + c1/(2c2))^2, w-equation parameter a.
    double a = 0.0;
    // f4: exponents s = (1 +- sqrt(1+mu))/2 and the w-equation coefficient per branch.
    double s_plus = 0.0, s_minus = 0.0;
    double coeff_plus = 0.0, coeff_minus = 0.0;

    double z_six(double I, double c1, double c2) const;
    double z_four(double I, double c2) const;
};

KummerParams kummer_params(const InvariantForm& form);

} // namespace diffusym
