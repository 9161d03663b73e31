#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diffusym/expr.hpp"
#include "diffusym/numerics.hpp"

namespace diffusym {

/// Coefficients a, b, c of u_t = a u_xx + b u_x + c u, as expression trees
/// plus the parameter bindings they are evaluated under.
struct CoefficientSet {
    ExprPtr a, b, c;
    ParamEnv env;

    static CoefficientSet parse(const std::string& a_src, const std::string& b_src,
                                const std::string& c_src, ParamEnv env);

    bool time_dependent() const {
        return a->depends_on_t() || b->depends_on_t() || c->depends_on_t();
    }

    double a_at(double x, double t) const { return a->eval(x, t, env); }
    double b_at(double x, double t) const { return b->eval(x, t, env); }
    double c_at(double x, double t) const { return c->eval(x, t, env); }
};

struct WorkingDomain {
    double x_min = -1.0, x_max = 1.0;
    double t_min = 0.1, t_max = 1.0;
    std::optional<double> x0;   // I-integral base point; default: midpoint
    int nx = 129, nt = 17;
    double margin = -1.0;       // sampling margin; <0 selects 1e-3*(x_max-x_min)

    double x0_value() const { return x0 ? *x0 : 0.5 * (x_min + x_max); }
    double margin_value() const { return margin < 0.0 ? 1e-3 * (x_max - x_min) : margin; }
    double x_lo() const { return x_min + margin_value(); }
    double x_hi() const { return x_max - margin_value(); }
    void validate() const;
};

/// Coefficient evaluators (with the x-derivatives the invariants need).
/// Built symbolically from a CoefficientSet, or supplied directly when the
/// coefficients are only available numerically (drift design closed loop).
struct CoeffFns {
    std::function<double(double)> a, ax, axx, b, bx, c;
};

CoeffFns coeff_fns_autonomous(const CoefficientSet& coeffs);

struct GridSample {
    double x, I, J, K;
};

/// Semi-invariant profile of an autonomous coefficient set: evaluators for
/// I(x) = int_{x0}^x ds/sqrt(a), J = (sqrt a)' - b/sqrt a,
/// K = (1/2) sqrt(a) J' - (1/4) J^2 + c, plus the sampled grid.
/// Immutable; evaluators are pure.
class InvariantProfile {
public:
    double I(double x) const { return I_cache_(x); }
    double J(double x) const;
    double K(double x) const;
    double a(double x) const { return fns_.a(x); }
    double sqrt_a(double x) const;

    const std::vector<GridSample>& grid() const { return grid_; }
    double x0() const { return x0_; }
    const WorkingDomain& domain() const { return dom_; }
    const CoeffFns& fns() const { return fns_; }

private:
    friend InvariantProfile profile_from_functions(const CoeffFns&, const WorkingDomain&);

    CoeffFns fns_;
    WorkingDomain dom_;
    double x0_ = 0.0;
    Antiderivative I_cache_;
    std::vector<GridSample> grid_;
};

InvariantProfile profile(const CoefficientSet& coeffs, const WorkingDomain& dom);
InvariantProfile profile_from_functions(const CoeffFns& fns, const WorkingDomain& dom);

/// Space-time profile for coefficients that may depend on t:
/// J(x,t) = d/dx sqrt(a) - b/sqrt(a),
/// K(x,t) = (1/2) sqrt(a) J_x - (1/4) J^2 + c + (1/2) int_{x0}^x d_t(b/a) dx'.
class SpaceTimeProfile {
public:
    double I(double x, double t) const;
    double J(double x, double t) const;
    double K(double x, double t) const;
    double x0() const { return x0_; }

private:
    friend SpaceTimeProfile profile_xt(const CoefficientSet&, const WorkingDomain&);

    CoefficientSet coeffs_;
    ExprPtr J_expr_, K_local_expr_, dtba_expr_;
    WorkingDomain dom_;
    double x0_ = 0.0;
};

SpaceTimeProfile profile_xt(const CoefficientSet& coeffs, const WorkingDomain& dom);

/// Expanded second-order semi-invariant
/// Khat2 = (1/2) b^2 a_x + (a a_xx - a_t - a_x^2) b + (a a_x - a b) b_x
///         + a b_t - a^2 b_xx + 2 a^2 c_x.
double khat2(const CoefficientSet& coeffs, double x, double t);

} // namespace diffusym
