#include "diffusym/invariants.hpp"

#include <cmath>

namespace diffusym {

CoefficientSet CoefficientSet::parse(const std::string& a_src, const std::string& b_src,
                                     const std::string& c_src, ParamEnv env) {
    CoefficientSet cs;
    cs.a = parse_expression(a_src);
    cs.b = parse_expression(b_src);
    cs.c = parse_expression(c_src);
    cs.env = std::move(env);
    return cs;
}

void WorkingDomain::validate() const {
    if (!(x_min < x_max)) throw SpecError("WorkingDomain: x_min < x_max required");
    if (!(t_min < t_max)) throw SpecError("WorkingDomain: t_min < t_max required");
    if (nx < 32) throw SpecError("WorkingDomain: nx >= 32 required");
    if (nt < 8) throw SpecError("WorkingDomain: nt >= 8 required");
    if (margin >= 0.0 && 2.0 * margin >= x_max - x_min)
        throw SpecError("WorkingDomain: margin too large");
    if (!(x_lo() < x_hi())) throw SpecError("WorkingDomain: empty sampling window");
}

CoeffFns coeff_fns_autonomous(const CoefficientSet& coeffs) {
    if (coeffs.time_dependent())
        throw SpecError("coefficients depend on t; use the space-time profile");
    const ExprPtr a = coeffs.a;
    const ExprPtr ax = differentiate(a, 'x');
    const ExprPtr axx = differentiate(ax, 'x');
    const ExprPtr b = coeffs.b;
    const ExprPtr bx = differentiate(b, 'x');
    const ExprPtr c = coeffs.c;
    const ParamEnv env = coeffs.env;
    const double t0 = 0.0;  // autonomous: any t
    CoeffFns fns;
    fns.a = [a, env, t0](double x) { return a->eval(x, t0, env); };
    fns.ax = [ax, env, t0](double x) { return ax->eval(x, t0, env); };
    fns.axx = [axx, env, t0](double x) { return axx->eval(x, t0, env); };
    fns.b = [b, env, t0](double x) { return b->eval(x, t0, env); };
    fns.bx = [bx, env, t0](double x) { return bx->eval(x, t0, env); };
    fns.c = [c, env, t0](double x) { return c->eval(x, t0, env); };
    return fns;
}

double InvariantProfile::sqrt_a(double x) const {
    const double av = fns_.a(x);
    if (!(av > 0.0)) throw NumericError("profile: a(x) <= 0 inside working domain");
    return std::sqrt(av);
}

double InvariantProfile::J(double x) const {
    const double sa = sqrt_a(x);
    return (0.5 * fns_.ax(x) - fns_.b(x)) / sa;
}

double InvariantProfile::K(double x) const {
    const double av = fns_.a(x);
    if (!(av > 0.0)) throw NumericError("profile: a(x) <= 0 inside working domain");
    const double sa = std::sqrt(av);
    const double ax = fns_.ax(x);
    const double q = 0.5 * ax - fns_.b(x);   // = sqrt(a) J
    const double qx = 0.5 * fns_.axx(x) - fns_.bx(x);
    // J' = qx/sa - q ax / (2 a^{3/2});  (1/2) sa J' = qx/2 - q ax/(4a)
    const double half_sa_Jp = 0.5 * qx - q * ax / (4.0 * av);
    const double Jv = q / sa;
    return half_sa_Jp - 0.25 * Jv * Jv + fns_.c(x);
}

InvariantProfile profile_from_functions(const CoeffFns& fns, const WorkingDomain& dom) {
    dom.validate();
    InvariantProfile prof;
    prof.fns_ = fns;
    prof.dom_ = dom;
    prof.x0_ = dom.x0_value();

    const double lo = dom.x_lo(), hi = dom.x_hi();
    // Positivity scan of the diffusion coefficient (finer than the sample grid).
    const int scan = 2 * dom.nx + 1;
    for (int i = 0; i < scan; ++i) {
        const double x = lo + (hi - lo) * i / (scan - 1);
        if (!(fns.a(x) > 0.0))
            throw NumericError("profile: a(x) <= 0 detected on the sampling grid");
    }

    auto inv_sqrt_a = [fns](double s) {
        const double av = fns.a(s);
        if (!(av > 0.0)) throw NumericError("profile: a <= 0 inside I integral");
        return 1.0 / std::sqrt(av);
    };
    const int cache_nodes = std::max(4 * dom.nx + 1, 513);
    prof.I_cache_ = Antiderivative(inv_sqrt_a, prof.x0_, lo, hi, cache_nodes);

    prof.grid_.reserve(dom.nx);
    for (int i = 0; i < dom.nx; ++i) {
        const double x = lo + (hi - lo) * i / (dom.nx - 1);
        GridSample s;
        s.x = x;
        s.I = prof.I(x);
        s.J = prof.J(x);
        s.K = prof.K(x);
        if (!std::isfinite(s.K) || !std::isfinite(s.J) || !std::isfinite(s.I))
            throw NumericError("profile: non-finite invariant sample");
        prof.grid_.push_back(s);
    }
    return prof;
}

InvariantProfile profile(const CoefficientSet& coeffs, const WorkingDomain& dom) {
    return profile_from_functions(coeff_fns_autonomous(coeffs), dom);
}

// ---------------------------------------------------------------------------
// Space-time profile
// ---------------------------------------------------------------------------

SpaceTimeProfile profile_xt(const CoefficientSet& coeffs, const WorkingDomain& dom) {
    dom.validate();
    SpaceTimeProfile p;
    p.coeffs_ = coeffs;
    p.dom_ = dom;
    p.x0_ = dom.x0_value();
    const ExprPtr sa = sqrt(coeffs.a);
    p.J_expr_ = differentiate(sa, 'x') - coeffs.b / sa;
    const ExprPtr half = Expr::number(0.5);
    const ExprPtr quarter = Expr::number(0.25);
    p.K_local_expr_ = half * sa * differentiate(p.J_expr_, 'x') -
                      quarter * p.J_expr_ * p.J_expr_ + coeffs.c;
    p.dtba_expr_ = differentiate(coeffs.b / coeffs.a, 't');
    return p;
}

double SpaceTimeProfile::I(double x, double t) const {
    const auto& cs = coeffs_;
    QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    spec.rel_tol = 1e-12;
    return integrate(
        [&](double s) {
            const double av = cs.a_at(s, t);
            if (!(av > 0.0)) throw NumericError("profile_xt: a <= 0 inside I integral");
            return 1.0 / std::sqrt(av);
        },
        x0_, x, spec);
}

double SpaceTimeProfile::J(double x, double t) const { return J_expr_->eval(x, t, coeffs_.env); }

double SpaceTimeProfile::K(double x, double t) const {
    const double local = K_local_expr_->eval(x, t, coeffs_.env);
    QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    spec.rel_tol = 1e-12;
    const double tail =
        0.5 * integrate([&](double s) { return dtba_expr_->eval(s, t, coeffs_.env); }, x0_, x,
                        spec);
    return local + tail;
}

// ---------------------------------------------------------------------------
// Expanded second-order semi-invariant
// ---------------------------------------------------------------------------

double khat2(const CoefficientSet& coeffs, double x, double t) {
    const ParamEnv& env = coeffs.env;
    const double a = coeffs.a->eval(x, t, env);
    if (!(a > 0.0)) throw NumericError("khat2: a <= 0");
    const double ax = differentiate(coeffs.a, 'x')->eval(x, t, env);
    const double axx = differentiate(differentiate(coeffs.a, 'x'), 'x')->eval(x, t, env);
    const double at = differentiate(coeffs.a, 't')->eval(x, t, env);
    const double b = coeffs.b->eval(x, t, env);
    const double bx = differentiate(coeffs.b, 'x')->eval(x, t, env);
    const double bxx = differentiate(differentiate(coeffs.b, 'x'), 'x')->eval(x, t, env);
    const double bt = differentiate(coeffs.b, 't')->eval(x, t, env);
    const double cx = differentiate(coeffs.c, 'x')->eval(x, t, env);
    return 0.5 * b * b * ax + (a * axx - at - ax * ax) * b + (a * ax - a * b) * bx + a * bt -
           a * a * bxx + 2.0 * a * a * cx;
}

} // namespace diffusym
