#include "diffusym/driftdesign.hpp"

#include <algorithm>
#include <cmath>

namespace diffusym {

double RiccatiSolution::Omega(double I) const {
    if (I < lo_ - 1e-12 || I > hi_ + 1e-12)
        throw NumericError("RiccatiSolution: query outside validity interval");
    const auto y = (*v_)(std::clamp(I, lo_, hi_));
    if (y[0] == 0.0) throw NumericError("RiccatiSolution: v vanished at query point");
    return -2.0 * y[1] / y[0];
}

RiccatiSolution solve_omega_profile(const InvariantForm& form, std::pair<double, double> v_init,
                                    std::pair<double, double> I_range) {
    if (v_init.first == 0.0 && v_init.second == 0.0)
        throw SpecError("solve_omega_profile: v_init must not vanish identically");
    if (!(I_range.first < I_range.second))
        throw SpecError("solve_omega_profile: empty I range");
    if (v_init.first == 0.0)
        throw SpecError("solve_omega_profile: v has a zero at the left endpoint");

    const InvariantForm f = form;
    auto rhs = [f](double I, const std::vector<double>& y, std::vector<double>& dy) {
        // 4 v'' - g v = 0 with g = riccati_to_linear_rhs(f), i.e. v'' = -f v.
        dy[0] = y[1];
        dy[1] = 0.25 * riccati_to_linear_rhs(f(I)) * y[0];
    };
    auto sol = std::make_shared<OdeSolution>(
        solve_ode(rhs, I_range.first, {v_init.first, v_init.second}, I_range.second));

    RiccatiSolution out;
    out.f_ = [f](double I) { return f(I); };
    out.v_ = sol;
    out.lo_ = I_range.first;
    out.hi_ = I_range.second;

    // Truncate at the first zero of v (scan + bisection).
    const int scan = 4096;
    double prev = v_init.first;
    for (int i = 1; i <= scan; ++i) {
        const double I = I_range.first + (I_range.second - I_range.first) * i / scan;
        const double cur = (*sol)(I)[0];
        if (cur == 0.0 || (prev < 0.0) != (cur < 0.0)) {
            double a = I_range.first + (I_range.second - I_range.first) * (i - 1) / scan;
            double b = I;
            for (int k = 0; k < 80; ++k) {
                const double m = 0.5 * (a + b);
                if (((*sol)(a)[0] < 0.0) != (((*sol)(m))[0] < 0.0))
                    b = m;
                else
                    a = m;
            }
            out.hi_ = a - 1e-9 * (I_range.second - I_range.first);
            break;
        }
        prev = cur;
    }
    return out;
}

std::function<double(double)> design_drift(const ExprPtr& p, const ParamEnv& env,
                                           const RiccatiSolution& sol, const WorkingDomain& dom) {
    CoefficientSet ps;
    ps.a = p;
    ps.b = Expr::number(0.0);
    ps.c = Expr::number(0.0);
    ps.env = env;
    const InvariantProfile prof = profile(ps, dom);
    const ExprPtr px = differentiate(p, 'x');
    const RiccatiSolution ric = sol;
    const ParamEnv e = env;
    const ExprPtr pe = p;
    return [pe, px, e, prof, ric](double x) {
        const double pv = pe->eval(x, 0.0, e);
        if (!(pv > 0.0)) throw NumericError("design_drift: p <= 0");
        const double I = prof.I(x);
        return 0.5 * px->eval(x, 0.0, e) + std::sqrt(pv) * ric.Omega(I);
    };
}

CoeffFns fokker_planck_coeffs(const ExprPtr& p, const ParamEnv& env, const RiccatiSolution& sol,
                              const WorkingDomain& dom) {
    CoefficientSet ps;
    ps.a = p;
    ps.b = Expr::number(0.0);
    ps.c = Expr::number(0.0);
    ps.env = env;
    const InvariantProfile prof = profile(ps, dom);
    const ExprPtr px = differentiate(p, 'x');
    const ExprPtr pxx = differentiate(px, 'x');
    const RiccatiSolution ric = sol;
    const ParamEnv e = env;
    const ExprPtr pe = p;

    auto pv = [pe, e](double x) { return pe->eval(x, 0.0, e); };
    auto pxv = [px, e](double x) { return px->eval(x, 0.0, e); };
    auto pxxv = [pxx, e](double x) { return pxx->eval(x, 0.0, e); };
    auto Om = [prof, ric](double x) { return ric.Omega(prof.I(x)); };
    auto Omp = [prof, ric](double x) { return ric.Omega_prime(prof.I(x)); };

    // q = p'/2 + sqrt(p) Omega(I) with dI/dx = 1/sqrt(p), so
    // q' = p''/2 + p' Omega/(2 sqrt p) + Omega'(I); b = p' + q, c = q'.
    auto q_x = [pv, pxv, pxxv, Om, Omp](double x) {
        return 0.5 * pxxv(x) + 0.5 * pxv(x) * Om(x) / std::sqrt(pv(x)) + Omp(x);
    };
    CoeffFns fns;
    fns.a = pv;
    fns.ax = pxv;
    fns.axx = pxxv;
    fns.b = [pv, pxv, Om](double x) { return 1.5 * pxv(x) + std::sqrt(pv(x)) * Om(x); };
    fns.bx = [pxxv, q_x](double x) { return pxxv(x) + q_x(x); };
    fns.c = q_x;
    return fns;
}

double KummerParams::z_six(double I, double c1, double c2) const {
    return 0.5 * std::sqrt(c2) * std::pow(I + c1 / (2.0 * c2), 2);
}

double KummerParams::z_four(double I, double c2) const {
    return 0.5 * std::sqrt(c2) * I * I;
}

KummerParams kummer_params(const InvariantForm& form) {
    if (!(form.c2 > 0.0))
        throw SpecError("kummer_params: c2 > 0 required (transformation undefined otherwise)");
    KummerParams kp;
    kp.kind = form.kind;
    if (form.kind == InvariantFormKind::Six) {
        kp.a = 0.25 * (1.0 + (4.0 * form.c0 * form.c2 - form.c1 * form.c1) /
                                 (8.0 * std::pow(form.c2, 1.5)));
    } else {
        if (!(1.0 + form.mu >= 0.0))
            throw SpecError("kummer_params: 1 + mu must be nonnegative for real exponents");
        const double root = std::sqrt(1.0 + form.mu);
        kp.s_plus = 0.5 * (1.0 + root);
        kp.s_minus = 0.5 * (1.0 - root);
        const double base = form.c0 / (8.0 * std::sqrt(form.c2)) + 0.25;
        kp.coeff_plus = base + 0.5 * kp.s_plus;
        kp.coeff_minus = base + 0.5 * kp.s_minus;
    }
    return kp;
}

} // namespace diffusym
