#include "diffusym/canonical.hpp"

#include <cmath>

namespace diffusym {

namespace {

MobiusParams default_mobius(SchwarzCase c) {
    switch (c) {
        case SchwarzCase::Flat: return {1.0, 0.0, 0.0, 1.0};
        case SchwarzCase::Hyperbolic:
        case SchwarzCase::Trigonometric: return {0.0, 1.0, 1.0, 0.0};
    }
    return {};
}

} // namespace

std::vector<double> SchwarzianSolution::scan_poles(double t_lo, double t_hi, int n) const {
    const MobiusParams p = mobius;
    auto denom = [&](double t) {
        switch (case_tag) {
            case SchwarzCase::Flat: return p.gamma * t + p.delta;
            case SchwarzCase::Hyperbolic:
                return p.gamma * std::cosh(2.0 * lambda * t) + p.delta * std::sinh(2.0 * lambda * t);
            case SchwarzCase::Trigonometric:
                return p.gamma * std::cos(2.0 * lambda * t) + p.delta * std::sin(2.0 * lambda * t);
        }
        return 1.0;
    };
    std::vector<double> poles;
    double prev = denom(t_lo);
    for (int i = 1; i <= n; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / n;
        const double cur = denom(t);
        if (prev == 0.0 || (prev < 0.0) != (cur < 0.0)) {
            // bisect to the sign change
            double a = t_lo + (t_hi - t_lo) * (i - 1) / n, b = t;
            for (int k = 0; k < 60; ++k) {
                const double m = 0.5 * (a + b);
                if ((denom(a) < 0.0) != (denom(m) < 0.0))
                    b = m;
                else
                    a = m;
            }
            poles.push_back(0.5 * (a + b));
        }
        prev = cur;
    }
    return poles;
}

SchwarzianSolution solve_schwarzian(double c2, const MobiusParams& p) {
    SchwarzianSolution sol;
    sol.mobius = p;
    const double det = p.det();
    if (det == 0.0) throw SpecError("solve_schwarzian: Moebius determinant must be nonzero");

    if (c2 == 0.0) {
        // Any nonzero determinant yields {T,t} = 0; a canonical map additionally
        // needs det > 0 (Tdot > 0), which build_heat_map enforces on its window.
        sol.case_tag = SchwarzCase::Flat;
        sol.lambda = 0.0;
        sol.T = [p](double t) { return (p.alpha * t + p.beta) / (p.gamma * t + p.delta); };
        sol.Tdot = [p, det](double t) {
            const double d = p.gamma * t + p.delta;
            return det / (d * d);
        };
        sol.rho = [p](double t) { return -2.0 * p.gamma / (p.gamma * t + p.delta); };
        return sol;
    }

    const double lambda = std::sqrt(std::abs(c2));
    sol.lambda = lambda;
    if (c2 < 0.0) {
        if (det >= 0.0)
            throw SpecError("solve_schwarzian: hyperbolic case requires negative determinant");
        sol.case_tag = SchwarzCase::Hyperbolic;
        sol.T = [p, lambda](double t) {
            const double C = std::cosh(2.0 * lambda * t), S = std::sinh(2.0 * lambda * t);
            return (p.alpha * C + p.beta * S) / (p.gamma * C + p.delta * S);
        };
        sol.Tdot = [p, lambda, det](double t) {
            const double D = p.gamma * std::cosh(2.0 * lambda * t) +
                             p.delta * std::sinh(2.0 * lambda * t);
            return -2.0 * det * lambda / (D * D);
        };
        sol.rho = [p, lambda](double t) {
            const double C = std::cosh(2.0 * lambda * t), S = std::sinh(2.0 * lambda * t);
            return -4.0 * lambda * (p.gamma * S + p.delta * C) / (p.gamma * C + p.delta * S);
        };
        return sol;
    }

    if (det >= 0.0)
        throw SpecError("solve_schwarzian: trigonometric case requires negative determinant");
    sol.case_tag = SchwarzCase::Trigonometric;
    sol.T = [p, lambda](double t) {
        const double C = std::cos(2.0 * lambda * t), S = std::sin(2.0 * lambda * t);
        return (p.alpha * C + p.beta * S) / (p.gamma * C + p.delta * S);
    };
    sol.Tdot = [p, lambda, det](double t) {
        const double D =
            p.gamma * std::cos(2.0 * lambda * t) + p.delta * std::sin(2.0 * lambda * t);
        return -2.0 * det * lambda / (D * D);
    };
    sol.rho = [p, lambda](double t) {
        const double C = std::cos(2.0 * lambda * t), S = std::sin(2.0 * lambda * t);
        return 4.0 * lambda * (p.gamma * S - p.delta * C) / (p.gamma * C + p.delta * S);
    };
    return sol;
}

OmegaSolution solve_omega(const std::function<double(double)>& c2,
                          const std::function<double(double)>& c1,
                          std::pair<double, double> initial, double t_lo, double t_hi,
                          const OdeSpec& spec) {
    auto rhs = [c2, c1](double t, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = 2.0 * c1(t) - 4.0 * c2(t) * y[0];
    };
    auto sol = std::make_shared<OdeSolution>(
        solve_ode(rhs, t_lo, {initial.first, initial.second}, t_hi, spec));
    OmegaSolution out;
    out.omega = [sol](double t) { return sol->component(t, 0); };
    out.omega_dot = [sol](double t) { return sol->component(t, 1); };
    return out;
}

OmegaSolution solve_omega(double c2, double c1, std::pair<double, double> initial, double t_lo,
                          double t_hi, const OdeSpec& spec) {
    return solve_omega([c2](double) { return c2; }, [c1](double) { return c1; }, initial, t_lo,
                       t_hi, spec);
}

// ---------------------------------------------------------------------------
// HeatMap
// ---------------------------------------------------------------------------

double HeatMap::x_tilde(double x, double t) const {
    const double td = schwarz_.Tdot(t);
    if (!(td > 0.0)) throw NumericError("HeatMap: Tdot <= 0 inside the window");
    return std::sqrt(td) * (I_(x) + omega_.omega(t));
}

double HeatMap::multiplier(double x, double t) const {
    const double td = schwarz_.Tdot(t);
    if (!(td > 0.0)) throw NumericError("HeatMap: Tdot <= 0 inside the window");
    const double Iw = I_(x) + omega_.omega(t);
    const double expo = -B_(x) + schwarz_.rho(t) / 8.0 * Iw * Iw +
                        0.5 * omega_.omega_dot(t) * I_(x) - Q_(t);
    return C_ * std::pow(td * a_(x), 0.25) * std::exp(expo);
}

std::function<double(double, double)> HeatMap::pull_back(
    std::function<double(double, double)> u_tilde) const {
    const HeatMap self = *this;
    return [self, u_tilde](double x, double t) {
        return self.multiplier(x, t) * u_tilde(self.x_tilde(x, t), self.t_tilde(t));
    };
}

std::function<double(double, double)> HeatMap::pull_back_constant() const {
    const HeatMap self = *this;
    return [self](double x, double t) { return self.multiplier(x, t); };
}

double HeatMap::invert_T(double t_tilde_q) const {
    double a = t_lo_, b = t_hi_;
    double fa = schwarz_.T(a) - t_tilde_q;
    double fb = schwarz_.T(b) - t_tilde_q;
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw NumericError("HeatMap::invert_T: value outside the window image");
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = schwarz_.T(m) - t_tilde_q;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double HeatMap::invert_x(double x_tilde_q, double t) const {
    double a = x_lo_, b = x_hi_;
    double fa = x_tilde(a, t) - x_tilde_q;
    double fb = x_tilde(b, t) - x_tilde_q;
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw NumericError("HeatMap::invert_x: value outside the window image");
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = x_tilde(m, t) - x_tilde_q;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

std::function<double(double, double)> HeatMap::push_forward(
    std::function<double(double, double)> u) const {
    const HeatMap self = *this;
    return [self, u](double x_t, double t_t) {
        const double t = self.invert_T(t_t);
        const double x = self.invert_x(x_t, t);
        return u(x, t) / self.multiplier(x, t);
    };
}

HeatMap build_heat_map(const CoefficientSet& coeffs, const InvariantProfile& prof,
                       const SymmetryClass& cls, const HeatMapOptions& opt) {
    if (cls.variant == SymmetryVariant::NoExtra)
        throw SpecError("build_heat_map: no non-trivial symmetry class");
    const bool second = opt.target == CanonicalTarget::SecondCanonical;
    if (cls.variant == SymmetryVariant::FourDim && !second)
        throw SpecError("build_heat_map: a FourDim class maps to the second canonical form");
    if (second && cls.variant == SymmetryVariant::SixDim && std::abs(cls.c1) > 1e-10)
        throw SpecError("build_heat_map: second canonical target requires c1 = 0");
    if (coeffs.time_dependent())
        throw SpecError(
            "build_heat_map: time-dependent coefficients belong to build_timedep_map");

    HeatMap map;
    map.target_ = opt.target;
    map.C_ = opt.C;
    map.mu_ = cls.variant == SymmetryVariant::FourDim ? cls.mu : 0.0;
    map.iota_ = cls.iota;

    const WorkingDomain& dom = prof.domain();
    map.t_lo_ = dom.t_min;
    map.t_hi_ = dom.t_max;
    map.x_lo_ = dom.x_lo();
    map.x_hi_ = dom.x_hi();

    const MobiusParams mobius = opt.mobius ? *opt.mobius : default_mobius([&] {
        if (cls.c2 == 0.0) return SchwarzCase::Flat;
        return cls.c2 < 0.0 ? SchwarzCase::Hyperbolic : SchwarzCase::Trigonometric;
    }());
    map.schwarz_ = solve_schwarzian(cls.c2, mobius);
    map.poles_ = map.schwarz_.scan_poles(dom.t_min, dom.t_max);
    if (!map.poles_.empty())
        throw NumericError("build_heat_map: T has a pole inside the time window");
    for (int i = 0; i <= 64; ++i) {
        const double t = dom.t_min + (dom.t_max - dom.t_min) * i / 64.0;
        if (!(map.schwarz_.Tdot(t) > 0.0))
            throw NumericError("build_heat_map: Tdot <= 0 inside the time window");
    }

    // omega: forced to zero for the second canonical target; zero is a valid
    // choice whenever c1 = 0, otherwise solve the omega ODE.
    if (opt.omega_override && !second) {
        map.omega_ = *opt.omega_override;
    } else if (second || cls.c1 == 0.0) {
        map.omega_.omega = [](double) { return 0.0; };
        map.omega_.omega_dot = [](double) { return 0.0; };
    } else {
        map.omega_ = solve_omega(cls.c2, cls.c1, opt.omega_init, dom.t_min, dom.t_max);
    }

    // Offset-adjusted I for the FourDim case (mu/(I+iota)^2 form).
    {
        const double iota = cls.variant == SymmetryVariant::FourDim ? cls.iota : 0.0;
        const InvariantProfile prof_copy = prof;
        map.I_ = [prof_copy, iota](double x) { return prof_copy.I(x) + iota; };
        map.a_ = [prof_copy](double x) { return prof_copy.a(x); };
    }

    // B(x) = int b/(2a) dx, anchored at x0 when integrable there, else at the
    // left sample edge (the difference is a constant absorbed into C).
    {
        const CoefficientSet cs = coeffs;
        auto b_over_2a = [cs](double s) {
            const double av = cs.a_at(s, 0.0);
            if (!(av > 0.0)) throw NumericError("build_heat_map: a <= 0 in b/(2a) integral");
            return cs.b_at(s, 0.0) / (2.0 * av);
        };
        double anchor = prof.x0();
        if (anchor < map.x_lo_ || anchor > map.x_hi_) {
            QuadratureSpec probe;
            probe.max_subdivisions = 200;
            try {
                (void)integrate(b_over_2a, anchor, anchor < map.x_lo_ ? map.x_lo_ : map.x_hi_,
                                probe);
            } catch (const NumericError&) {
                anchor = map.x_lo_;  // divergent from x0; fall back
            }
        }
        Antiderivative cache(b_over_2a, anchor, map.x_lo_, map.x_hi_,
                             std::max(4 * dom.nx + 1, 513));
        map.B_ = [cache](double x) { return cache(x); };
    }

    // Q(t) = int (c2 omega^2 - omega_dot^2/4 - c0) dt from t_min.
    {
        const double c2v = cls.c2, c0v = cls.c0;
        const OmegaSolution om = map.omega_;
        auto q_integrand = [c2v, c0v, om](double t) {
            const double w = om.omega(t), wd = om.omega_dot(t);
            return c2v * w * w - 0.25 * wd * wd - c0v;
        };
        Antiderivative cache(q_integrand, dom.t_min, dom.t_min, dom.t_max, 1025);
        map.Q_ = [cache](double t) { return cache(t); };
    }

    return map;
}

// ---------------------------------------------------------------------------
// Linear-drift family map
// ---------------------------------------------------------------------------

double TimeDepMap::x_tilde(double x, double t) const {
    return std::exp(alpha_(t)) * x + beta_(t);
}

double TimeDepMap::multiplier(double t) const { return std::exp(log_mult_(t)); }

std::function<double(double, double)> TimeDepMap::pull_back(
    std::function<double(double, double)> u_tilde) const {
    const TimeDepMap self = *this;
    return [self, u_tilde](double x, double t) {
        return self.multiplier(t) * u_tilde(self.x_tilde(x, t), self.t_tilde(t));
    };
}

TimeDepMap build_timedep_map(const LinearDriftForm& form, double t_lo, double t_hi,
                             const TimeDepMapOptions& opt) {
    if (!(t_lo < t_hi)) throw SpecError("build_timedep_map: empty time window");
    const ParamEnv env = form.env;
    const ExprPtr m = form.m, n = form.n, q = form.q, r = form.r;
    const int nodes = 1025;

    auto n_of = [n, env](double t) { return n->eval(0.0, t, env); };
    Antiderivative alpha(n_of, t_lo, t_lo, t_hi, nodes, {}, opt.alpha0);

    auto gamma_integrand = [alpha, r, env](double t) {
        return std::exp(-alpha(t)) * r->eval(0.0, t, env);
    };
    Antiderivative gamma(gamma_integrand, t_lo, t_lo, t_hi, nodes, {}, opt.gamma0);

    auto beta_integrand = [alpha, gamma, m, env](double t) {
        const double ea = std::exp(alpha(t));
        return ea * (m->eval(0.0, t, env) + 2.0 * ea * gamma(t));
    };
    Antiderivative beta(beta_integrand, t_lo, t_lo, t_hi, nodes, {}, opt.beta0);

    auto ttilde_integrand = [alpha](double t) { return std::exp(2.0 * alpha(t)); };
    Antiderivative t_tilde(ttilde_integrand, t_lo, t_lo, t_hi, nodes, {}, opt.t_tilde0);

    auto mult_integrand = [alpha, gamma, m, q, env](double t) {
        const double ea = std::exp(alpha(t));
        const double g = gamma(t);
        return q->eval(0.0, t, env) + ea * ea * g * g + m->eval(0.0, t, env) * ea * g;
    };
    Antiderivative log_mult(mult_integrand, t_lo, t_lo, t_hi, nodes, {}, opt.log_mult0);

    TimeDepMap map;
    map.alpha_ = std::move(alpha);
    map.gamma_ = std::move(gamma);
    map.beta_ = std::move(beta);
    map.t_tilde_ = std::move(t_tilde);
    map.log_mult_ = std::move(log_mult);
    return map;
}

} // namespace diffusym
