#include "diffusym/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diffusym {

namespace {

struct OffsetFit {
    double iota = 0.0;
    FitResult fit;
};

// Least-squares fit of K onto {1/(I+iota)^2, 1, (I+iota)^2}.
FitResult fit_four(const std::vector<std::pair<double, double>>& samples, double iota) {
    std::vector<std::function<double(double)>> basis = {
        [iota](double I) { return 1.0 / ((I + iota) * (I + iota)); },
        [](double) { return 1.0; },
        [iota](double I) { return (I + iota) * (I + iota); },
    };
    return fit_basis(samples, basis);
}

double four_residual(const std::vector<std::pair<double, double>>& samples, double iota) {
    try {
        return fit_four(samples, iota).rms_residual;
    } catch (const NumericError&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Golden-section minimisation of the offset residual on [lo, hi].
double golden_polish(const std::vector<std::pair<double, double>>& samples, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = four_residual(samples, c);
    double fd = four_residual(samples, d);
    for (int it = 0; it < 80 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = four_residual(samples, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = four_residual(samples, d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

SymmetryClass classify(const InvariantProfile& prof, const ClassifyOptions& opt) {
    const auto& grid = prof.grid();
    if (grid.size() < 64) throw SpecError("classify: at least 64 profile samples required");

    std::vector<std::pair<double, double>> samples;
    samples.reserve(grid.size());
    double kmax = 0.0;
    for (const auto& g : grid) {
        if (!std::isfinite(g.K)) throw NumericError("classify: NaN in K samples");
        samples.emplace_back(g.I, g.K);
        kmax = std::max(kmax, std::abs(g.K));
    }
    const double scale = kmax + 1.0;

    SymmetryClass out;
    out.tolerance = opt.tol;

    // Step 1: quadratic in I. Any constant shift of I keeps the family
    // quadratic, so no offset search is needed here.
    {
        std::vector<std::function<double(double)>> basis = {
            [](double) { return 1.0; },
            [](double I) { return I; },
            [](double I) { return I * I; },
        };
        FitResult fit = fit_basis(samples, basis);
        if (fit.rms_residual / scale <= opt.tol) {
            out.variant = SymmetryVariant::SixDim;
            out.c0 = fit.coefficients[0];
            out.c1 = fit.coefficients[1];
            out.c2 = fit.coefficients[2];
            out.rms_residual = fit.rms_residual / scale;
            out.max_residual = fit.max_residual / scale;
            return out;
        }
    }

    // Step 2: mu/(I+iota)^2 + c0 + c2 (I+iota)^2 with a two-sided offset
    // search. The singular point -iota must stay outside the sampled I range.
    {
        double imin = samples.front().first, imax = imin;
        for (const auto& s : samples) {
            imin = std::min(imin, s.first);
            imax = std::max(imax, s.first);
        }
        const double width = imax - imin;
        const double eps = 1e-3 * width;

        double best_iota = 0.0;
        double best_res = std::numeric_limits<double>::infinity();
        const int half_grid = 50;  // 101 offsets total over the two sides
        auto scan_side = [&](double start, double stop) {
            for (int i = 0; i <= half_grid; ++i) {
                const double iota = start + (stop - start) * i / half_grid;
                const double r = four_residual(samples, iota);
                if (r < best_res) {
                    best_res = r;
                    best_iota = iota;
                }
            }
        };
        scan_side(-imin + eps, -imin + 4.0 * width);     // singularity left of range
        scan_side(-imax - 4.0 * width, -imax - eps);     // singularity right of range

        const double span = 4.0 * width / half_grid;
        const double lo_bound = best_iota > -imin ? -imin + 0.25 * eps : best_iota - span;
        const double hi_bound = best_iota < -imax ? -imax - 0.25 * eps : best_iota + span;
        const double glo = std::max(lo_bound, best_iota - span);
        const double ghi = std::min(hi_bound, best_iota + span);
        const double iota = glo < ghi ? golden_polish(samples, glo, ghi) : best_iota;
        FitResult fit = fit_four(samples, iota);
        if (fit.rms_residual / scale <= opt.tol && std::abs(fit.coefficients[0]) > opt.mu_tol) {
            out.variant = SymmetryVariant::FourDim;
            out.mu = fit.coefficients[0];
            out.c0 = fit.coefficients[1];
            out.c2 = fit.coefficients[2];
            out.c1 = 0.0;
            out.iota = iota;
            out.rms_residual = fit.rms_residual / scale;
            out.max_residual = fit.max_residual / scale;
            return out;
        }
        out.rms_residual = fit.rms_residual / scale;
        out.max_residual = fit.max_residual / scale;
    }

    out.variant = SymmetryVariant::NoExtra;
    return out;
}

TimeDepClassifiers timedep_classifiers(const ExprPtr& m, const ExprPtr& n, const ExprPtr& q,
                                       const ExprPtr& r, const ParamEnv& env) {
    const ExprPtr mdot = differentiate(m, 't');
    const ExprPtr ndot = differentiate(n, 't');
    TimeDepClassifiers cls;
    cls.c2 = [ndot, n, env](double t) {
        return 0.25 * (ndot->eval(0, t, env) - std::pow(n->eval(0, t, env), 2));
    };
    cls.c1 = [mdot, m, n, r, env](double t) {
        return 0.5 * (mdot->eval(0, t, env) - m->eval(0, t, env) * n->eval(0, t, env) +
                      2.0 * r->eval(0, t, env));
    };
    cls.c0 = [q, n, m, env](double t) {
        return q->eval(0, t, env) - 0.5 * n->eval(0, t, env) -
               0.25 * std::pow(m->eval(0, t, env), 2);
    };
    return cls;
}

std::optional<LinearDriftForm> extract_linear_drift(const CoefficientSet& coeffs,
                                                    const WorkingDomain& dom) {
    // a must be identically 1 and b, c linear in x with t-dependent pieces.
    const ExprPtr bx = differentiate(coeffs.b, 'x');
    const ExprPtr cx = differentiate(coeffs.c, 'x');
    if (bx->depends_on_x() || cx->depends_on_x() || coeffs.a->depends_on_x()) return std::nullopt;

    // Sample check: a == 1 across the window; the symbolic test above already
    // guarantees x-linearity of b and c.
    const double tm = 0.5 * (dom.t_min + dom.t_max);
    for (int i = 0; i < 9; ++i) {
        const double x = dom.x_min + (dom.x_max - dom.x_min) * i / 8.0;
        const double t = dom.t_min + (dom.t_max - dom.t_min) * i / 8.0;
        if (std::abs(coeffs.a_at(x, tm) - 1.0) > 1e-12) return std::nullopt;
        if (std::abs(coeffs.a_at(x, t) - 1.0) > 1e-12) return std::nullopt;
    }

    LinearDriftForm form;
    form.env = coeffs.env;
    const ExprPtr zero_x = Expr::number(0.0);
    // m(t) = b(0, t), n(t) = b_x(t); q(t) = c(0, t), r(t) = c_x(t).
    // Substituting x = 0 symbolically: evaluate via a wrapper expression is
    // not available, so rebuild b(0,t) = b - x*b_x evaluated with x = 0; since
    // b is linear in x, b(0,t) is exactly b|_{x=0}. Wrap as lambdas over eval.
    form.n = bx;
    form.r = cx;
    form.m = coeffs.b - Expr::var_x() * bx;
    form.q = coeffs.c - Expr::var_x() * cx;
    return form;
}

} // namespace diffusym
