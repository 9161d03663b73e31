#include "diffusym/generators.hpp"

#include <cmath>
#include <memory>

namespace diffusym {

double StructureTable::jacobi_residual() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                for (int l = 0; l < n_; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n_; ++m)
                        s += at(i, j, m) * at(m, k, l) + at(j, k, m) * at(m, i, l) +
                             at(k, i, m) * at(m, j, l);
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

double StructureTable::antisymmetry_residual() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k) worst = std::max(worst, std::abs(at(i, j, k) + at(j, i, k)));
    return worst;
}

namespace {

// Closed-form (tau, rho, sigma) data for one basis element, with the
// derivatives the xi/phi assembly needs.
struct Trs {
    std::function<double(double)> tau, taud, taudd, rho, rhod, sigma;
};

Trs zero_trs() {
    auto z = [](double) { return 0.0; };
    return {z, z, z, z, z, z};
}

VectorField assemble(const std::string& label, const Trs& d,
                     std::function<double(double)> sqrt_a, std::function<double(double)> I,
                     std::function<double(double)> J) {
    VectorField v;
    v.label = label;
    v.tau = d.tau;
    v.xi = [d, sqrt_a, I](double x, double t) {
        return sqrt_a(x) * (0.5 * d.taud(t) * I(x) + d.rho(t));
    };
    v.phi = [d, I, J](double x, double t) {
        const double Iv = I(x), Jv = J(x);
        return -0.125 * d.taudd(t) * Iv * Iv - 0.5 * d.rhod(t) * Iv +
               0.25 * d.taud(t) * Iv * Jv + 0.5 * d.rho(t) * Jv + d.sigma(t);
    };
    return v;
}

// tau = 1 (time translation), sigma = 0.
Trs trs_v1() {
    Trs d = zero_trs();
    d.tau = [](double) { return 1.0; };
    return d;
}

// center u d_u
Trs trs_center() {
    Trs d = zero_trs();
    d.sigma = [](double) { return 1.0; };
    return d;
}

} // namespace

GeneratorBasis basis(const InvariantProfile& prof, const SymmetryClass& cls) {
    if (cls.variant == SymmetryVariant::NoExtra)
        throw SpecError("basis: no non-trivial symmetry class");

    const double c0 = cls.c0, c1 = cls.c1, c2 = cls.c2;
    const double iota = cls.variant == SymmetryVariant::FourDim ? cls.iota : 0.0;
    const InvariantProfile p = prof;
    std::function<double(double)> sqrt_a = [p](double x) { return p.sqrt_a(x); };
    std::function<double(double)> I = [p, iota](double x) { return p.I(x) + iota; };
    std::function<double(double)> J = [p](double x) { return p.J(x); };

    GeneratorBasis out;
    const bool six = cls.variant == SymmetryVariant::SixDim;
    const int n = six ? 6 : 4;
    out.expected = StructureTable(n);
    StructureTable& T = out.expected;
    std::vector<Trs> data;

    if (c2 == 0.0) {
        // tau in {1, t, t^2}; rho in {t, 1} for the six-dim case.
        Trs v2 = zero_trs();
        v2.tau = [](double t) { return t; };
        v2.taud = [](double) { return 1.0; };
        if (six) {
            v2.rho = [c1](double t) { return -1.5 * c1 * t * t; };
            v2.rhod = [c1](double t) { return -3.0 * c1 * t; };
        }
        v2.sigma = [c0, c1, six](double t) {
            return c0 * t - (six ? 0.5 * c1 * c1 * t * t * t : 0.0);
        };
        Trs v3 = zero_trs();
        v3.tau = [](double t) { return t * t; };
        v3.taud = [](double t) { return 2.0 * t; };
        v3.taudd = [](double) { return 2.0; };
        if (six) {
            v3.rho = [c1](double t) { return -c1 * t * t * t; };
            v3.rhod = [c1](double t) { return -3.0 * c1 * t * t; };
        }
        v3.sigma = [c0, c1, six](double t) {
            return -0.5 * t + c0 * t * t - (six ? 0.25 * c1 * c1 * t * t * t * t : 0.0);
        };
        data = {trs_v1(), v2, v3};
        if (six) {
            Trs v4 = zero_trs();
            v4.rho = [](double t) { return t; };
            v4.rhod = [](double) { return 1.0; };
            v4.sigma = [c1](double t) { return 0.5 * c1 * t * t; };
            Trs v5 = zero_trs();
            v5.rho = [](double) { return 1.0; };
            v5.sigma = [c1](double t) { return c1 * t; };
            data.push_back(v4);
            data.push_back(v5);
        }
        data.push_back(trs_center());

        if (six) {
            // Eq-comm table, c2 = 0 six-dim case.
            T.set(0, 1, 0, 1.0);
            T.set(0, 1, 3, -3.0 * c1);
            T.set(0, 1, 5, c0);
            T.set(0, 2, 1, 2.0);
            T.set(0, 2, 5, -0.5);
            T.set(0, 3, 4, 1.0);
            T.set(0, 4, 5, c1);
            T.set(1, 2, 2, 1.0);
            T.set(1, 3, 3, 0.5);
            T.set(1, 4, 4, -0.5);
            T.set(2, 4, 3, -1.0);
            T.set(3, 4, 5, 0.5);
        } else {
            T.set(0, 1, 0, 1.0);
            T.set(0, 1, 3, c0);
            T.set(0, 2, 1, 2.0);
            T.set(0, 2, 3, -0.5);
            T.set(1, 2, 2, 1.0);
        }
    } else if (c2 < 0.0) {
        const double k = std::sqrt(-c2);
        auto e4 = [k](double t) { return std::exp(4.0 * k * t); };
        auto em4 = [k](double t) { return std::exp(-4.0 * k * t); };
        Trs v2 = zero_trs();
        v2.tau = e4;
        v2.taud = [k, e4](double t) { return 4.0 * k * e4(t); };
        v2.taudd = [k, e4](double t) { return 16.0 * k * k * e4(t); };
        Trs v3 = zero_trs();
        v3.tau = em4;
        v3.taud = [k, em4](double t) { return -4.0 * k * em4(t); };
        v3.taudd = [k, em4](double t) { return 16.0 * k * k * em4(t); };
        if (six) {
            v2.rho = [c1, k, e4](double t) { return -(c1 / k) * e4(t); };
            v2.rhod = [c1, k, e4](double t) { return -4.0 * c1 * e4(t); };
            v3.rho = [c1, k, em4](double t) { return (c1 / k) * em4(t); };
            v3.rhod = [c1, k, em4](double t) { return -4.0 * c1 * em4(t); };
        }
        const double cc = six ? c1 * c1 / (4.0 * c2) : 0.0;  // -c1^2/(4 k^2)
        v2.sigma = [c0, k, cc, e4](double t) { return (c0 - k + cc) * e4(t); };
        v3.sigma = [c0, k, cc, em4](double t) { return (c0 + k + cc) * em4(t); };
        data = {trs_v1(), v2, v3};
        if (six) {
            auto e2 = [k](double t) { return std::exp(2.0 * k * t); };
            auto em2 = [k](double t) { return std::exp(-2.0 * k * t); };
            Trs v4 = zero_trs();
            v4.rho = e2;
            v4.rhod = [k, e2](double t) { return 2.0 * k * e2(t); };
            v4.sigma = [c1, k, e2](double t) { return c1 / (2.0 * k) * e2(t); };
            Trs v5 = zero_trs();
            v5.rho = em2;
            v5.rhod = [k, em2](double t) { return -2.0 * k * em2(t); };
            v5.sigma = [c1, k, em2](double t) { return -c1 / (2.0 * k) * em2(t); };
            data.push_back(v4);
            data.push_back(v5);
        }
        data.push_back(trs_center());

        if (six) {
            const double r = 4.0 * c0 + (c1 / k) * (c1 / k);
            T.set(0, 1, 1, 4.0 * k);
            T.set(0, 2, 2, -4.0 * k);
            T.set(0, 3, 3, 2.0 * k);
            T.set(0, 4, 4, -2.0 * k);
            T.set(1, 2, 0, -8.0 * k);
            T.set(1, 2, 5, -2.0 * k * r);
            T.set(1, 4, 3, -4.0 * k);
            T.set(2, 3, 4, 4.0 * k);
            T.set(3, 4, 5, 2.0 * k);
        } else {
            T.set(0, 1, 1, 4.0 * k);
            T.set(0, 2, 2, -4.0 * k);
            T.set(1, 2, 0, -8.0 * k);
            T.set(1, 2, 3, -8.0 * c0 * k);
        }
    } else {
        const double k = std::sqrt(c2);
        auto c4 = [k](double t) { return std::cos(4.0 * k * t); };
        auto s4 = [k](double t) { return std::sin(4.0 * k * t); };
        Trs v2 = zero_trs();
        v2.tau = c4;
        v2.taud = [k, s4](double t) { return -4.0 * k * s4(t); };
        v2.taudd = [k, c4](double t) { return -16.0 * k * k * c4(t); };
        Trs v3 = zero_trs();
        v3.tau = s4;
        v3.taud = [k, c4](double t) { return 4.0 * k * c4(t); };
        v3.taudd = [k, s4](double t) { return -16.0 * k * k * s4(t); };
        if (six) {
            v2.rho = [c1, k, s4](double t) { return -(c1 / k) * s4(t); };
            v2.rhod = [c1, k, c4](double t) { return -4.0 * c1 * c4(t); };
            v3.rho = [c1, k, c4](double t) { return (c1 / k) * c4(t); };
            v3.rhod = [c1, k, s4](double t) { return -4.0 * c1 * s4(t); };
        }
        const double cc = six ? c1 * c1 / (4.0 * c2) : 0.0;
        v2.sigma = [c0, k, cc, c4, s4](double t) { return k * s4(t) + (c0 + cc) * c4(t); };
        v3.sigma = [c0, k, cc, c4, s4](double t) { return -k * c4(t) + (c0 + cc) * s4(t); };
        data = {trs_v1(), v2, v3};
        if (six) {
            auto c2f = [k](double t) { return std::cos(2.0 * k * t); };
            auto s2f = [k](double t) { return std::sin(2.0 * k * t); };
            Trs v4 = zero_trs();
            v4.rho = c2f;
            v4.rhod = [k, s2f](double t) { return -2.0 * k * s2f(t); };
            v4.sigma = [c1, k, s2f](double t) { return c1 / (2.0 * k) * s2f(t); };
            Trs v5 = zero_trs();
            v5.rho = s2f;
            v5.rhod = [k, c2f](double t) { return 2.0 * k * c2f(t); };
            v5.sigma = [c1, k, c2f](double t) { return -c1 / (2.0 * k) * c2f(t); };
            data.push_back(v4);
            data.push_back(v5);
        }
        data.push_back(trs_center());

        if (six) {
            const double s = 4.0 * c0 - (c1 / k) * (c1 / k);
            T.set(0, 1, 2, -4.0 * k);
            T.set(0, 2, 1, 4.0 * k);
            T.set(0, 3, 4, -2.0 * k);
            T.set(0, 4, 3, 2.0 * k);
            T.set(1, 2, 0, 4.0 * k);
            T.set(1, 2, 5, k * s);
            T.set(1, 3, 4, 2.0 * k);
            T.set(1, 4, 3, 2.0 * k);
            T.set(2, 3, 3, -2.0 * k);
            T.set(2, 4, 4, 2.0 * k);
            T.set(3, 4, 5, -k);
        } else {
            T.set(0, 1, 2, -4.0 * k);
            T.set(0, 2, 1, 4.0 * k);
            T.set(1, 2, 0, 4.0 * k);
            T.set(1, 2, 3, 4.0 * k * c0);
        }
    }

    out.fields.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out.fields.push_back(
            assemble("v" + std::to_string(i + 1), data[i], sqrt_a, I, J));
    return out;
}

// ---------------------------------------------------------------------------
// Numeric Lie bracket
// ---------------------------------------------------------------------------

namespace {

double d_dt(const std::function<double(double)>& f, double t, double scale) {
    const double h = scale * (1.0 + std::abs(t));
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
}

double d_dx2(const std::function<double(double, double)>& f, double x, double t, double scale,
             bool in_x) {
    const double h = scale * (1.0 + std::abs(in_x ? x : t));
    if (in_x)
        return (-f(x + 2 * h, t) + 8 * f(x + h, t) - 8 * f(x - h, t) + f(x - 2 * h, t)) /
               (12.0 * h);
    return (-f(x, t + 2 * h) + 8 * f(x, t + h) - 8 * f(x, t - h) + f(x, t - 2 * h)) / (12.0 * h);
}

} // namespace

VectorField commutator(const VectorField& v, const VectorField& w, const CommutatorOptions& opt) {
    const double s = opt.step_scale;
    VectorField out;
    out.label = "[" + v.label + "," + w.label + "]";
    const VectorField a = v, b = w;
    out.tau = [a, b, s](double t) {
        return a.tau(t) * d_dt(b.tau, t, s) - b.tau(t) * d_dt(a.tau, t, s);
    };
    out.xi = [a, b, s](double x, double t) {
        return a.tau(t) * d_dx2(b.xi, x, t, s, false) + a.xi(x, t) * d_dx2(b.xi, x, t, s, true) -
               b.tau(t) * d_dx2(a.xi, x, t, s, false) - b.xi(x, t) * d_dx2(a.xi, x, t, s, true);
    };
    out.phi = [a, b, s](double x, double t) {
        return a.tau(t) * d_dx2(b.phi, x, t, s, false) + a.xi(x, t) * d_dx2(b.phi, x, t, s, true) -
               b.tau(t) * d_dx2(a.phi, x, t, s, false) - b.xi(x, t) * d_dx2(a.phi, x, t, s, true);
    };
    return out;
}

StructureEstimate estimate_structure(const std::vector<VectorField>& fields, const SampleBox& box,
                                     const CommutatorOptions& opt) {
    const int n = static_cast<int>(fields.size());
    StructureEstimate est{StructureTable(n), 0.0};

    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < box.nx; ++i)
        for (int j = 0; j < box.nt; ++j)
            pts.emplace_back(box.x_lo + (box.x_hi - box.x_lo) * i / (box.nx - 1),
                             box.t_lo + (box.t_hi - box.t_lo) * j / (box.nt - 1));

    const std::size_t rows = 3 * pts.size();
    // Sample the basis once.
    std::vector<double> A(rows * n);
    double field_scale = 0.0;
    for (int k = 0; k < n; ++k) {
        std::size_t r = 0;
        for (const auto& [x, t] : pts) {
            const double tv = fields[k].tau(t);
            const double xv = fields[k].xi(x, t);
            const double pv = fields[k].phi(x, t);
            A[(r++) * n + k] = tv;
            A[(r++) * n + k] = xv;
            A[(r++) * n + k] = pv;
            field_scale = std::max({field_scale, std::abs(tv), std::abs(xv), std::abs(pv)});
        }
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            VectorField c = commutator(fields[i], fields[j], opt);
            std::vector<double> bvec;
            bvec.reserve(rows);
            for (const auto& [x, t] : pts) {
                bvec.push_back(c.tau(t));
                bvec.push_back(c.xi(x, t));
                bvec.push_back(c.phi(x, t));
            }
            FitResult fit = lstsq(A, rows, n, bvec);
            for (int k = 0; k < n; ++k) est.table.set(i, j, k, fit.coefficients[k]);
            est.closure_residual =
                std::max(est.closure_residual, fit.max_residual / (1.0 + field_scale));
        }
    }
    return est;
}

double table_deviation(const StructureTable& got, const StructureTable& expected) {
    double emax = 0.0;
    for (int i = 0; i < expected.size(); ++i)
        for (int j = 0; j < expected.size(); ++j)
            for (int k = 0; k < expected.size(); ++k)
                emax = std::max(emax, std::abs(expected.at(i, j, k)));
    double dev = 0.0;
    for (int i = 0; i < expected.size(); ++i)
        for (int j = 0; j < expected.size(); ++j)
            for (int k = 0; k < expected.size(); ++k)
                dev = std::max(dev, std::abs(got.at(i, j, k) - expected.at(i, j, k)));
    return dev / (1.0 + emax);
}

// ---------------------------------------------------------------------------
// Linear-drift family generators
// ---------------------------------------------------------------------------

std::vector<VectorField> timedep_basis(const LinearDriftForm& form, double t_lo, double t_hi) {
    if (!(t_lo < t_hi)) throw SpecError("timedep_basis: empty time window");
    const ParamEnv env = form.env;
    const ExprPtr m = form.m, n_e = form.n, q = form.q, r = form.r;
    const ExprPtr mdot = differentiate(m, 't');
    const ExprPtr ndot = differentiate(n_e, 't');
    // c2 = (n' - n^2)/4, c1 = (m' - m n + 2 r)/2, c0 = q - n/2 - m^2/4 as trees
    const ExprPtr two = Expr::number(2.0);
    const ExprPtr four = Expr::number(4.0);
    const ExprPtr c2e = (ndot - n_e * n_e) / four;
    const ExprPtr c1e = (mdot - m * n_e + two * r) / two;
    const ExprPtr c0e = q - n_e / two - m * m / four;
    const ExprPtr c1dot = differentiate(c1e, 't');

    auto c2f = [c2e, env](double t) { return c2e->eval(0.0, t, env); };
    auto c1f = [c1e, env](double t) { return c1e->eval(0.0, t, env); };
    auto c0f = [c0e, env](double t) { return c0e->eval(0.0, t, env); };
    auto c1df = [c1dot, env](double t) { return c1dot->eval(0.0, t, env); };

    // Combined linear system:
    //   y[0..3]  psi1, psi1', psi2, psi2'      (psi'' + 4 c2 psi = 0)
    //   y[4..9]  rho_i, rho_i' for tau_i = psi1^2, psi1 psi2, psi2^2
    //            (rho'' + 4 c2 rho + 3 c1 tau' + 2 c1' tau = 0, zero initial data)
    //   y[10..14] sigma integrals: int c1 rho_i dt (i=1..3), int c1 psi1, int c1 psi2
    auto rhs = [c2f, c1f, c1df](double t, const std::vector<double>& y, std::vector<double>& dy) {
        const double c2v = c2f(t), c1v = c1f(t), c1d = c1df(t);
        const double p1 = y[0], p1d = y[1], p2 = y[2], p2d = y[3];
        dy[0] = p1d;
        dy[1] = -4.0 * c2v * p1;
        dy[2] = p2d;
        dy[3] = -4.0 * c2v * p2;
        const double tau[3] = {p1 * p1, p1 * p2, p2 * p2};
        const double taud[3] = {2.0 * p1 * p1d, p1d * p2 + p1 * p2d, 2.0 * p2 * p2d};
        for (int i = 0; i < 3; ++i) {
            dy[4 + 2 * i] = y[5 + 2 * i];
            dy[5 + 2 * i] = -4.0 * c2v * y[4 + 2 * i] - 3.0 * c1v * taud[i] - 2.0 * c1d * tau[i];
        }
        dy[10] = c1v * y[4];
        dy[11] = c1v * y[6];
        dy[12] = c1v * y[8];
        dy[13] = c1v * p1;
        dy[14] = c1v * p2;
    };
    std::vector<double> y0(15, 0.0);
    y0[0] = 1.0;  // psi1(t_lo) = 1, psi1'(t_lo) = 0
    y0[3] = 1.0;  // psi2(t_lo) = 0, psi2'(t_lo) = 1
    auto sol = std::make_shared<OdeSolution>(solve_ode(rhs, t_lo, y0, t_hi));

    // phi = -tau''/8 x^2 - rho'/2 x - (tau'/4 x + rho/2) b - (tau/2) Bt + sigma,
    // Bt(x,t) = int_0^x b_t dx' = m'(t) x + n'(t) x^2 / 2.
    auto b_of = [m, n_e, env](double x, double t) {
        return m->eval(0.0, t, env) + n_e->eval(0.0, t, env) * x;
    };
    auto bt_int = [mdot, ndot, env](double x, double t) {
        return mdot->eval(0.0, t, env) * x + 0.5 * ndot->eval(0.0, t, env) * x * x;
    };

    struct TdData {
        int tau_idx = -1;   // 0..2 selects tau_i (and its particular rho), -1 none
        int rho_idx = -1;   // 0: psi1, 1: psi2 (homogeneous rho), -1 none
        bool center = false;
    };
    auto make_field = [sol, c2f, c1f, c0f, b_of, bt_int](const std::string& label, TdData sel) {
        VectorField v;
        v.label = label;
        auto state = [sol](double t) { return (*sol)(t); };
        auto parts = [sel, state, c2f, c0f](double t) {
            const std::vector<double> y = state(t);
            double tau = 0, taud = 0, taudd = 0, rho = 0, rhod = 0, sigma = 0;
            if (sel.tau_idx >= 0) {
                const double p1 = y[0], p1d = y[1], p2 = y[2], p2d = y[3];
                const double c2v = c2f(t);
                switch (sel.tau_idx) {
                    case 0:
                        tau = p1 * p1;
                        taud = 2 * p1 * p1d;
                        taudd = 2 * p1d * p1d - 8 * c2v * p1 * p1;
                        break;
                    case 1:
                        tau = p1 * p2;
                        taud = p1d * p2 + p1 * p2d;
                        taudd = 2 * p1d * p2d - 8 * c2v * p1 * p2;
                        break;
                    default:
                        tau = p2 * p2;
                        taud = 2 * p2 * p2d;
                        taudd = 2 * p2d * p2d - 8 * c2v * p2 * p2;
                }
                rho = y[4 + 2 * sel.tau_idx];
                rhod = y[5 + 2 * sel.tau_idx];
                sigma = c0f(t) * tau + y[10 + sel.tau_idx] - 0.25 * taud;
            } else if (sel.rho_idx >= 0) {
                rho = y[sel.rho_idx == 0 ? 0 : 2];
                rhod = y[sel.rho_idx == 0 ? 1 : 3];
                sigma = y[13 + sel.rho_idx];
            } else {
                sigma = 1.0;
            }
            struct P {
                double tau, taud, taudd, rho, rhod, sigma;
            };
            return P{tau, taud, taudd, rho, rhod, sigma};
        };
        v.tau = [parts](double t) { return parts(t).tau; };
        v.xi = [parts](double x, double t) {
            const auto p = parts(t);
            return 0.5 * p.taud * x + p.rho;
        };
        v.phi = [parts, b_of, bt_int](double x, double t) {
            const auto p = parts(t);
            return -0.125 * p.taudd * x * x - 0.5 * p.rhod * x -
                   (0.25 * p.taud * x + 0.5 * p.rho) * b_of(x, t) - 0.5 * p.tau * bt_int(x, t) +
                   p.sigma;
        };
        return v;
    };

    std::vector<VectorField> out;
    out.push_back(make_field("v1", {0, -1, false}));
    out.push_back(make_field("v2", {1, -1, false}));
    out.push_back(make_field("v3", {2, -1, false}));
    out.push_back(make_field("v4", {-1, 0, false}));
    out.push_back(make_field("v5", {-1, 1, false}));
    out.push_back(make_field("v6", {-1, -1, true}));
    return out;
}

std::function<double(double, double)> deform_solution(const VectorField& v,
                                                      std::function<double(double, double)> u,
                                                      double eps, double hx, double ht) {
    const VectorField f = v;
    return [f, u, eps, hx, ht](double x, double t) {
        const double ux =
            (-u(x + 2 * hx, t) + 8 * u(x + hx, t) - 8 * u(x - hx, t) + u(x - 2 * hx, t)) /
            (12.0 * hx);
        const double ut =
            (-u(x, t + 2 * ht) + 8 * u(x, t + ht) - 8 * u(x, t - ht) + u(x, t - 2 * ht)) /
            (12.0 * ht);
        const double uv = u(x, t);
        return uv + eps * (f.phi(x, t) * uv - f.xi(x, t) * ux - f.tau(t) * ut);
    };
}

} // namespace diffusym
