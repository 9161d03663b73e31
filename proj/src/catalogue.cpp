#include "diffusym/catalogue.hpp"

#include <cmath>
#include <memory>

#include "diffusym/specialfn.hpp"

namespace diffusym {

namespace {

constexpr double kPi = 3.14159265358979323846;

double get(const std::map<std::string, double>& p, const std::string& key) {
    return p.at(key);
}

void merge_overrides(std::map<std::string, double>& params,
                     const std::map<std::string, double>& overrides, const std::string& name) {
    for (const auto& [key, value] : overrides) {
        auto it = params.find(key);
        if (it == params.end())
            throw SpecError("catalogue entry '" + name + "': unknown parameter '" + key + "'");
        it->second = value;
    }
}

SpaceTimeFn const_fn(double v) {
    return [v](double, double) { return v; };
}

// --- volatility models ------------------------------------------------------

struct VolModel {
    std::function<double(double)> sigma;  // sigma(x) > 0 on the window
    std::function<double(double)> psi;    // psi' = 1/sigma
    double c0 = 0.0;
    double h = 0.0;
    Grid grid;
    std::optional<CoefficientSet> coeffs;
};

// model: 0 = constant sigma, 1 = quadratic sigma, 2 = sin*cos sigma.
VolModel build_vol_model(const std::map<std::string, double>& p, const std::string& name) {
    const int model = static_cast<int>(get(p, "model"));
    VolModel vm;
    if (model == 0) {
        const double s = get(p, "s");
        if (!(s > 0.0)) throw SpecError(name + ": s > 0 required");
        vm.sigma = [s](double) { return s; };
        vm.psi = [s](double x) { return x / s; };
        vm.c0 = 0.0;
        vm.grid = {-3.0, 3.0, 769, 0.15, 1.2, 15};
        vm.coeffs = CoefficientSet::parse("s^2/2", "0", "0", ParamEnv{{"s", s}});
    } else if (model == 1) {
        const double va = get(p, "va"), vb = get(p, "vb"), vc = get(p, "vc");
        vm.sigma = [va, vb, vc](double x) { return va + vb * x + vc * x * x; };
        if (vc == 0.0 && vb == 0.0) {
            if (!(va > 0.0)) throw SpecError(name + ": constant sigma must be positive");
            vm.psi = [va](double x) { return x / va; };
        } else if (vc == 0.0) {
            vm.psi = [va, vb](double x) { return std::log(va + vb * x) / vb; };
        } else {
            const double disc = vb * vb - 4.0 * va * vc;
            if (disc < 0.0) {
                const double rt = std::sqrt(-disc);
                vm.psi = [vb, vc, rt](double x) {
                    return 2.0 / rt * std::atan((2.0 * vc * x + vb) / rt);
                };
            } else if (disc == 0.0) {
                vm.psi = [vb, vc](double x) { return -2.0 / (2.0 * vc * x + vb); };
            } else {
                const double rt = std::sqrt(disc);
                vm.psi = [vb, vc, rt](double x) {
                    return std::log(std::abs((2.0 * vc * x + vb - rt) / (2.0 * vc * x + vb + rt))) /
                           rt;
                };
            }
        }
        vm.c0 = (4.0 * va * vc - vb * vb) / 8.0;
        vm.grid = {-2.0, 2.0, 513, 0.15, 1.2, 15};
        vm.coeffs = CoefficientSet::parse("(va+vb*x+vc*x^2)^2/2", "0", "0",
                                          ParamEnv{{"va", va}, {"vb", vb}, {"vc", vc}});
    } else if (model == 2) {
        const double nu = get(p, "nu");
        if (!(nu > 0.0)) throw SpecError(name + ": nu > 0 required");
        vm.sigma = [nu](double x) { return std::sin(nu * x) * std::cos(nu * x); };
        vm.psi = [nu](double x) { return std::log(std::tan(nu * x)) / nu; };
        vm.c0 = -nu * nu / 8.0;
        vm.h = nu * nu;
        const double xm = 0.5 * kPi / nu;
        vm.grid = {0.15 * xm, 0.85 * xm, 513, 0.2, 1.0, 15};
        vm.coeffs = CoefficientSet::parse("(sin(nu*x)*cos(nu*x))^2/2", "0",
                                          "nu^2*(sin(nu*x)*cos(nu*x))^2/2", ParamEnv{{"nu", nu}});
    } else {
        throw SpecError(name + ": model must be 0 (constant), 1 (quadratic) or 2 (sincos)");
    }
    // Positivity scan over the window.
    for (int i = 0; i <= 64; ++i) {
        const double x = vm.grid.x_lo + (vm.grid.x_hi - vm.grid.x_lo) * i / 64.0;
        if (!(vm.sigma(x) > 0.0))
            throw SpecError(name + ": sigma must stay positive on the verification window");
    }
    return vm;
}

void attach_vol_pde(CatalogueEntry& e, const VolModel& vm) {
    const auto sg = vm.sigma;
    const double h = vm.h;
    e.a = [sg](double x, double) { return 0.5 * sg(x) * sg(x); };
    e.b = const_fn(0.0);
    e.c = [sg, h](double x, double) { return 0.5 * h * sg(x) * sg(x); };
    e.grid = vm.grid;
    e.coeffs = vm.coeffs;
}

using Builder = CatalogueEntry (*)(const std::map<std::string, double>&);

// --- entries ----------------------------------------------------------------

CatalogueEntry heat_kernel(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "heat_kernel";
    e.description = "Fundamental solution of the heat equation u_t = u_xx";
    e.reference = "Gauss-Weierstrass kernel";
    e.params = {{"x0", 0.0}, {"C", 1.0 / std::sqrt(4.0 * kPi)}};
    merge_overrides(e.params, overrides, e.name);
    const double x0 = get(e.params, "x0"), C = get(e.params, "C");
    e.a = const_fn(1.0);
    e.b = const_fn(0.0);
    e.c = const_fn(0.0);
    e.coeffs = CoefficientSet::parse("1", "0", "0", {});
    e.u = [x0, C](double x, double t) {
        return C / std::sqrt(t) * std::exp(-(x - x0) * (x - x0) / (4.0 * t));
    };
    e.grid = {-4.0, 4.0, 1025, 0.1, 2.0, 17};
    return e;
}

CatalogueEntry brownian_quadratic(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "brownian_quadratic";
    e.description = "Image of u~=1 under the map of u_t = (1+k^2 x^2)^2 u_xx to the heat equation";
    e.reference = "Brownian motion with quadratic diffusion";
    e.params = {{"k", 1.0}, {"gm", 1.0}, {"dl", 1.0}, {"C", 1.0}};
    merge_overrides(e.params, overrides, e.name);
    const double k = get(e.params, "k"), gm = get(e.params, "gm"), dl = get(e.params, "dl"),
                 C = get(e.params, "C");
    if (!(k > 0.0)) throw SpecError("brownian_quadratic: k > 0 required");
    ParamEnv env{{"k", k}};
    e.coeffs = CoefficientSet::parse("(1+k^2*x^2)^2", "0", "0", env);
    e.a = [k](double x, double) { return std::pow(1.0 + k * k * x * x, 2); };
    e.b = const_fn(0.0);
    e.c = const_fn(0.0);
    e.u = [k, gm, dl, C](double x, double t) {
        const double at = std::atan(k * x);
        const double den = gm * t + dl;
        return C / std::sqrt(den) * std::sqrt(1.0 + k * k * x * x) *
               std::exp(-gm * at * at / (4.0 * k * k * den) + k * k * t);
    };
    e.grid = {-2.0, 2.0, 513, 0.1, 1.4, 15};
    e.notes = {"gm*t + dl must stay positive on the window"};
    return e;
}

CatalogueEntry ou_fundamental(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "ou_fundamental";
    e.description = "Transition density of the Ornstein-Uhlenbeck process from the origin";
    e.reference = "Ornstein-Uhlenbeck fundamental solution";
    e.params = {{"l", 1.0}, {"C", std::sqrt(1.0 / (2.0 * kPi))}};
    merge_overrides(e.params, overrides, e.name);
    const double l = get(e.params, "l");
    if (!(l > 0.0)) throw SpecError("ou_fundamental: l > 0 required");
    // Default normalisation tracks l unless C was overridden.
    const double C = overrides.count("C") ? get(e.params, "C") : std::sqrt(l / (2.0 * kPi));
    e.params["C"] = C;
    ParamEnv env{{"l", l}};
    e.coeffs = CoefficientSet::parse("1", "l*x", "l", env);
    e.a = const_fn(1.0);
    e.b = [l](double x, double) { return l * x; };
    e.c = const_fn(l);
    e.u = [l, C](double x, double t) {
        const double v = 1.0 - std::exp(-2.0 * l * t);
        return C / std::sqrt(v) * std::exp(-0.5 * l * x * x / v);
    };
    e.grid = {-6.0, 6.0, 1537, 0.05, 2.0, 17};
    return e;
}

CatalogueEntry ou_stationary(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "ou_stationary";
    e.description = "Stationary Gaussian density of the Ornstein-Uhlenbeck process";
    e.reference = "Ornstein-Uhlenbeck stationary distribution";
    e.params = {{"l", 1.0}, {"C", std::sqrt(1.0 / (2.0 * kPi))}};
    merge_overrides(e.params, overrides, e.name);
    const double l = get(e.params, "l");
    if (!(l > 0.0)) throw SpecError("ou_stationary: l > 0 required");
    const double C = overrides.count("C") ? get(e.params, "C") : std::sqrt(l / (2.0 * kPi));
    e.params["C"] = C;
    ParamEnv env{{"l", l}};
    e.coeffs = CoefficientSet::parse("1", "l*x", "l", env);
    e.a = const_fn(1.0);
    e.b = [l](double x, double) { return l * x; };
    e.c = const_fn(l);
    e.u = [l, C](double x, double) { return C * std::exp(-0.5 * l * x * x); };
    e.grid = {-6.0, 6.0, 1537, 0.05, 2.0, 17};
    return e;
}

CatalogueEntry cir_sol(const std::map<std::string, double>& overrides, bool first) {
    CatalogueEntry e;
    e.name = first ? "cir_sol1" : "cir_sol2";
    e.description = first ? "CIR solution from u~=1, drift constant m = sigma/2"
                          : "CIR solution from u~=1, drift constant m = 3 sigma/2";
    e.reference = "Cox-Ingersoll-Ross model";
    e.params = {{"sg", 1.0}, {"en", 2.0}, {"C", 1.0}};
    merge_overrides(e.params, overrides, e.name);
    const double sg = get(e.params, "sg"), en = get(e.params, "en"), C = get(e.params, "C");
    if (!(sg > 0.0) || !(en > 0.0)) throw SpecError(e.name + ": sg, en > 0 required");
    const double m = first ? 0.5 * sg : 1.5 * sg;
    ParamEnv env{{"sg", sg}, {"en", en}, {"m", m}};
    e.coeffs = CoefficientSet::parse("sg*x", "m + en*x", "0", env);
    e.a = [sg](double x, double) { return sg * x; };
    e.b = [m, en](double x, double) { return m + en * x; };
    e.c = const_fn(0.0);
    if (first) {
        e.u = [sg, en, C](double x, double t) {
            return C / std::sqrt(1.0 + std::exp(en * t)) *
                   std::exp(-en / sg * x / (1.0 + std::exp(-en * t)));
        };
        e.grid = {0.3, 4.0, 513, 0.1, 1.0, 15};
    } else {
        e.u = [sg, en, C](double x, double t) {
            return C / std::sqrt(std::exp(2.0 * en * t) + std::exp(en * t)) / std::sqrt(x) *
                   std::exp(-en / sg * x / (1.0 + std::exp(-en * t)));
        };
        e.grid = {0.5, 4.0, 513, 0.1, 1.0, 15};
    }
    return e;
}

CatalogueEntry timedep_drift(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "timedep_drift";
    e.description = "Solution of u_t = u_xx - (x/t) u_x obtained from u~=1";
    e.reference = "diffusion with time-dependent linear drift";
    e.params = {{"gm", 1.0}, {"dl", 1.0}, {"C", 1.0}};
    merge_overrides(e.params, overrides, e.name);
    const double gm = get(e.params, "gm"), dl = get(e.params, "dl"), C = get(e.params, "C");
    e.coeffs = CoefficientSet::parse("1", "-x/t", "0", {});
    e.a = const_fn(1.0);
    e.b = [](double x, double t) { return -x / t; };
    e.c = const_fn(0.0);
    e.u = [gm, dl, C](double x, double t) {
        const double den = gm * t + dl;
        return C / std::sqrt(den) * std::sqrt(t) *
               std::exp(dl * (x + t) * (x + t) / (4.0 * t * den));
    };
    e.grid = {-2.0, 2.0, 513, 0.2, 1.5, 15};
    e.notes = {"gm*t + dl must stay positive on the window"};
    return e;
}

std::map<std::string, double> vol_defaults() {
    return {{"model", 1.0}, {"s", std::sqrt(2.0)}, {"va", 1.0}, {"vb", 0.0},
            {"vc", 1.0},    {"nu", 1.0},          {"C", 1.0}};
}

CatalogueEntry vol_inv_v4(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "vol_inv_v4";
    e.description = "Kernel-type invariant solution of u_t = (sigma^2/2)(u_xx + h u)";
    e.reference = "local volatility model, projective-translation invariant solution";
    e.params = vol_defaults();
    merge_overrides(e.params, overrides, e.name);
    const VolModel vm = build_vol_model(e.params, e.name);
    attach_vol_pde(e, vm);
    const double C = get(e.params, "C"), c0 = vm.c0;
    const auto sg = vm.sigma, ps = vm.psi;
    e.u = [C, c0, sg, ps](double x, double t) {
        return C * std::sqrt(sg(x) / t) * std::exp(c0 * t - ps(x) * ps(x) / (2.0 * t));
    };
    return e;
}

CatalogueEntry vol_inv_v5(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "vol_inv_v5";
    e.description = "Translation-invariant solution C sqrt(sigma) e^{c0 t}";
    e.reference = "local volatility model, space-translation invariant solution";
    e.params = vol_defaults();
    merge_overrides(e.params, overrides, e.name);
    const VolModel vm = build_vol_model(e.params, e.name);
    attach_vol_pde(e, vm);
    const double C = get(e.params, "C"), c0 = vm.c0;
    const auto sg = vm.sigma;
    e.u = [C, c0, sg](double x, double t) { return C * std::sqrt(sg(x)) * std::exp(c0 * t); };
    return e;
}

CatalogueEntry vol_erf(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "vol_erf";
    e.description = "Error-function solution C erf(psi/sqrt(2t)) sqrt(sigma) e^{c0 t}";
    e.reference = "local volatility model, dilatation-invariant solution";
    e.params = vol_defaults();
    merge_overrides(e.params, overrides, e.name);
    const VolModel vm = build_vol_model(e.params, e.name);
    attach_vol_pde(e, vm);
    const double C = get(e.params, "C"), c0 = vm.c0;
    const auto sg = vm.sigma, ps = vm.psi;
    e.u = [C, c0, sg, ps](double x, double t) {
        return C * erf_fn(ps(x) / std::sqrt(2.0 * t)) * std::sqrt(sg(x)) * std::exp(c0 * t);
    };
    return e;
}

CatalogueEntry vol_v3(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "vol_v3";
    e.description = "Projective invariant solution (C1 t^{-1/2} + C2 t^{-3/2} psi) sqrt(sigma) "
                    "exp(c0 t - psi^2/(2t))";
    e.reference = "local volatility model, projective vector field";
    e.params = vol_defaults();
    e.params.erase("C");
    e.params["C1"] = 1.0;
    e.params["C2"] = 1.0;
    merge_overrides(e.params, overrides, e.name);
    const VolModel vm = build_vol_model(e.params, e.name);
    attach_vol_pde(e, vm);
    const double C1 = get(e.params, "C1"), C2 = get(e.params, "C2"), c0 = vm.c0;
    const auto sg = vm.sigma, ps = vm.psi;
    e.u = [C1, C2, c0, sg, ps](double x, double t) {
        return (C1 / std::sqrt(t) + C2 * ps(x) / std::pow(t, 1.5)) * std::sqrt(sg(x)) *
               std::exp(c0 * t - ps(x) * ps(x) / (2.0 * t));
    };
    return e;
}

CatalogueEntry vol_sl2_action(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "vol_sl2_action";
    e.description = "SL(2,R) action on a heat solution for sigma = vc (x - r)^2";
    e.reference = "local volatility model with double-root quadratic volatility";
    e.params = {{"vc", 1.0}, {"r", 0.0},  {"ma", 1.0},    {"mb", 0.0},
                {"mc", 1.0}, {"md", 1.0}, {"inner", 1.0}, {"C", 1.0}};
    merge_overrides(e.params, overrides, e.name);
    const double vc = get(e.params, "vc"), r = get(e.params, "r");
    const double ma = get(e.params, "ma"), mb = get(e.params, "mb"), mc = get(e.params, "mc"),
                 md = get(e.params, "md");
    const double C = get(e.params, "C");
    const int inner = static_cast<int>(get(e.params, "inner"));
    const double det = ma * md - mb * mc;
    if (!(det > 0.0)) throw SpecError("vol_sl2_action: ma*md - mb*mc > 0 required");
    if (vc == 0.0) throw SpecError("vol_sl2_action: vc must be nonzero");

    e.a = [vc, r](double x, double) {
        const double s = vc * (x - r) * (x - r);
        return 0.5 * s * s;
    };
    e.b = const_fn(0.0);
    e.c = const_fn(0.0);

    SpaceTimeFn U;
    if (inner == 0) {
        U = const_fn(1.0);
    } else if (inner == 1) {
        U = [](double xt, double tt) {
            return 1.0 / std::sqrt(4.0 * kPi * tt) * std::exp(-xt * xt / (4.0 * tt));
        };
    } else {
        throw SpecError("vol_sl2_action: inner must be 0 (constant) or 1 (heat kernel)");
    }
    e.u = [vc, r, ma, mb, mc, md, det, C, U](double x, double t) {
        const double den = mc * t + md;
        const double tt = (ma * t + mb) / den;
        const double xt = -std::sqrt(2.0 * det) / (vc * den * (x - r));
        return C / std::sqrt(den) * (x - r) *
               std::exp(-md / (2.0 * vc * vc * (x - r) * (x - r) * den)) * U(xt, tt);
    };
    e.grid = {0.5, 2.5, 513, 0.1, 1.2, 15};
    e.notes = {"window must keep x > r and mc*t + md > 0; inner=1 additionally needs t~ > 0"};
    return e;
}

CatalogueEntry vol_sigma_from_h(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "vol_sigma_from_h";
    e.description =
        "Volatility built from the fundamental system of phi'' + h phi = 0: sigma = al phi1^2 + "
        "be phi1 phi2 + ga phi2^2, with u = C sqrt(sigma) e^{c0 t}";
    e.reference = "stationary-solution construction of admissible volatilities";
    e.params = {{"h0", 1.0}, {"al", 1.0}, {"be", 0.0}, {"ga", 2.0}, {"C", 1.0}};
    merge_overrides(e.params, overrides, e.name);
    const double h0 = get(e.params, "h0"), al = get(e.params, "al"), be = get(e.params, "be"),
                 ga = get(e.params, "ga"), C = get(e.params, "C");

    e.grid = {-2.0, 2.0, 513, 0.1, 1.0, 15};
    const double pad = 0.25;
    // phi1: (1,0), phi2: (0,1) at x_ref = 0, so the Wronskian is 1 and
    // c0 = (4 al ga - be^2)/8.
    auto rhs = [h0](double x, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -h0 * y[0];
        dy[2] = y[3];
        dy[3] = -h0 * y[2];
        (void)x;
    };
    auto right = std::make_shared<OdeSolution>(
        solve_ode(rhs, 0.0, {1.0, 0.0, 0.0, 1.0}, e.grid.x_hi + pad));
    auto left = std::make_shared<OdeSolution>(
        solve_ode(rhs, 0.0, {1.0, 0.0, 0.0, 1.0}, e.grid.x_lo - pad));
    auto fundamental = [right, left](double x) {
        return x >= 0.0 ? (*right)(x) : (*left)(x);
    };
    auto sigma = [fundamental, al, be, ga](double x) {
        const auto y = fundamental(x);
        return al * y[0] * y[0] + be * y[0] * y[2] + ga * y[2] * y[2];
    };
    const double c0 = (4.0 * al * ga - be * be) / 8.0;

    for (int i = 0; i <= 128; ++i) {
        const double x = e.grid.x_lo + (e.grid.x_hi - e.grid.x_lo) * i / 128.0;
        if (!(sigma(x) > 0.0))
            throw SpecError("vol_sigma_from_h: constructed sigma not positive on the window");
    }

    e.a = [sigma](double x, double) { return 0.5 * sigma(x) * sigma(x); };
    e.b = const_fn(0.0);
    e.c = [sigma, h0](double x, double) { return 0.5 * h0 * sigma(x) * sigma(x); };
    e.u = [sigma, c0, C](double x, double t) {
        return C * std::sqrt(sigma(x)) * std::exp(c0 * t);
    };
    e.notes = {"c0 = (4 al ga - be^2)/8 for the canonical fundamental system (W = 1)"};
    return e;
}

CatalogueEntry radial_kernel(const std::map<std::string, double>& overrides, bool two_dim) {
    CatalogueEntry e;
    e.name = two_dim ? "radial_2d" : "radial_fundamental";
    e.description =
        two_dim ? "Fundamental solution of the planar PDE with inverse-square and oscillator "
                  "potential, as a function of the radius r = sqrt(x1^2 + x2^2)"
                : "Radial fundamental solution of u_t = u_rr + ((n-1)/r) u_r + (mu/r^2 + w^2 r^2) u";
    e.reference = "radial oscillator kernel with inverse-square potential";
    if (two_dim)
        e.params = {{"mu", -1.0}, {"w", 1.0}, {"rho", 1.0}, {"C", 1.0}};
    else
        e.params = {{"n", 3.0}, {"mu", -2.0}, {"w", 1.0}, {"rho", 1.0}, {"C", 1.0}};
    merge_overrides(e.params, overrides, e.name);
    const double n = two_dim ? 2.0 : get(e.params, "n");
    const double mu = get(e.params, "mu"), w = get(e.params, "w"), rho = get(e.params, "rho"),
                 C = get(e.params, "C");
    if (!(w > 0.0) || !(rho > 0.0)) throw SpecError(e.name + ": w, rho > 0 required");
    const double nu2 = 0.25 * (n - 2.0) * (n - 2.0) - mu;
    if (!(nu2 >= 0.0))
        throw SpecError(e.name + ": mu <= (n-2)^2/4 required for a real Bessel order");
    const double nu = std::sqrt(nu2);
    if (nu > 10.0) throw SpecError(e.name + ": Bessel order out of supported range");

    e.a = const_fn(1.0);
    e.b = [n](double x, double) { return (n - 1.0) / x; };
    e.c = [mu, w](double x, double) { return mu / (x * x) + w * w * x * x; };
    e.u = [n, mu, w, rho, C, nu](double r, double t) {
        const double s = std::sin(2.0 * w * t);
        const double arg = w * r * rho / s;
        return C * std::pow(r * rho, 0.5 * (2.0 - n)) / s *
               std::exp(-0.5 * w * (r * r + rho * rho) / std::tan(2.0 * w * t)) *
               bessel_i(nu, arg);
    };
    e.grid = {0.3, 2.2, 513, 0.15, 0.6, 15};
    e.notes = {"window must keep 2 w t inside (0, pi/2)"};
    return e;
}

CatalogueEntry canonical_bessel(const std::map<std::string, double>& overrides) {
    CatalogueEntry e;
    e.name = "canonical_bessel";
    e.description = "Fundamental solution of the second canonical form u_t = u_xx + (mu/x^2) u";
    e.reference = "inverse-square potential heat kernel";
    e.params = {{"mu", -2.0}, {"y", 1.0}, {"C", 1.0}};
    merge_overrides(e.params, overrides, e.name);
    const double mu = get(e.params, "mu"), y = get(e.params, "y"), C = get(e.params, "C");
    if (!(y > 0.0)) throw SpecError("canonical_bessel: y > 0 required");
    if (!(mu <= 0.25)) throw SpecError("canonical_bessel: mu <= 1/4 required for real order");
    const double nu = std::sqrt(0.25 - mu);
    if (nu > 10.0) throw SpecError("canonical_bessel: Bessel order out of supported range");
    ParamEnv env{{"mu", mu}};
    e.coeffs = CoefficientSet::parse("1", "0", "mu/x^2", env);
    e.a = const_fn(1.0);
    e.b = const_fn(0.0);
    e.c = [mu](double x, double) { return mu / (x * x); };
    e.u = [mu, y, C, nu](double x, double t) {
        return C * std::sqrt(x * y) / (2.0 * t) * std::exp(-(x * x + y * y) / (4.0 * t)) *
               bessel_i(nu, x * y / (2.0 * t));
    };
    e.grid = {0.3, 3.0, 513, 0.15, 1.0, 15};
    return e;
}

} // namespace

const std::vector<std::string>& catalogue_names() {
    static const std::vector<std::string> names = {
        "heat_kernel",   "brownian_quadratic", "ou_fundamental", "ou_stationary",
        "cir_sol1",      "cir_sol2",           "timedep_drift",  "vol_inv_v4",
        "vol_inv_v5",    "vol_erf",            "vol_v3",         "vol_sl2_action",
        "vol_sigma_from_h", "radial_fundamental", "radial_2d",   "canonical_bessel"};
    return names;
}

CatalogueEntry make_entry(const std::string& name,
                          const std::map<std::string, double>& overrides) {
    if (name == "heat_kernel") return heat_kernel(overrides);
    if (name == "brownian_quadratic") return brownian_quadratic(overrides);
    if (name == "ou_fundamental") return ou_fundamental(overrides);
    if (name == "ou_stationary") return ou_stationary(overrides);
    if (name == "cir_sol1") return cir_sol(overrides, true);
    if (name == "cir_sol2") return cir_sol(overrides, false);
    if (name == "timedep_drift") return timedep_drift(overrides);
    if (name == "vol_inv_v4") return vol_inv_v4(overrides);
    if (name == "vol_inv_v5") return vol_inv_v5(overrides);
    if (name == "vol_erf") return vol_erf(overrides);
    if (name == "vol_v3") return vol_v3(overrides);
    if (name == "vol_sl2_action") return vol_sl2_action(overrides);
    if (name == "vol_sigma_from_h") return vol_sigma_from_h(overrides);
    if (name == "radial_fundamental") return radial_kernel(overrides, false);
    if (name == "radial_2d") return radial_kernel(overrides, true);
    if (name == "canonical_bessel") return canonical_bessel(overrides);
    throw SpecError("unknown catalogue entry '" + name + "'");
}

} // namespace diffusym
