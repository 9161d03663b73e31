#include "diffusym/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace diffusym {

void Grid::validate() const {
    if (!(x_lo < x_hi) || nx < 8) throw SpecError("Grid: bad x range or node count");
    if (!(t_lo < t_hi) || nt < 2) throw SpecError("Grid: bad t range or node count");
}

namespace {

int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("DIFFUSYM_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

// Deterministic parallel map: results land in a preallocated array indexed by
// work item, then reductions run serially.
void parallel_for(int n, const std::function<void(int)>& work) {
    const int threads = std::min(thread_budget(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int tix = 0; tix < threads; ++tix) {
        pool.emplace_back([&, tix] {
            for (int i = tix; i < n; i += threads) work(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

ResidualReport residual(const SpaceTimeFn& a, const SpaceTimeFn& b, const SpaceTimeFn& c,
                        const SpaceTimeFn& u, const Grid& grid) {
    grid.validate();
    const double h = grid.h();

    std::vector<double> xs(grid.nx), ts(grid.nt);
    for (int i = 0; i < grid.nx; ++i) xs[i] = grid.x_lo + i * h;
    for (int j = 0; j < grid.nt; ++j)
        ts[j] = grid.t_lo + (grid.t_hi - grid.t_lo) * j / (grid.nt - 1);

    struct Row {
        double max_abs = 0.0, sumsq = 0.0, scale = 0.0;
        int count = 0;
        bool nan = false;
    };
    std::vector<Row> rows(grid.nt);

    parallel_for(grid.nt, [&](int j) {
        const double t = ts[j];
        const double ht = 1e-5 * (1.0 + std::abs(t));
        Row& row = rows[j];
        std::vector<double> uvals(grid.nx);
        for (int i = 0; i < grid.nx; ++i) {
            uvals[i] = u(xs[i], t);
            if (!std::isfinite(uvals[i])) row.nan = true;
            row.scale = std::max(row.scale, std::abs(uvals[i]));
        }
        if (row.nan) return;
        for (int i = 2; i < grid.nx - 2; ++i) {
            const double x = xs[i];
            const double uxx = (-uvals[i - 2] + 16.0 * uvals[i - 1] - 30.0 * uvals[i] +
                                16.0 * uvals[i + 1] - uvals[i + 2]) /
                               (12.0 * h * h);
            const double ux =
                (uvals[i - 2] - 8.0 * uvals[i - 1] + 8.0 * uvals[i + 1] - uvals[i + 2]) /
                (12.0 * h);
            const double ut = (u(x, t + ht) - u(x, t - ht)) / (2.0 * ht);
            const double r = ut - a(x, t) * uxx - b(x, t) * ux - c(x, t) * uvals[i];
            row.max_abs = std::max(row.max_abs, std::abs(r));
            row.sumsq += r * r;
            ++row.count;
        }
    });

    ResidualReport report;
    double sumsq = 0.0;
    long count = 0;
    for (const Row& row : rows) {
        if (row.nan) throw NumericError("residual: NaN in u on the grid");
        report.max_abs = std::max(report.max_abs, row.max_abs);
        report.scale = std::max(report.scale, row.scale);
        sumsq += row.sumsq;
        count += row.count;
    }
    report.rms = count > 0 ? std::sqrt(sumsq / count) : 0.0;
    report.relative = report.scale > 0.0 ? report.max_abs / report.scale
                                         : report.max_abs;
    return report;
}

namespace {

// Thomas solve of a tridiagonal system; diagonals (lower, diag, upper).
void tridiag_solve(std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw NumericError("evolve_compare: tridiagonal solve failed");
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) throw NumericError("evolve_compare: tridiagonal solve failed");
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

double trapezoid_mass(const std::vector<double>& u, double h) {
    double s = 0.5 * (u.front() + u.back());
    for (std::size_t i = 1; i + 1 < u.size(); ++i) s += u[i];
    return s * h;
}

} // namespace

EvolveResult evolve_compare(const SpaceTimeFn& a, const SpaceTimeFn& b, const SpaceTimeFn& c,
                            const SpaceTimeFn& reference, const Grid& grid, double tau_step) {
    grid.validate();
    const int n = grid.nx;
    const double h = grid.h();
    double tau = tau_step > 0.0 ? tau_step : 0.5 * h;
    const int nsteps = std::max(1, static_cast<int>(std::ceil((grid.t_hi - grid.t_lo) / tau)));
    tau = (grid.t_hi - grid.t_lo) / nsteps;

    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = grid.x_lo + i * h;

    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = reference(xs[i], grid.t_lo);

    EvolveResult result;
    result.mass_initial = trapezoid_mass(u, h);
    result.times.reserve(nsteps + 1);
    result.l2_error.reserve(nsteps + 1);
    result.times.push_back(grid.t_lo);
    result.l2_error.push_back(0.0);

    const double scale0 = *std::max_element(u.begin(), u.end(),
                                            [](double p, double q) { return std::abs(p) < std::abs(q); });

    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    for (int step = 0; step < nsteps; ++step) {
        const double t0 = grid.t_lo + step * tau;
        const double t1 = t0 + tau;
        const double tm = t0 + 0.5 * tau;

        // (I - tau/2 L) u^{n+1} = (I + tau/2 L) u^n, with L evaluated at t_mid.
        rhs[0] = reference(xs[0], t1);
        rhs[n - 1] = reference(xs[n - 1], t1);
        lower[0] = upper[0] = 0.0;
        diag[0] = 1.0;
        lower[n - 1] = upper[n - 1] = 0.0;
        diag[n - 1] = 1.0;
        for (int i = 1; i < n - 1; ++i) {
            const double ai = a(xs[i], tm), bi = b(xs[i], tm), ci = c(xs[i], tm);
            const double lo = ai / (h * h) - bi / (2.0 * h);
            const double di = -2.0 * ai / (h * h) + ci;
            const double up = ai / (h * h) + bi / (2.0 * h);
            lower[i] = -0.5 * tau * lo;
            diag[i] = 1.0 - 0.5 * tau * di;
            upper[i] = -0.5 * tau * up;
            rhs[i] = u[i] + 0.5 * tau * (lo * u[i - 1] + di * u[i] + up * u[i + 1]);
        }
        tridiag_solve(lower, diag, upper, rhs);
        u = rhs;

        double err2 = 0.0;
        double umax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = u[i] - reference(xs[i], t1);
            err2 += d * d;
            umax = std::max(umax, std::abs(u[i]));
        }
        const double l2 = std::sqrt(h * err2);
        if (!std::isfinite(l2) || umax > 10.0 * std::abs(scale0) + 10.0)
            throw NumericError("evolve_compare: instability detected (error growth)");
        result.times.push_back(t1);
        result.l2_error.push_back(l2);
        result.max_l2 = std::max(result.max_l2, l2);
        result.mass_drift =
            std::max(result.mass_drift, std::abs(trapezoid_mass(u, h) - result.mass_initial));
    }
    result.final_l2 = result.l2_error.back();
    return result;
}

double mass(const SpaceTimeFn& u, double t, double lo, double hi,
            const std::function<double(double)>& weight, const QuadratureSpec& spec) {
    if (weight)
        return integrate([&](double x) { return u(x, t) * weight(x); }, lo, hi, spec);
    return integrate([&](double x) { return u(x, t); }, lo, hi, spec);
}

} // namespace diffusym
