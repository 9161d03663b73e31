#include "diffusym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diffusym {

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (7,15)
// ---------------------------------------------------------------------------

namespace {

// QUADPACK dqk15 nodes/weights on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double value;
    double error;
};

GkEstimate gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(center - half * kXgk[i]);
        fv[14 - i] = f(center + half * kXgk[i]);
    }
    fv[7] = f(center);
    double kronrod = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) gauss += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod))
        throw NumericError("integrate: non-finite value from integrand");
    const double diff = std::abs(kronrod - gauss);
    // QUADPACK-style sharpened error estimate
    double err = diff;
    if (diff > 0.0) err = std::min(diff, 200.0 * diff * std::sqrt(200.0 * diff));
    return {kronrod, err};
}

struct Segment {
    double lo, hi, value, error;
};

} // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (lo == hi) return 0.0;
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }

    std::vector<Segment> segs;
    {
        GkEstimate e = gk15(f, lo, hi);
        segs.push_back({lo, hi, e.value, e.error});
    }
    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max({std::abs(lo), std::abs(hi), 1.0});
    for (int iter = 0; iter < spec.max_subdivisions; ++iter) {
        double total = 0.0, err = 0.0;
        std::size_t worst = segs.size();
        double worst_err = 0.0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].error;
            if (segs[i].error > worst_err && segs[i].hi - segs[i].lo > min_width) {
                worst_err = segs[i].error;
                worst = i;
            }
        }
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) return sign * total;
        if (worst == segs.size())
            throw NumericError("integrate: interval too small to subdivide further");
        const Segment s = segs[worst];
        const double mid = 0.5 * (s.lo + s.hi);
        GkEstimate a = gk15(f, s.lo, mid);
        GkEstimate b = gk15(f, mid, s.hi);
        segs[worst] = {s.lo, mid, a.value, a.error};
        segs.push_back({mid, s.hi, b.value, b.error});
    }
    throw NumericError("integrate: no convergence within max subdivisions");
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with dense output
// ---------------------------------------------------------------------------

namespace {

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                 kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
constexpr double kD1 = -12715105075.0 / 11282082432.0, kD3 = 87487479700.0 / 32700410799.0,
                 kD4 = -10690763975.0 / 1880347072.0, kD5 = 701980252875.0 / 199316789632.0,
                 kD6 = -1453857185.0 / 822651844.0, kD7 = 69997945.0 / 29380423.0;

} // namespace

std::size_t OdeSolution::find_step(double t) const {
    // steps_ sorted by t ascending (internal time)
    std::size_t lo = 0, hi = steps_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (steps_[mid].t <= t)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

std::vector<double> OdeSolution::operator()(double t) const {
    const double tq = reversed_ ? -t : t;
    const double lo = steps_.front().t;
    const double hi = steps_.back().t + steps_.back().h;
    const double pad = 1e-9 * (1.0 + std::abs(hi - lo));
    if (tq < lo - pad || tq > hi + pad)
        throw NumericError("OdeSolution: query outside integration range");
    if (steps_.front().interp.empty()) return steps_.front().y;  // trivial (t0 == t_end)
    const double tc = std::clamp(tq, lo, hi);
    const Step& s = steps_[find_step(tc)];
    const double th = (tc - s.t) / s.h;
    std::vector<double> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        const double* r = &s.interp[5 * i];
        out[i] = r[0] + th * (r[1] + (1.0 - th) * (r[2] + th * (r[3] + (1.0 - th) * r[4])));
    }
    return out;
}

double OdeSolution::component(double t, std::size_t i) const { return (*this)(t)[i]; }

OdeSolution solve_ode(const OdeRhs& rhs, double t0, std::vector<double> y0, double t_end,
                      const OdeSpec& spec) {
    spec.validate();
    const std::size_t n = y0.size();
    OdeSolution sol;
    sol.dim_ = n;
    sol.t0_ = std::min(t0, t_end);
    sol.t1_ = std::max(t0, t_end);
    sol.reversed_ = t_end < t0;

    if (t0 == t_end) {
        OdeSolution::Step s;
        s.t = t0;
        s.h = 0.0;
        s.y = y0;
        sol.steps_.push_back(std::move(s));
        sol.y_final_ = std::move(y0);
        return sol;
    }

    const double dir = sol.reversed_ ? -1.0 : 1.0;
    // Integrate in internal time s = dir * t (always increasing).
    auto f = [&](double s, const std::vector<double>& y, std::vector<double>& dy) {
        rhs(dir * s, y, dy);
        if (sol.reversed_)
            for (double& v : dy) v = -v;
    };

    double s = dir * t0;
    const double s_end = dir * t_end;
    std::vector<double> y = std::move(y0);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    f(s, y, k1);
    for (double v : k1)
        if (!std::isfinite(v)) throw NumericError("solve_ode: non-finite rhs at initial point");

    double h = spec.initial_step > 0.0 ? spec.initial_step : (s_end - s) / 100.0;
    h = std::min(h, s_end - s);

    const std::size_t max_steps = 2000000;
    for (std::size_t step_count = 0; s < s_end; ++step_count) {
        if (step_count >= max_steps) throw NumericError("solve_ode: step limit exceeded");
        if (h < 1e-14 * std::max(1.0, std::abs(s)))
            throw NumericError("solve_ode: step-size underflow (stiffness or singularity)");
        h = std::min(h, s_end - s);

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
        f(s + h / 5.0, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        f(s + 3.0 * h / 10.0, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        f(s + 4.0 * h / 5.0, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        f(s + 8.0 * h / 9.0, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
                                  kA65 * k5[i]);
        f(s + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] +
                                  kA76 * k6[i]);
        f(s + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                                   kE6 * k6[i] + kE7 * k7[i]);
            const double sc =
                spec.abs_tol + spec.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / static_cast<double>(n));
        if (!std::isfinite(err)) throw NumericError("solve_ode: non-finite state (rhs blew up)");

        if (err <= 1.0) {
            OdeSolution::Step st;
            st.t = s;
            st.h = h;
            st.y = y;
            st.interp.resize(5 * n);
            for (std::size_t i = 0; i < n; ++i) {
                const double dy = ynew[i] - y[i];
                const double bspl = h * k1[i] - dy;
                double* r = &st.interp[5 * i];
                r[0] = y[i];
                r[1] = dy;
                r[2] = bspl;
                r[3] = dy - h * k7[i] - bspl;
                r[4] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] + kD6 * k6[i] +
                            kD7 * k7[i]);
            }
            sol.steps_.push_back(std::move(st));
            s += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        h *= fac;
    }
    sol.y_final_ = y;
    return sol;
}

// ---------------------------------------------------------------------------
// Least squares onto a function basis (Householder QR)
// ---------------------------------------------------------------------------

FitResult lstsq(std::vector<double> A, std::size_t n, std::size_t m, std::vector<double> b) {
    if (m == 0 || n < m) throw SpecError("lstsq: system must be overdetermined");
    std::vector<double> R = A;  // factor a copy; keep A for residuals
    std::vector<double> qtb = b;

    // Householder QR of R (n x m), applying reflections to qtb.
    for (std::size_t k = 0; k < m; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += R[i * m + k] * R[i * m + k];
        norm = std::sqrt(norm);
        if (norm == 0.0) throw NumericError("fit_basis: rank deficiency (zero column)");
        const double alpha = R[k * m + k] >= 0.0 ? -norm : norm;
        std::vector<double> v(n - k);
        v[0] = R[k * m + k] - alpha;
        for (std::size_t i = k + 1; i < n; ++i) v[i - k] = R[i * m + k];
        double vnorm2 = 0.0;
        for (double w : v) vnorm2 += w * w;
        if (vnorm2 > 0.0) {
            for (std::size_t j = k; j < m; ++j) {
                double dot = 0.0;
                for (std::size_t i = k; i < n; ++i) dot += v[i - k] * R[i * m + j];
                const double beta = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < n; ++i) R[i * m + j] -= beta * v[i - k];
            }
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += v[i - k] * qtb[i];
            const double beta = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < n; ++i) qtb[i] -= beta * v[i - k];
        }
        R[k * m + k] = alpha;
    }

    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
        rmax = std::max(rmax, std::abs(R[k * m + k]));
        rmin = std::min(rmin, std::abs(R[k * m + k]));
    }
    const double kappa = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
    const double condition = kappa * kappa;
    if (rmin <= rmax * 1e-13 * static_cast<double>(n))
        throw NumericError("lstsq: rank deficiency (condition estimate " +
                           std::to_string(condition) + ")");

    FitResult result;
    result.coefficients.assign(m, 0.0);
    for (std::size_t kk = m; kk-- > 0;) {
        double sum = qtb[kk];
        for (std::size_t j = kk + 1; j < m; ++j) sum -= R[kk * m + j] * result.coefficients[j];
        result.coefficients[kk] = sum / R[kk * m + kk];
    }
    result.condition = condition;

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < m; ++j) fit += A[i * m + j] * result.coefficients[j];
        const double r = b[i] - fit;
        ss += r * r;
        result.max_residual = std::max(result.max_residual, std::abs(r));
    }
    result.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return result;
}

FitResult fit_basis(const std::vector<std::pair<double, double>>& samples,
                    const std::vector<std::function<double(double)>>& basis) {
    const std::size_t n = samples.size();
    const std::size_t m = basis.size();
    if (m == 0) throw SpecError("fit_basis: empty basis");
    if (n < 2 * m) throw SpecError("fit_basis: need at least 2x more samples than basis functions");
    {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = samples[i].first;
        std::sort(xs.begin(), xs.end());
        if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
            throw SpecError("fit_basis: sample abscissae must be distinct");
    }

    std::vector<double> A(n * m);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double v = basis[j](samples[i].first);
            if (!std::isfinite(v)) throw NumericError("fit_basis: non-finite basis value");
            A[i * m + j] = v;
        }
        b[i] = samples[i].second;
        if (!std::isfinite(b[i])) throw NumericError("fit_basis: non-finite sample value");
    }
    return lstsq(std::move(A), n, m, std::move(b));
}

// ---------------------------------------------------------------------------
// Cached antiderivative with cubic Hermite interpolation
// ---------------------------------------------------------------------------

Antiderivative::Antiderivative(const std::function<double(double)>& f, double anchor, double lo,
                               double hi, int nodes, const QuadratureSpec& spec, double offset) {
    if (!(lo < hi) || nodes < 2) throw SpecError("Antiderivative: bad range or node count");
    lo_ = lo;
    hi_ = hi;
    dx_ = (hi - lo) / (nodes - 1);
    values_.resize(nodes);
    derivs_.resize(nodes);
    for (int i = 0; i < nodes; ++i) derivs_[i] = f(lo_ + i * dx_);

    // Reference node: nearest grid node to the anchor when it lies inside,
    // otherwise the closest boundary node.
    int ref = 0;
    if (anchor >= lo && anchor <= hi)
        ref = static_cast<int>(std::lround((anchor - lo) / dx_));
    else if (anchor > hi)
        ref = nodes - 1;
    ref = std::clamp(ref, 0, nodes - 1);
    values_[ref] = offset + integrate(f, anchor, lo_ + ref * dx_, spec);
    for (int i = ref + 1; i < nodes; ++i)
        values_[i] = values_[i - 1] + integrate(f, lo_ + (i - 1) * dx_, lo_ + i * dx_, spec);
    for (int i = ref - 1; i >= 0; --i)
        values_[i] = values_[i + 1] - integrate(f, lo_ + i * dx_, lo_ + (i + 1) * dx_, spec);
}

double Antiderivative::operator()(double s) const {
    if (values_.empty()) throw NumericError("Antiderivative: not initialised");
    const double pad = 1e-9 * (hi_ - lo_) + 1e-12;
    if (s < lo_ - pad || s > hi_ + pad)
        throw NumericError("Antiderivative: query outside cached range");
    const double sc = std::clamp(s, lo_, hi_);
    int k = std::min(static_cast<int>((sc - lo_) / dx_),
                     static_cast<int>(values_.size()) - 2);
    k = std::max(k, 0);
    const double u = (sc - (lo_ + k * dx_)) / dx_;
    const double v0 = values_[k], v1 = values_[k + 1];
    const double d0 = derivs_[k] * dx_, d1 = derivs_[k + 1] * dx_;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * v0 + (u3 - 2 * u2 + u) * d0 + (-2 * u3 + 3 * u2) * v1 +
           (u3 - u2) * d1;
}

} // namespace diffusym
