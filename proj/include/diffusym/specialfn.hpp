#pragma once

namespace diffusym {

/// Error function (IEEE double, delegates to the C library).
double erf_fn(double x);

/// Bessel function of the first kind, real order. Supported range:
/// 0 <= nu <= 10, 0 <= x <= 50; relative accuracy ~1e-10 (to scale near zeros).
double bessel_j(double nu, double x);

/// Modified Bessel function of the first kind, same supported range.
double bessel_i(double nu, double x);

} // namespace diffusym
