#pragma once

#include <functional>
#include <optional>

#include "diffusym/invariants.hpp"

namespace diffusym {

enum class SymmetryVariant { SixDim, FourDim, NoExtra };

/// Classification verdict. For SixDim, K = c2 I^2 + c1 I + c0 in the profile's
/// own I coordinate. For FourDim, K = mu/(I+iota)^2 + c2 (I+iota)^2 + c0 with
/// the fitted offset iota recovering the natural origin of I (and c1 = 0).
struct SymmetryClass {
    SymmetryVariant variant = SymmetryVariant::NoExtra;
    double c2 = 0.0, c1 = 0.0, c0 = 0.0;
    double mu = 0.0;
    double iota = 0.0;
    double rms_residual = 0.0;   // relative, scaled by max|K| + 1
    double max_residual = 0.0;
    double tolerance = 0.0;
};

struct ClassifyOptions {
    double tol = 1e-7;      // relative rms threshold (scaled by max|K| + 1)
    double mu_tol = 1e-8;   // |mu| below this degenerates FourDim to SixDim/NoExtra
};

/// Decides six- / four-dimensional / trivial symmetry from sampled (I, K):
/// quadratic fit first (SixDim preferred over the mu -> 0 degeneracy), then
/// {1/(I+iota)^2, 1, (I+iota)^2} with a coarse two-sided offset search plus
/// golden-section polish.
SymmetryClass classify(const InvariantProfile& prof, const ClassifyOptions& opt = {});

/// Time-dependent classifying functions for the linear-drift family
/// a = 1, b = m(t) + n(t) x, c = q(t) + r(t) x:
///   c2 = (n' - n^2)/4,  c1 = (m' - m n + 2 r)/2,  c0 = q - n/2 - m^2/4.
struct TimeDepClassifiers {
    std::function<double(double)> c2, c1, c0;
};

TimeDepClassifiers timedep_classifiers(const ExprPtr& m, const ExprPtr& n, const ExprPtr& q,
                                       const ExprPtr& r, const ParamEnv& env);

/// The linear-drift family of coefficients, extracted from a general set.
struct LinearDriftForm {
    ExprPtr m, n, q, r;
    ParamEnv env;
};

/// Checks (by symbolic differentiation and sampling) that coeffs are of the
/// form a = 1, b = m(t) + n(t) x, c = q(t) + r(t) x and extracts the pieces.
std::optional<LinearDriftForm> extract_linear_drift(const CoefficientSet& coeffs,
                                                    const WorkingDomain& dom);

} // namespace diffusym
