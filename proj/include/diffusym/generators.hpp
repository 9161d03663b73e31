#pragma once

#include <functional>
#include <string>
#include <vector>

#include "diffusym/canonical.hpp"
#include "diffusym/classify.hpp"
#include "diffusym/invariants.hpp"

namespace diffusym {

/// Symmetry vector field tau(t) d_t + xi(x,t) d_x + phi(x,t) u d_u.
struct VectorField {
    std::string label;
    std::function<double(double)> tau;
    std::function<double(double, double)> xi, phi;
};

/// Antisymmetric expansion coefficients [v_i, v_j] = sum_k f_{ij}^k v_k.
class StructureTable {
public:
    explicit StructureTable(int n = 0) : n_(n), f_(static_cast<std::size_t>(n) * n * n, 0.0) {}

    int size() const { return n_; }
    double at(int i, int j, int k) const { return f_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
    /// Sets f_{ij}^k = v and f_{ji}^k = -v.
    void set(int i, int j, int k, double v) {
        f_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k] = v;
        f_[(static_cast<std::size_t>(j) * n_ + i) * n_ + k] = -v;
    }

    /// Max Jacobi-identity violation over all triples and components.
    double jacobi_residual() const;
    /// Max |f_{ij}^k + f_{ji}^k| (zero by construction via set()).
    double antisymmetry_residual() const;

private:
    int n_;
    std::vector<double> f_;
};

struct GeneratorBasis {
    std::vector<VectorField> fields;
    StructureTable expected;
};

/// Explicit basis for the four- or six-dimensional algebra of an autonomous
/// profile, built from (tau, rho, sigma) data solving the determining system,
/// with the expected commutator table.
GeneratorBasis basis(const InvariantProfile& prof, const SymmetryClass& cls);

struct CommutatorOptions {
    double step_scale = 1e-4;  // FD step = step_scale * (1 + |coordinate|)
};

/// Lie bracket computed by fourth-order central differences of the
/// coefficient functions.
VectorField commutator(const VectorField& v, const VectorField& w,
                       const CommutatorOptions& opt = {});

/// Box over which numeric field comparisons and expansions are sampled.
struct SampleBox {
    double x_lo, x_hi, t_lo, t_hi;
    int nx = 9, nt = 7;
};

/// Expands each pairwise commutator in the given basis by least squares over
/// sampled coefficients; returns the fitted table and the worst expansion
/// residual (relative to field scale).
struct StructureEstimate {
    StructureTable table;
    double closure_residual;
};
StructureEstimate estimate_structure(const std::vector<VectorField>& fields, const SampleBox& box,
                                     const CommutatorOptions& opt = {});

/// Max absolute deviation between two tables, scaled by 1 + max|expected|.
double table_deviation(const StructureTable& got, const StructureTable& expected);

/// Six generators of the linear-drift family (a=1, b=m+nx, c=q+rx), built by
/// solving tau''' + 16 c2 tau' + 8 c2' tau = 0 through the fundamental system
/// {psi1^2, psi1 psi2, psi2^2} of psi'' + 4 c2 psi = 0, the rho equation with
/// particular solutions, and sigma by quadrature. Anchored at t_lo.
std::vector<VectorField> timedep_basis(const LinearDriftForm& form, double t_lo, double t_hi);

/// First-order symmetry deformation u + eps (phi u - xi u_x - tau u_t), with
/// the solution derivatives taken by fourth-order differences (steps hx, ht).
std::function<double(double, double)> deform_solution(const VectorField& v,
                                                      std::function<double(double, double)> u,
                                                      double eps, double hx, double ht);

} // namespace diffusym
