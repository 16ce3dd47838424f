#pragma once

#include "pharm/field.hpp"

#include <optional>
#include <span>
#include <vector>

namespace pharm {

struct EnergyValue {
  double total = 0.0;
  std::vector<double> per_element;  // aligned with the region passed in
};

// Omega_ij = u^i grad u^j - u^j grad u^i per simplex, u taken at the
// barycenter, stored for pairs i < j.
struct OmegaField {
  int components = 0;
  int dim = 0;
  std::vector<double> data;  // element-major, pair-major, dim-vector

  int pairs() const { return components * (components - 1) / 2; }
  int pair_index(int i, int j) const;  // requires i < j
  // antisymmetric accessor: omega(e, j, i) = -omega(e, i, j)
  SpaceVec omega(int e, int i, int j) const;
};

/// Integral of |grad u|^p (Frobenius norm) over the region, elementwise.
EnergyValue p_energy(const VectorField& u, double p);
EnergyValue p_energy(const VectorField& u, double p, std::span<const int> region);
double p_energy_total(const VectorField& u, double p);
double p_energy_total(const VectorField& u, double p, std::span<const int> region);

/// Integral of (eps + |grad u|^2)^(p/2); reduces to p_energy at eps = 0.
EnergyValue regularized_energy(const VectorField& u, double p, double eps);
double regularized_energy_total(const VectorField& u, double p, double eps);

/// E_{eps_u}(u) - E_{eps_w}(w) in full relative precision. Subtracting two
/// assembled totals cancels catastrophically once the fields are close; this
/// forms each element's difference from the gradient of u - w instead, so
/// line searches can certify decreases far below one ulp of the energy.
/// Requires eps_u >= eps_w.
double regularized_energy_decrease(const VectorField& u, double eps_u, const VectorField& w,
                                   double eps_w, double p);

/// Weak-form residual r_a = int (eps + |grad u|^2)^((p-2)/2) grad u . grad phi_a
/// per node and component; this is the gradient of regularized_energy / p in
/// the nodal values. Requires eps > 0 unless p = 2.
VectorField first_variation(const VectorField& u, double p, double eps);

/// Same assembly with no ellipticity guard (used for residuals at eps = 0).
VectorField assemble_residual(const VectorField& u, double p, double eps);

/// Stress-energy pairing int |grad u|^(p-2) (|grad u|^2 d_ij - p di u . dj u) di xi^j.
/// xi is a nodal vector field in R^n; it must vanish at Dirichlet nodes and be
/// tangent to the boundary at FreeSphere nodes.
double inner_variation_residual(const VectorField& u, double p, const VectorField& xi);

/// Conservation pairing int |grad u|^(p-2) Omega_ij . grad phi for a scalar
/// nodal field phi (which need not vanish on the boundary). Indices 0-based,
/// i < j < N.
double conservation_residual(const VectorField& u, double p, std::span<const double> phi,
                             int i, int j);

OmegaField omega_field(const VectorField& u);

/// Orthogonal projection of w onto the tangent space of the sphere at q/|q|.
Vec tangent_project(const Vec& q, const Vec& w);

}  // namespace pharm
