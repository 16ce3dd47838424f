#pragma once

#include "pharm/field.hpp"

#include <memory>
#include <vector>

namespace pharm {

/// Sphere inversion q -> q / |q|^2; an involution fixing the unit sphere.
Vec inversion(const Vec& q);

/// Jacobian of the inversion: (I - 2 q q^T / |q|^2) / |q|^2. Symmetric, with
/// eigenvalue -1/|q|^2 along q and +1/|q|^2 on the orthogonal complement.
Mat inversion_jacobian(const Vec& q);

// The half-domain mesh mirrored across {x_n = 0}; nodes on the plane are
// shared, everything below is the mirror image of the original half.
struct DoubledMesh {
  std::shared_ptr<const Mesh> mesh;
  std::vector<int> source_node;            // doubled node -> original node
  std::vector<std::uint8_t> lower_node;    // strictly below the plane
  std::vector<std::uint8_t> lower_element; // mirrored simplex
};

/// Mirrors a mesh whose free boundary lies flat on {x_n = 0}. Throws when the
/// mesh extends below the plane or touches it nowhere.
DoubledMesh double_mesh(const Mesh& mesh);

/// Even reflection: mirror nodes carry the values of their images.
VectorField even_reflect(const VectorField& u, const DoubledMesh& doubled);

// v equals u on the upper half and the inversion of the even reflection
// below; m is the reflected-equation weight, 1 above and |u~|^(2(p-2)) below.
struct ReflectedField {
  DoubledMesh geometry;
  VectorField u_tilde;
  VectorField v;
  std::vector<double> m;
  double p = 2.0;
};

/// Geometric reflection of a field with min nodal |u| > 1/2 across the flat
/// free boundary.
ReflectedField reflect_field(const VectorField& u, double p);

/// Max over mirrored elements of the relative deviation between the discrete
/// |grad v| and |grad u~| / |u~(barycenter)|^2. Zero when both sides vanish.
double gradient_identity_check(const ReflectedField& rf);

struct ResidualBoundReport {
  std::vector<int> nodes;      // interior nodes of the doubled mesh
  std::vector<double> ratios;  // |weak p-Laplacian of v at the node| / local energy
};

/// Per interior node of the doubled mesh: the norm of the weak residual of
/// div(|grad v|^(p-2) grad v) against the nodal basis function, divided by
/// the p-energy over the basis function's support.
ResidualBoundReport reflected_residual_bound(const ReflectedField& rf);

}  // namespace pharm
