#pragma once

#include "pharm/mesh.hpp"

#include <functional>
#include <span>
#include <vector>

namespace pharm {

// Nodal map u : nodes -> R^N. The mesh is referenced, not owned; meshes are
// immutable after construction, so fields may be shared across threads.
struct VectorField {
  const Mesh* mesh = nullptr;
  int components = 0;
  std::vector<double> values;  // node-major

  VectorField() = default;
  VectorField(const Mesh& m, int n_components)
      : mesh(&m), components(n_components),
        values(static_cast<std::size_t>(m.num_nodes()) * n_components, 0.0) {}

  Eigen::Map<Vec> value(int a) {
    return Eigen::Map<Vec>(values.data() + static_cast<std::size_t>(a) * components, components);
  }
  Eigen::Map<const Vec> value(int a) const {
    return Eigen::Map<const Vec>(values.data() + static_cast<std::size_t>(a) * components,
                                 components);
  }

  static VectorField constant(const Mesh& m, const Vec& c);
  static VectorField sample(const Mesh& m, int n_components,
                            const std::function<Vec(const Vec&)>& f);

  bool finite() const;
};

// Per-simplex constant gradient of the piecewise-affine interpolant,
// stored as row-major N x dim blocks.
struct ElementGradient {
  int components = 0;
  int dim = 0;
  std::vector<double> data;

  using Block = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  Block at(int e) const {
    return Block(data.data() + static_cast<std::size_t>(e) * components * dim, components, dim);
  }
};

/// Gradient of the P1 interpolant on every simplex. Exact for affine fields.
ElementGradient gradient(const VectorField& u);

/// Gradient on a single element, written into G (components x dim). The
/// caller provides the element geometry so sweeps can reuse or stream it.
void element_gradient(const VectorField& u, int e, const ElementGeometry& geom, GradMat& G);

/// Value of the interpolant at the element barycenter (= nodal average).
void element_mean(const VectorField& u, int e, SmallVec& out);

/// Volume-weighted mean of barycenter values over the element subset.
Vec mean_value(const VectorField& u, std::span<const int> elements);

/// Area-weighted mean of the trace over the given boundary faces.
Vec boundary_mean(const VectorField& u, std::span<const int> face_ids);

}  // namespace pharm
