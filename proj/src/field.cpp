#include "pharm/field.hpp"

#include <cmath>
#include <stdexcept>

namespace pharm {

VectorField VectorField::constant(const Mesh& m, const Vec& c) {
  VectorField u(m, static_cast<int>(c.size()));
  for (int a = 0; a < m.num_nodes(); ++a) u.value(a) = c;
  return u;
}

VectorField VectorField::sample(const Mesh& m, int n_components,
                                const std::function<Vec(const Vec&)>& f) {
  VectorField u(m, n_components);
  for (int a = 0; a < m.num_nodes(); ++a) u.value(a) = f(m.node(a));
  return u;
}

bool VectorField::finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

void element_gradient(const VectorField& u, int e, const ElementGeometry& geom, GradMat& G) {
  const Mesh& m = *u.mesh;
  G.setZero(u.components, m.dim);
  auto s = m.simplex(e);
  for (int k = 0; k <= m.dim; ++k) {
    const double* v = u.values.data() + static_cast<std::size_t>(s[k]) * u.components;
    for (int n = 0; n < u.components; ++n)
      for (int c = 0; c < m.dim; ++c) G(n, c) += v[n] * geom.grad(k, c);
  }
}

ElementGradient gradient(const VectorField& u) {
  if (u.mesh == nullptr || static_cast<int>(u.values.size()) != u.mesh->num_nodes() * u.components)
    throw std::invalid_argument("gradient: field does not match its mesh");
  const Mesh& m = *u.mesh;
  ElementGradient g;
  g.components = u.components;
  g.dim = m.dim;
  g.data.resize(static_cast<std::size_t>(m.num_elements()) * u.components * m.dim);
  GradMat G;
  for (int e = 0; e < m.num_elements(); ++e) {
    element_gradient(u, e, m.element_geometry(e), G);
    double* out = g.data.data() + static_cast<std::size_t>(e) * u.components * m.dim;
    for (int n = 0; n < u.components; ++n)
      for (int c = 0; c < m.dim; ++c) out[n * m.dim + c] = G(n, c);
  }
  return g;
}

void element_mean(const VectorField& u, int e, SmallVec& out) {
  const Mesh& m = *u.mesh;
  out.setZero(u.components);
  auto s = m.simplex(e);
  for (int k = 0; k <= m.dim; ++k) {
    const double* v = u.values.data() + static_cast<std::size_t>(s[k]) * u.components;
    for (int n = 0; n < u.components; ++n) out[n] += v[n];
  }
  out /= (m.dim + 1);
}

Vec mean_value(const VectorField& u, std::span<const int> elements) {
  if (elements.empty()) throw std::invalid_argument("mean_value: empty element subset");
  const Mesh& m = *u.mesh;
  Vec acc = Vec::Zero(u.components);
  double vol = 0.0;
  SmallVec ub;
  for (int e : elements) {
    element_mean(u, e, ub);
    acc += m.volumes[e] * ub.head(u.components);
    vol += m.volumes[e];
  }
  return acc / vol;
}

Vec boundary_mean(const VectorField& u, std::span<const int> face_ids) {
  if (face_ids.empty()) throw std::invalid_argument("boundary_mean: empty face subset");
  const Mesh& m = *u.mesh;
  Vec acc = Vec::Zero(u.components);
  double area = 0.0;
  for (int f : face_ids) {
    const BoundaryFace& bf = m.boundary_faces[f];
    Vec v = Vec::Zero(u.components);
    for (int a = 0; a < m.dim; ++a) v += u.value(bf.nodes[a]);
    v /= m.dim;
    acc += bf.area * v;
    area += bf.area;
  }
  return acc / area;
}

}  // namespace pharm
