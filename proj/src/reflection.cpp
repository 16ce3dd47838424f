#include "pharm/reflection.hpp"

#include "pharm/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace pharm {

Vec inversion(const Vec& q) {
  const double n2 = q.squaredNorm();
  if (!(n2 > 0)) throw std::invalid_argument("inversion: q must be nonzero");
  return q / n2;
}

Mat inversion_jacobian(const Vec& q) {
  const double n2 = q.squaredNorm();
  if (!(n2 > 0)) throw std::invalid_argument("inversion_jacobian: q must be nonzero");
  const int N = static_cast<int>(q.size());
  return (Mat::Identity(N, N) - 2.0 / n2 * q * q.transpose()) / n2;
}

DoubledMesh double_mesh(const Mesh& mesh) {
  const int d = mesh.dim;
  const double tol = 1e-12;
  int on_plane = 0;
  for (int a = 0; a < mesh.num_nodes(); ++a) {
    const double xn = mesh.coords[std::size_t(a) * d + (d - 1)];
    if (xn < -tol)
      throw std::invalid_argument("double_mesh: mesh extends below {x_n = 0}");
    if (std::abs(xn) <= tol) ++on_plane;
  }
  if (on_plane == 0)
    throw std::invalid_argument("double_mesh: no flat free boundary on {x_n = 0}");

  DoubledMesh out;
  std::vector<double> coords = mesh.coords;
  std::vector<int> mirror(mesh.num_nodes(), -1);
  out.source_node.resize(mesh.num_nodes());
  for (int a = 0; a < mesh.num_nodes(); ++a) out.source_node[a] = a;
  out.lower_node.assign(mesh.num_nodes(), 0);
  for (int a = 0; a < mesh.num_nodes(); ++a) {
    const double xn = mesh.coords[std::size_t(a) * d + (d - 1)];
    if (std::abs(xn) <= tol) {
      mirror[a] = a;  // shared
    } else {
      mirror[a] = static_cast<int>(coords.size()) / d;
      for (int c = 0; c < d - 1; ++c) coords.push_back(mesh.coords[std::size_t(a) * d + c]);
      coords.push_back(-xn);
      out.source_node.push_back(a);
      out.lower_node.push_back(1);
    }
  }

  std::vector<int> simp = mesh.simplices;
  std::vector<std::uint8_t> lower_elem(mesh.num_elements(), 0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto s = mesh.simplex(e);
    for (int k = 0; k <= d; ++k) simp.push_back(mirror[s[k]]);
    lower_elem.push_back(1);
  }
  out.lower_element = std::move(lower_elem);
  out.mesh = std::make_shared<Mesh>(assemble_mesh(d, std::move(coords), std::move(simp)));
  return out;
}

VectorField even_reflect(const VectorField& u, const DoubledMesh& doubled) {
  VectorField out(*doubled.mesh, u.components);
  for (int a = 0; a < doubled.mesh->num_nodes(); ++a)
    out.value(a) = u.value(doubled.source_node[a]);
  return out;
}

ReflectedField reflect_field(const VectorField& u, double p) {
  for (int a = 0; a < u.mesh->num_nodes(); ++a)
    if (u.value(a).norm() <= 0.5)
      throw std::invalid_argument("reflect_field: nodal |u| <= 1/2, outside the reflection regime");

  ReflectedField rf;
  rf.p = p;
  rf.geometry = double_mesh(*u.mesh);
  rf.u_tilde = even_reflect(u, rf.geometry);
  rf.v = rf.u_tilde;
  const int nn = rf.geometry.mesh->num_nodes();
  rf.m.assign(nn, 1.0);
  for (int a = 0; a < nn; ++a) {
    if (!rf.geometry.lower_node[a]) continue;
    const Vec q = rf.u_tilde.value(a);
    rf.v.value(a) = inversion(q);
    rf.m[a] = std::pow(q.squaredNorm(), p - 2.0);
  }
  return rf;
}

double gradient_identity_check(const ReflectedField& rf) {
  const Mesh& m = *rf.geometry.mesh;
  double worst = 0.0;
  GradMat Gv, Gu;
  SmallVec ub;
  for (int e = 0; e < m.num_elements(); ++e) {
    if (!rf.geometry.lower_element[e]) continue;
    const ElementGeometry geom = m.element_geometry(e);
    element_gradient(rf.v, e, geom, Gv);
    element_gradient(rf.u_tilde, e, geom, Gu);
    element_mean(rf.u_tilde, e, ub);
    const double lhs = Gv.norm();
    const double rhs = Gu.norm() / ub.squaredNorm();
    if (rhs < 1e-14) continue;  // both sides vanish for constant fields
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  return worst;
}

ResidualBoundReport reflected_residual_bound(const ReflectedField& rf) {
  const Mesh& m = *rf.geometry.mesh;
  const VectorField r = assemble_residual(rf.v, rf.p, 0.0);

  // p-energy over the support of each nodal basis function
  std::vector<double> star(m.num_nodes(), 0.0);
  GradMat G;
  for (int e = 0; e < m.num_elements(); ++e) {
    element_gradient(rf.v, e, m.element_geometry(e), G);
    const double en = std::pow(G.squaredNorm(), 0.5 * rf.p) * m.volumes[e];
    for (int k = 0; k <= m.dim; ++k) star[m.simplex(e)[k]] += en;
  }

  ResidualBoundReport rep;
  for (int a = 0; a < m.num_nodes(); ++a) {
    if (m.on_boundary[a]) continue;
    rep.nodes.push_back(a);
    const double num = r.value(a).norm();
    rep.ratios.push_back(star[a] > 0 ? num / star[a] : 0.0);
  }
  return rep;
}

}  // namespace pharm
