#include "pharm/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace pharm {

namespace {

inline double integrand_pow(double fro2, double p, double eps) {
  return std::pow(eps + fro2, 0.5 * p);
}

template <class Region>
EnergyValue energy_over(const VectorField& u, double p, double eps, const Region& region) {
  const Mesh& m = *u.mesh;
  EnergyValue out;
  out.per_element.reserve(region.size());
  GradMat G;
  for (int e : region) {
    element_gradient(u, e, m.element_geometry(e), G);
    const double v = integrand_pow(G.squaredNorm(), p, eps) * m.volumes[e];
    out.per_element.push_back(v);
    out.total += v;
  }
  return out;
}

struct AllElements {
  int n;
  struct It {
    int e;
    int operator*() const { return e; }
    It& operator++() { ++e; return *this; }
    bool operator!=(const It& o) const { return e != o.e; }
  };
  It begin() const { return {0}; }
  It end() const { return {n}; }
  std::size_t size() const { return static_cast<std::size_t>(n); }
};

template <class Region>
double energy_total_over(const VectorField& u, double p, double eps, const Region& region) {
  const Mesh& m = *u.mesh;
  double total = 0.0;
  GradMat G;
  for (int e : region) {
    element_gradient(u, e, m.element_geometry(e), G);
    total += integrand_pow(G.squaredNorm(), p, eps) * m.volumes[e];
  }
  return total;
}

}  // namespace

EnergyValue p_energy(const VectorField& u, double p) {
  return energy_over(u, p, 0.0, AllElements{u.mesh->num_elements()});
}

EnergyValue p_energy(const VectorField& u, double p, std::span<const int> region) {
  return energy_over(u, p, 0.0, region);
}

double p_energy_total(const VectorField& u, double p) {
  return energy_total_over(u, p, 0.0, AllElements{u.mesh->num_elements()});
}

double p_energy_total(const VectorField& u, double p, std::span<const int> region) {
  return energy_total_over(u, p, 0.0, region);
}

EnergyValue regularized_energy(const VectorField& u, double p, double eps) {
  if (eps < 0) throw std::invalid_argument("regularized_energy: eps must be >= 0");
  return energy_over(u, p, eps, AllElements{u.mesh->num_elements()});
}

double regularized_energy_total(const VectorField& u, double p, double eps) {
  return energy_total_over(u, p, eps, AllElements{u.mesh->num_elements()});
}

double regularized_energy_decrease(const VectorField& u, double eps_u, const VectorField& w,
                                   double eps_w, double p) {
  if (u.mesh != w.mesh || u.components != w.components)
    throw std::invalid_argument("energy decrease: fields must share mesh and components");
  if (eps_w > eps_u)
    throw std::invalid_argument("energy decrease: needs eps_u >= eps_w");
  const Mesh& m = *u.mesh;
  VectorField diff = u;
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= w.values[i];

  double total = 0.0;
  GradMat Gu, Gd;
  for (int e = 0; e < m.num_elements(); ++e) {
    const ElementGeometry geom = m.element_geometry(e);
    element_gradient(u, e, geom, Gu);
    element_gradient(diff, e, geom, Gd);
    const double a = eps_u + Gu.squaredNorm();
    // b = eps_w + |Gu - Gd|^2 = a - delta, with delta assembled exactly
    const double delta =
        (eps_u - eps_w) + 2.0 * Gu.cwiseProduct(Gd).sum() - Gd.squaredNorm();
    double dW;
    if (a <= 0.0) {
      dW = -std::pow(-delta, 0.5 * p);  // a = 0 forces delta <= 0
    } else if (delta >= a) {
      dW = std::pow(a, 0.5 * p);  // b = 0
    } else {
      dW = std::pow(a, 0.5 * p) * (-std::expm1(0.5 * p * std::log1p(-delta / a)));
    }
    total += dW * geom.volume;
  }
  return total;
}

VectorField assemble_residual(const VectorField& u, double p, double eps) {
  const Mesh& m = *u.mesh;
  VectorField r(m, u.components);
  GradMat G;
  for (int e = 0; e < m.num_elements(); ++e) {
    const ElementGeometry geom = m.element_geometry(e);
    element_gradient(u, e, geom, G);
    const double w = std::pow(eps + G.squaredNorm(), 0.5 * (p - 2.0)) * geom.volume;
    auto s = m.simplex(e);
    for (int k = 0; k <= m.dim; ++k) {
      double* out = r.values.data() + static_cast<std::size_t>(s[k]) * u.components;
      for (int n = 0; n < u.components; ++n) {
        double dot = 0.0;
        for (int c = 0; c < m.dim; ++c) dot += G(n, c) * geom.grad(k, c);
        out[n] += w * dot;
      }
    }
  }
  return r;
}

VectorField first_variation(const VectorField& u, double p, double eps) {
  if (!(eps > 0) && p != 2.0)
    throw std::invalid_argument("first_variation: eps must be positive when p > 2");
  return assemble_residual(u, p, eps);
}

double inner_variation_residual(const VectorField& u, double p, const VectorField& xi) {
  const Mesh& m = *u.mesh;
  if (xi.components != m.dim || xi.mesh != u.mesh)
    throw std::invalid_argument("inner_variation_residual: xi must be a spatial field on the same mesh");

  // admissibility: xi = 0 at Dirichlet nodes, tangential at FreeSphere nodes
  std::vector<Eigen::Vector3d> node_normal(m.num_nodes(), Eigen::Vector3d::Zero());
  for (const auto& bf : m.boundary_faces)
    for (int a = 0; a < m.dim; ++a) node_normal[bf.nodes[a]] += bf.area * bf.normal;
  double scale = 0.0;
  for (int a = 0; a < m.num_nodes(); ++a) scale = std::max(scale, xi.value(a).norm());
  const double tol = 1e-10 * std::max(scale, 1.0);
  for (int a = 0; a < m.num_nodes(); ++a) {
    if (m.node_class[a] == NodeClass::Dirichlet && xi.value(a).norm() > tol)
      throw std::invalid_argument("inner_variation_residual: xi must vanish at Dirichlet nodes");
    if (m.node_class[a] == NodeClass::FreeSphere) {
      const Eigen::Vector3d nrm = node_normal[a].normalized();
      double dot = 0.0;
      for (int c = 0; c < m.dim; ++c) dot += nrm[c] * xi.value(a)[c];
      if (std::abs(dot) > tol)
        throw std::invalid_argument("inner_variation_residual: xi must be tangent at free-boundary nodes");
    }
  }

  double total = 0.0;
  GradMat G, X;
  for (int e = 0; e < m.num_elements(); ++e) {
    const ElementGeometry geom = m.element_geometry(e);
    element_gradient(u, e, geom, G);
    element_gradient(xi, e, geom, X);  // X(j, i) = d_i xi^j
    const double fro2 = G.squaredNorm();
    if (fro2 == 0.0) continue;
    const double w = std::pow(fro2, 0.5 * (p - 2.0)) * geom.volume;
    double pairing = 0.0;
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j) {
        double didj = 0.0;  // di u . dj u over target components
        for (int n = 0; n < u.components; ++n) didj += G(n, i) * G(n, j);
        const double stress = fro2 * (i == j ? 1.0 : 0.0) - p * didj;
        pairing += stress * X(j, i);
      }
    total += w * pairing;
  }
  return total;
}

double conservation_residual(const VectorField& u, double p, std::span<const double> phi,
                             int i, int j) {
  const Mesh& m = *u.mesh;
  if (i < 0 || j <= i || j >= u.components)
    throw std::invalid_argument("conservation_residual: need 0 <= i < j < N");
  if (static_cast<int>(phi.size()) != m.num_nodes())
    throw std::invalid_argument("conservation_residual: phi must be nodal scalar");
  double total = 0.0;
  GradMat G;
  SmallVec ub;
  for (int e = 0; e < m.num_elements(); ++e) {
    const ElementGeometry geom = m.element_geometry(e);
    element_gradient(u, e, geom, G);
    element_mean(u, e, ub);
    const double fro2 = G.squaredNorm();
    if (fro2 == 0.0) continue;
    const double w = std::pow(fro2, 0.5 * (p - 2.0)) * geom.volume;
    auto s = m.simplex(e);
    for (int c = 0; c < m.dim; ++c) {
      double gphi = 0.0;
      for (int k = 0; k <= m.dim; ++k) gphi += phi[s[k]] * geom.grad(k, c);
      total += w * (ub[i] * G(j, c) - ub[j] * G(i, c)) * gphi;
    }
  }
  return total;
}

int OmegaField::pair_index(int i, int j) const {
  // pairs (0,1), (0,2), ..., (0,N-1), (1,2), ...
  return i * components - i * (i + 1) / 2 + (j - i - 1);
}

SpaceVec OmegaField::omega(int e, int i, int j) const {
  double sign = 1.0;
  if (i > j) {
    std::swap(i, j);
    sign = -1.0;
  }
  SpaceVec out = SpaceVec::Zero(dim);
  if (i == j) return out;
  const double* src =
      data.data() + (static_cast<std::size_t>(e) * pairs() + pair_index(i, j)) * dim;
  for (int c = 0; c < dim; ++c) out[c] = sign * src[c];
  return out;
}

OmegaField omega_field(const VectorField& u) {
  const Mesh& m = *u.mesh;
  OmegaField om;
  om.components = u.components;
  om.dim = m.dim;
  om.data.assign(static_cast<std::size_t>(m.num_elements()) * om.pairs() * m.dim, 0.0);
  GradMat G;
  SmallVec ub;
  for (int e = 0; e < m.num_elements(); ++e) {
    element_gradient(u, e, m.element_geometry(e), G);
    element_mean(u, e, ub);
    double* out = om.data.data() + static_cast<std::size_t>(e) * om.pairs() * m.dim;
    for (int i = 0; i < u.components; ++i)
      for (int j = i + 1; j < u.components; ++j) {
        double* slot = out + om.pair_index(i, j) * m.dim;
        for (int c = 0; c < m.dim; ++c) slot[c] = ub[i] * G(j, c) - ub[j] * G(i, c);
      }
  }
  return om;
}

Vec tangent_project(const Vec& q, const Vec& w) {
  const double n = q.norm();
  if (!(n > 0)) throw std::invalid_argument("tangent_project: q must be nonzero");
  const Vec qh = q / n;
  return w - qh * qh.dot(w);
}

}  // namespace pharm
