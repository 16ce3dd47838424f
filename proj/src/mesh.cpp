#include "pharm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pharm {

namespace {

// Signed volume of the simplex spanned by the element's vertices.
double signed_volume(const Mesh& m, const int* v) {
  const int d = m.dim;
  Eigen::Matrix3d E = Eigen::Matrix3d::Identity();
  for (int k = 0; k < d; ++k)
    for (int c = 0; c < d; ++c) E(c, k) = m.coords[std::size_t(v[k + 1]) * d + c] - m.coords[std::size_t(v[0]) * d + c];
  const double det = (d == 2) ? E.topLeftCorner<2, 2>().determinant() : E.determinant();
  return det / (d == 2 ? 2.0 : 6.0);
}

void orient_and_measure(Mesh& m) {
  const int d = m.dim;
  const int ne = m.num_elements();
  m.volumes.resize(ne);
  for (int e = 0; e < ne; ++e) {
    int* v = m.simplices.data() + std::size_t(e) * (d + 1);
    double vol = signed_volume(m, v);
    if (vol < 0) {
      std::swap(v[d - 1], v[d]);
      vol = -vol;
    }
    if (!(vol > 0)) throw std::runtime_error("mesh: degenerate simplex");
    m.volumes[e] = vol;
  }
}

double max_edge_length(const Mesh& m) {
  const int d = m.dim;
  double h2 = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) {
    auto s = m.simplex(e);
    for (int a = 0; a <= d; ++a)
      for (int b = a + 1; b <= d; ++b) {
        double l2 = 0.0;
        for (int c = 0; c < d; ++c) {
          const double t = m.coords[std::size_t(s[a]) * d + c] - m.coords[std::size_t(s[b]) * d + c];
          l2 += t * t;
        }
        h2 = std::max(h2, l2);
      }
  }
  return std::sqrt(h2);
}

// Faces incident to exactly one simplex, with outward normals.
void extract_boundary(Mesh& m) {
  const int d = m.dim;
  const int ne = m.num_elements();
  // pack a face as sorted node ids in a 64-bit key (node count < 2^21 each)
  if (m.num_nodes() >= (1 << 21)) throw std::runtime_error("mesh: node count exceeds face-key capacity");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> keys;
  keys.reserve(std::size_t(ne) * (d + 1));
  for (int e = 0; e < ne; ++e) {
    auto s = m.simplex(e);
    for (int opp = 0; opp <= d; ++opp) {
      std::array<std::uint64_t, 3> f{0, 0, 0};
      int k = 0;
      for (int a = 0; a <= d; ++a)
        if (a != opp) f[k++] = std::uint64_t(s[a]);
      std::sort(f.begin(), f.begin() + d);
      std::uint64_t key = 0;
      for (int a = 0; a < d; ++a) key = (key << 21) | f[a];
      keys.emplace_back(key, (std::uint64_t(e) << 3) | std::uint64_t(opp));
    }
  }
  std::sort(keys.begin(), keys.end());

  m.boundary_faces.clear();
  m.on_boundary.assign(m.num_nodes(), 0);
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j].first == keys[i].first) ++j;
    if (j - i == 1) {
      const int e = int(keys[i].second >> 3);
      const int opp = int(keys[i].second & 7);
      auto s = m.simplex(e);
      BoundaryFace bf;
      int k = 0;
      for (int a = 0; a <= d; ++a)
        if (a != opp) bf.nodes[k++] = s[a];
      bf.element = e;
      Eigen::Vector3d p0 = Eigen::Vector3d::Zero(), p1 = Eigen::Vector3d::Zero(),
                      p2 = Eigen::Vector3d::Zero(), po = Eigen::Vector3d::Zero();
      for (int c = 0; c < d; ++c) {
        p0[c] = m.coords[std::size_t(bf.nodes[0]) * d + c];
        p1[c] = m.coords[std::size_t(bf.nodes[1]) * d + c];
        if (d == 3) p2[c] = m.coords[std::size_t(bf.nodes[2]) * d + c];
        po[c] = m.coords[std::size_t(s[opp]) * d + c];
      }
      if (d == 2) {
        const Eigen::Vector3d t = p1 - p0;
        bf.area = t.norm();
        bf.normal = Eigen::Vector3d(t[1], -t[0], 0.0) / bf.area;
        bf.centroid = 0.5 * (p0 + p1);
      } else {
        const Eigen::Vector3d c = (p1 - p0).cross(p2 - p0);
        bf.area = 0.5 * c.norm();
        bf.normal = c.normalized();
        bf.centroid = (p0 + p1 + p2) / 3.0;
      }
      if (bf.normal.dot(bf.centroid - po) < 0) bf.normal = -bf.normal;
      for (int a = 0; a < d; ++a) m.on_boundary[bf.nodes[a]] = 1;
      m.boundary_faces.push_back(bf);
    } else if (j - i > 2) {
      throw std::runtime_error("mesh: non-manifold face");
    }
    i = j;
  }
}

void check_budget(std::size_t nodes, std::size_t budget) {
  if (nodes > budget)
    throw std::invalid_argument("build_mesh: resolution would produce " + std::to_string(nodes) +
                                " nodes, over the budget of " + std::to_string(budget));
}

Mesh structured_box(const Vec& lo, const Vec& hi, double res, std::size_t budget) {
  const int d = static_cast<int>(lo.size());
  std::array<int, 3> cells{1, 1, 1};
  for (int c = 0; c < d; ++c) {
    const double ext = hi[c] - lo[c];
    if (!(ext > 0)) throw std::invalid_argument("build_mesh: degenerate box extents");
    cells[c] = std::max(1, static_cast<int>(std::ceil(ext / res - 1e-9)));
  }

  Mesh m;
  m.dim = d;
  if (d == 2) {
    const int nx = cells[0], ny = cells[1];
    check_budget(std::size_t(nx + 1) * (ny + 1), budget);
    m.coords.reserve(std::size_t(nx + 1) * (ny + 1) * 2);
    for (int i = 0; i <= nx; ++i)
      for (int j = 0; j <= ny; ++j) {
        m.coords.push_back(lo[0] + (hi[0] - lo[0]) * i / nx);
        m.coords.push_back(lo[1] + (hi[1] - lo[1]) * j / ny);
      }
    auto nid = [ny](int i, int j) { return i * (ny + 1) + j; };
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const int a = nid(i, j), b = nid(i + 1, j), c = nid(i + 1, j + 1), e = nid(i, j + 1);
        m.simplices.insert(m.simplices.end(), {a, b, c, a, c, e});
      }
  } else {
    const int nx = cells[0], ny = cells[1], nz = cells[2];
    check_budget(std::size_t(nx + 1) * (ny + 1) * (nz + 1), budget);
    m.coords.reserve(std::size_t(nx + 1) * (ny + 1) * (nz + 1) * 3);
    for (int i = 0; i <= nx; ++i)
      for (int j = 0; j <= ny; ++j)
        for (int k = 0; k <= nz; ++k) {
          m.coords.push_back(lo[0] + (hi[0] - lo[0]) * i / nx);
          m.coords.push_back(lo[1] + (hi[1] - lo[1]) * j / ny);
          m.coords.push_back(lo[2] + (hi[2] - lo[2]) * k / nz);
        }
    auto nid = [ny, nz](int i, int j, int k) { return (i * (ny + 1) + j) * (nz + 1) + k; };
    // Kuhn subdivision: six tets per cube sharing the main diagonal
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    m.simplices.reserve(std::size_t(nx) * ny * nz * 24);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        for (int k = 0; k < nz; ++k)
          for (const auto& p : perms) {
            std::array<int, 3> off{0, 0, 0};
            m.simplices.push_back(nid(i, j, k));
            for (int step = 0; step < 3; ++step) {
              off[p[step]] = 1;
              m.simplices.push_back(nid(i + off[0], j + off[1], k + off[2]));
            }
          }
  }
  return m;
}

Mesh half_ball_2d(double R, double res, std::size_t budget) {
  const int rings = std::max(2, static_cast<int>(std::ceil(R / res - 1e-9)));
  const int K = std::max(3, static_cast<int>(std::ceil(std::numbers::pi * R / res - 1e-9)));
  check_budget(std::size_t(rings) * (K + 1) + 1, budget);

  Mesh m;
  m.dim = 2;
  m.coords = {0.0, 0.0};
  auto nid = [K](int ring, int j) { return 1 + (ring - 1) * (K + 1) + j; };
  for (int ring = 1; ring <= rings; ++ring) {
    const double r = R * ring / rings;
    for (int j = 0; j <= K; ++j) {
      const double th = std::numbers::pi * j / K;
      double x = r * std::cos(th), y = r * std::sin(th);
      if (j == 0) y = 0.0;
      if (j == K) y = 0.0;  // flat part exactly on {x2 = 0}
      m.coords.push_back(x);
      m.coords.push_back(y);
    }
  }
  for (int j = 0; j < K; ++j) m.simplices.insert(m.simplices.end(), {0, nid(1, j), nid(1, j + 1)});
  for (int ring = 1; ring < rings; ++ring)
    for (int j = 0; j < K; ++j) {
      const int a = nid(ring, j), b = nid(ring + 1, j), c = nid(ring + 1, j + 1), e = nid(ring, j + 1);
      m.simplices.insert(m.simplices.end(), {a, b, c, a, c, e});
    }
  return m;
}

// Half-ball in 3D: structured half-cube pushed onto the ball by the radial
// map x -> x |x|_inf / |x|_2, which keeps {x3 = 0} flat.
Mesh half_ball_3d(double R, double res, std::size_t budget) {
  Vec lo(3), hi(3);
  lo << -1.0, -1.0, 0.0;
  hi << 1.0, 1.0, 1.0;
  Mesh m = structured_box(lo, hi, res / R, budget);
  for (int a = 0; a < m.num_nodes(); ++a) {
    double* x = m.coords.data() + std::size_t(a) * 3;
    const double ninf = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
    const double n2 = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (n2 > 1e-14) {
      const double s = R * ninf / n2;
      x[0] *= s;
      x[1] *= s;
      x[2] *= s;
    }
  }
  return m;
}

}  // namespace

SpaceVec Mesh::barycenter(int e) const {
  SpaceVec b = SpaceVec::Zero(dim);
  auto s = simplex(e);
  for (int a = 0; a <= dim; ++a)
    for (int c = 0; c < dim; ++c) b[c] += coords[std::size_t(s[a]) * dim + c];
  return b / (dim + 1);
}

ElementGeometry Mesh::element_geometry(int e) const {
  ElementGeometry g;
  auto s = simplex(e);
  Eigen::Matrix3d E = Eigen::Matrix3d::Identity();
  for (int k = 0; k < dim; ++k)
    for (int c = 0; c < dim; ++c)
      E(c, k) = coords[std::size_t(s[k + 1]) * dim + c] - coords[std::size_t(s[0]) * dim + c];
  g.volume = volumes[e];
  Eigen::Matrix3d Einv = Eigen::Matrix3d::Identity();
  if (dim == 2) {
    Einv.topLeftCorner<2, 2>() = E.topLeftCorner<2, 2>().inverse().eval();
  } else {
    Einv = E.inverse().eval();
  }
  // row k+1 of grad is row k of E^{-1}; row 0 closes the partition of unity
  g.grad.resize(dim + 1, dim);
  for (int k = 0; k < dim; ++k)
    for (int c = 0; c < dim; ++c) g.grad(k + 1, c) = Einv(k, c);
  for (int c = 0; c < dim; ++c) {
    double sum = 0.0;
    for (int k = 1; k <= dim; ++k) sum += g.grad(k, c);
    g.grad(0, c) = -sum;
  }
  return g;
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (double x : volumes) v += x;
  return v;
}

void ProblemSpec::validate() const {
  if (p < 2.0) throw std::invalid_argument("spec: p must be >= 2");
  if (dim != 2 && dim != 3) throw std::invalid_argument("spec: n must be 2 or 3");
  if (components < 2) throw std::invalid_argument("spec: N must be >= 2");
}

Mesh build_mesh(const DomainSpec& domain, double resolution, std::size_t node_budget) {
  if (!(resolution > 0)) throw std::invalid_argument("build_mesh: resolution must be positive");
  Mesh m;
  switch (domain.kind) {
    case DomainKind::Box:
      m = structured_box(domain.lo, domain.hi, resolution, node_budget);
      break;
    case DomainKind::HalfBox:
      if (std::abs(domain.lo[domain.dim - 1]) > 1e-14)
        throw std::invalid_argument("build_mesh: half-box must have its bottom at {x_n = 0}");
      m = structured_box(domain.lo, domain.hi, resolution, node_budget);
      break;
    case DomainKind::HalfBall:
      if (!(domain.radius > 0)) throw std::invalid_argument("build_mesh: degenerate radius");
      m = (domain.dim == 2) ? half_ball_2d(domain.radius, resolution, node_budget)
                            : half_ball_3d(domain.radius, resolution, node_budget);
      break;
  }
  orient_and_measure(m);
  extract_boundary(m);
  m.h = max_edge_length(m);
  m.node_class.assign(m.num_nodes(), NodeClass::Interior);
  return m;
}

Mesh assemble_mesh(int dim, std::vector<double> coords, std::vector<int> simplices) {
  Mesh m;
  m.dim = dim;
  m.coords = std::move(coords);
  m.simplices = std::move(simplices);
  orient_and_measure(m);
  extract_boundary(m);
  m.h = max_edge_length(m);
  m.node_class.assign(m.num_nodes(), NodeClass::Interior);
  return m;
}

namespace {

// Matches a boundary face to a named portion of the domain. Returns the
// matched face name or "" if none applies.
std::string face_name(const BoundaryFace& bf, const DomainSpec& dom, double tol) {
  const int d = dom.dim;
  static const char* lo_names[3] = {"left", "front", "bottom"};
  static const char* hi_names[3] = {"right", "back", "top"};
  // 2D convention: x-axis left/right, y-axis bottom/top
  auto name_of = [&](int axis, bool high) -> std::string {
    if (d == 2) return axis == 0 ? (high ? "right" : "left") : (high ? "top" : "bottom");
    return high ? hi_names[axis] : lo_names[axis];
  };
  if (dom.kind == DomainKind::HalfBall) {
    if (std::abs(bf.centroid[d - 1]) < tol && std::abs(bf.normal[d - 1] + 1.0) < 0.5)
      return name_of(d - 1, false);  // flat part
    return "curved";
  }
  for (int axis = 0; axis < d; ++axis) {
    if (std::abs(bf.centroid[axis] - dom.lo[axis]) < tol && bf.normal[axis] < -0.5)
      return name_of(axis, false);
    if (std::abs(bf.centroid[axis] - dom.hi[axis]) < tol && bf.normal[axis] > 0.5)
      return name_of(axis, true);
  }
  return "";
}

FacePortion portion_of(const std::string& name, const BoundaryLayout& layout) {
  for (const auto& [face, portion] : layout.faces)
    if (face == name || face == "all") return portion;
  return layout.fallback;
}

}  // namespace

void classify_boundary(Mesh& mesh, const ProblemSpec& spec) {
  const double tol = mesh.h / 10.0;
  mesh.node_class.assign(mesh.num_nodes(), NodeClass::Interior);
  std::vector<std::uint8_t> is_free(mesh.num_nodes(), 0), is_dir(mesh.num_nodes(), 0);
  for (const auto& bf : mesh.boundary_faces) {
    const std::string name = face_name(bf, spec.domain, tol);
    if (name.empty()) throw std::runtime_error("classify_boundary: boundary face matches no portion");
    const FacePortion portion = portion_of(name, spec.boundary);
    for (int a = 0; a < mesh.dim; ++a) {
      if (portion == FacePortion::FreeSphere) is_free[bf.nodes[a]] = 1;
      if (portion == FacePortion::Dirichlet) is_dir[bf.nodes[a]] = 1;
    }
  }
  // Dirichlet wins over FreeSphere at shared edges / corners
  for (int a = 0; a < mesh.num_nodes(); ++a) {
    if (is_dir[a])
      mesh.node_class[a] = NodeClass::Dirichlet;
    else if (is_free[a])
      mesh.node_class[a] = NodeClass::FreeSphere;
  }
}

std::vector<int> ball_elements(const Mesh& mesh, const Vec& x0, double r) {
  if (!(r > 0)) throw std::invalid_argument("ball_elements: radius must be positive");
  std::vector<int> out;
  const int d = mesh.dim;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto s = mesh.simplex(e);
    double dist2 = 0.0;
    for (int c = 0; c < d; ++c) {
      double b = 0.0;
      for (int a = 0; a <= d; ++a) b += mesh.coords[std::size_t(s[a]) * d + c];
      b = b / (d + 1) - x0[c];
      dist2 += b * b;
    }
    if (dist2 < r * r) out.push_back(e);
  }
  return out;
}

std::vector<int> ball_boundary_faces(const Mesh& mesh, const Vec& x0, double r) {
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(mesh.boundary_faces.size()); ++f) {
    double dist2 = 0.0;
    for (int c = 0; c < mesh.dim; ++c) {
      const double t = mesh.boundary_faces[f].centroid[c] - x0[c];
      dist2 += t * t;
    }
    if (dist2 < r * r) out.push_back(f);
  }
  return out;
}

std::vector<int> portion_faces(const Mesh& mesh, const ProblemSpec& spec, FacePortion portion) {
  const double tol = mesh.h / 10.0;
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(mesh.boundary_faces.size()); ++f) {
    const std::string name = face_name(mesh.boundary_faces[f], spec.domain, tol);
    if (!name.empty() && portion_of(name, spec.boundary) == portion) out.push_back(f);
  }
  return out;
}

}  // namespace pharm
