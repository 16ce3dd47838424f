#include "pharm/diagnostics.hpp"

#include "pharm/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace pharm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// cumulative p-energy per radius of the (decreasing) radii list, one sweep
std::vector<double> ball_energy_profile(const VectorField& u, double p, const Vec& x0,
                                        std::span<const double> radii) {
  const Mesh& m = *u.mesh;
  std::vector<double> acc(radii.size(), 0.0);
  GradMat G;
  for (int e = 0; e < m.num_elements(); ++e) {
    const SpaceVec b = m.barycenter(e);
    double dist2 = 0.0;
    for (int c = 0; c < m.dim; ++c) {
      const double t = b[c] - x0[c];
      dist2 += t * t;
    }
    if (dist2 >= radii[0] * radii[0]) continue;
    element_gradient(u, e, m.element_geometry(e), G);
    const double en = std::pow(G.squaredNorm(), 0.5 * p) * m.volumes[e];
    for (std::size_t k = 0; k < radii.size() && dist2 < radii[k] * radii[k]; ++k) acc[k] += en;
  }
  return acc;
}

std::pair<double, double> bbox_coord(const Mesh& m, int c) {
  double lo = std::numeric_limits<double>::max(), hi = -lo;
  for (int a = 0; a < m.num_nodes(); ++a) {
    lo = std::min(lo, m.coords[std::size_t(a) * m.dim + c]);
    hi = std::max(hi, m.coords[std::size_t(a) * m.dim + c]);
  }
  return {lo, hi};
}

}  // namespace

void BallFamily::validate() const {
  if (centers.empty() || radii.empty())
    throw std::invalid_argument("ball family: needs at least one center and radius");
  for (std::size_t k = 0; k + 1 < radii.size(); ++k)
    if (!(radii[k] > radii[k + 1]))
      throw std::invalid_argument("ball family: radii must be strictly decreasing");
  if (!(radii.back() > 0)) throw std::invalid_argument("ball family: radii must be positive");
}

BallFamily default_family(const Mesh& mesh, double R, int depth, double lattice_spacing) {
  BallFamily fam;
  for (int a = 0; a < mesh.num_nodes(); ++a)
    if (mesh.node_class[a] == NodeClass::FreeSphere) {
      fam.centers.emplace_back(mesh.node(a));
      fam.center_nodes.push_back(a);
    }
  // coarse interior lattice over the bounding box
  std::array<std::pair<double, double>, 3> bb;
  for (int c = 0; c < mesh.dim; ++c) bb[c] = bbox_coord(mesh, c);
  std::array<int, 3> steps{1, 1, 1};
  for (int c = 0; c < mesh.dim; ++c)
    steps[c] = std::max(1, static_cast<int>(std::floor((bb[c].second - bb[c].first) / lattice_spacing)));
  Vec pt(mesh.dim);
  for (int i = 0; i <= steps[0]; ++i)
    for (int j = 0; j <= steps[1]; ++j)
      for (int k = 0; k <= (mesh.dim == 3 ? steps[2] : 0); ++k) {
        pt[0] = bb[0].first + (bb[0].second - bb[0].first) * i / steps[0];
        pt[1] = bb[1].first + (bb[1].second - bb[1].first) * j / steps[1];
        if (mesh.dim == 3) pt[2] = bb[2].first + (bb[2].second - bb[2].first) * k / steps[2];
        fam.centers.push_back(pt);
        fam.center_nodes.push_back(-1);
      }
  for (int k = 0; k <= depth; ++k) fam.radii.push_back(R * std::pow(2.0, -k));
  fam.validate();
  return fam;
}

double normalized_energy(const VectorField& u, double p, const Vec& x0, double r) {
  if (!(r > 0)) throw std::invalid_argument("normalized_energy: radius must be positive");
  const std::array<double, 1> radii{r};
  const double en = ball_energy_profile(u, p, x0, radii)[0];
  return std::pow(r, p - u.mesh->dim) * en;
}

double sup_normalized_energy(const VectorField& u, double p, const BallFamily& family) {
  family.validate();
  double sup = 0.0;
  for (const Vec& c : family.centers) {
    const std::vector<double> prof = ball_energy_profile(u, p, c, family.radii);
    for (std::size_t k = 0; k < family.radii.size(); ++k)
      sup = std::max(sup, std::pow(family.radii[k], p - u.mesh->dim) * prof[k]);
  }
  return sup;
}

MonotonicityReport monotonicity_check(const VectorField& u, double p, const Vec& x0,
                                      double rho, double r) {
  const Mesh& m = *u.mesh;
  if (!(0 < rho && rho < r)) throw std::invalid_argument("monotonicity_check: need 0 < rho < r");
  const double tol = m.h / 10.0;
  const bool on_plane = std::abs(x0[m.dim - 1]) <= tol;
  if (!on_plane) {
    for (int c = 0; c < m.dim; ++c) {
      const auto [lo, hi] = bbox_coord(m, c);
      if (x0[c] - r < lo - tol || x0[c] + r > hi + tol)
        throw std::invalid_argument(
            "monotonicity_check: x0 must lie on the free boundary or carry an interior ball");
    }
  }

  MonotonicityReport rep;
  rep.x0 = x0;
  rep.rho = rho;
  rep.r = r;
  rep.lhs = normalized_energy(u, p, x0, r) - normalized_energy(u, p, x0, rho);

  GradMat G;
  double rhs = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) {
    const SpaceVec b = m.barycenter(e);
    double dist2 = 0.0;
    for (int c = 0; c < m.dim; ++c) {
      const double t = b[c] - x0[c];
      dist2 += t * t;
    }
    if (dist2 < rho * rho || dist2 >= r * r) continue;
    const double dist = std::sqrt(dist2);
    element_gradient(u, e, m.element_geometry(e), G);
    const double fro2 = G.squaredNorm();
    if (fro2 == 0.0) continue;
    double radial2 = 0.0;  // |du/dnu|^2 with nu the unit radial direction
    for (int n = 0; n < u.components; ++n) {
      double dn = 0.0;
      for (int c = 0; c < m.dim; ++c) dn += G(n, c) * (b[c] - x0[c]) / dist;
      radial2 += dn * dn;
    }
    rhs += std::pow(dist, p - m.dim) * std::pow(fro2, 0.5 * (p - 2.0)) * radial2 * m.volumes[e];
  }
  rep.rhs = p * rhs;
  rep.discrepancy = std::abs(rep.lhs - rep.rhs);
  return rep;
}

double decay_ratio(const VectorField& u, double p, const Vec& x0, double R, double theta,
                   int depth) {
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("decay_ratio: theta must be in (0,1)");
  auto concentric_sup = [&](double rad) {
    std::vector<double> radii;
    for (int k = 0; k <= depth; ++k) radii.push_back(rad * std::pow(2.0, -k));
    const std::vector<double> prof = ball_energy_profile(u, p, x0, radii);
    double sup = 0.0;
    for (std::size_t k = 0; k < radii.size(); ++k)
      sup = std::max(sup, std::pow(radii[k], p - u.mesh->dim) * prof[k]);
    return sup;
  };
  const double den = concentric_sup(R);
  if (den == 0.0) return kNaN;
  return concentric_sup(theta * R) / den;
}

GrowthProbeReport growth_probe(const VectorField& u, double p, const Vec& y0, double r,
                               double lambda, double mu) {
  const Mesh& m = *u.mesh;
  if (!(lambda > 0) || !(mu > 0))
    throw std::invalid_argument("growth_probe: lambda and mu must be positive");
  for (int c = 0; c < m.dim; ++c) {
    const auto [lo, hi] = bbox_coord(m, c);
    if (y0[c] + 4 * r < lo - m.h || y0[c] - 4 * r > hi + m.h)
      throw std::invalid_argument("growth_probe: B(y0, 4r) misses the mesh bounding box");
  }
  const std::vector<int> inner = ball_elements(m, y0, r);
  if (inner.empty()) throw std::invalid_argument("growth_probe: empty inner ball");
  const std::vector<int> outer = ball_elements(m, y0, 4 * r);

  GrowthProbeReport rep;
  rep.lambda = lambda;
  rep.mu = mu;
  rep.r = r;
  rep.lhs = p_energy_total(u, p, inner);
  rep.energy_4r = p_energy_total(u, p, outer);
  rep.annulus = rep.energy_4r - rep.lhs;

  const Vec mean = mean_value(u, outer);
  SmallVec ub;
  for (int e : outer) {
    element_mean(u, e, ub);
    double osc = 0.0, defect = 0.0;
    for (int n = 0; n < u.components; ++n) {
      const double d = ub[n] - mean[n];
      osc += d * d;
    }
    defect = std::abs(ub.squaredNorm() - 1.0);
    rep.oscillation += std::pow(std::sqrt(osc), p) * m.volumes[e];
    rep.sphere_defect += std::pow(defect, p) * m.volumes[e];
  }

  const double rinv = std::pow(lambda, 1.0 - p) * std::pow(r, -p);
  rep.caccioppoli_rhs = (lambda + std::pow(mu, p - 1.0)) * rep.energy_4r + rep.annulus / mu;
  rep.interior_rhs = lambda * rep.energy_4r + rinv * rep.oscillation;
  rep.boundary_rhs = rep.interior_rhs + rinv * rep.sphere_defect;
  auto implied = [&](double rhs) { return rhs > 0 ? rep.lhs / rhs : kNaN; };
  rep.c_caccioppoli = implied(rep.caccioppoli_rhs);
  rep.c_interior = implied(rep.interior_rhs);
  rep.c_boundary = implied(rep.boundary_rhs);
  return rep;
}

double bmo_seminorm(const Mesh& mesh, std::span<const double> f, const BallFamily& family) {
  family.validate();
  if (static_cast<int>(f.size()) != mesh.num_nodes())
    throw std::invalid_argument("bmo_seminorm: f must be a nodal scalar");
  double sup = 0.0;
  for (const Vec& c : family.centers)
    for (double rad : family.radii) {
      const std::vector<int> elems = ball_elements(mesh, c, rad);
      if (elems.empty()) continue;
      double vol = 0.0, mean = 0.0;
      for (int e : elems) {
        auto s = mesh.simplex(e);
        double fb = 0.0;
        for (int k = 0; k <= mesh.dim; ++k) fb += f[s[k]];
        fb /= (mesh.dim + 1);
        mean += fb * mesh.volumes[e];
        vol += mesh.volumes[e];
      }
      mean /= vol;
      double osc = 0.0;
      for (int e : elems) {
        auto s = mesh.simplex(e);
        double fb = 0.0;
        for (int k = 0; k <= mesh.dim; ++k) fb += f[s[k]];
        fb /= (mesh.dim + 1);
        osc += std::abs(fb - mean) * mesh.volumes[e];
      }
      sup = std::max(sup, osc / vol);
    }
  return sup;
}

double dist_to_sphere_sup(const VectorField& u, std::span<const int> nodes) {
  double sup = 0.0;
  if (nodes.empty()) {
    for (int a = 0; a < u.mesh->num_nodes(); ++a)
      sup = std::max(sup, std::abs(u.value(a).norm() - 1.0));
  } else {
    for (int a : nodes) sup = std::max(sup, std::abs(u.value(a).norm() - 1.0));
  }
  return sup;
}

SingularSetReport singular_set(const VectorField& u, double p, double eps_threshold, double R,
                               const BallFamily& family) {
  if (!(eps_threshold > 0)) throw std::invalid_argument("singular_set: threshold must be positive");
  family.validate();
  SingularSetReport rep;
  rep.eps_threshold = eps_threshold;

  std::vector<double> radii;
  for (double r : family.radii)
    if (r < R) radii.push_back(r);
  if (radii.empty()) radii.push_back(R / 2);

  for (std::size_t ci = 0; ci < family.centers.size(); ++ci) {
    const std::vector<double> prof = ball_energy_profile(u, p, family.centers[ci], radii);
    double sup = 0.0;
    for (std::size_t k = 0; k < radii.size(); ++k)
      sup = std::max(sup, std::pow(radii[k], p - u.mesh->dim) * prof[k]);
    if (sup >= eps_threshold) rep.flagged.push_back(static_cast<int>(ci));
  }
  rep.flagged_count = static_cast<int>(rep.flagged.size());

  // dyadic box-covering counts as the Hausdorff-mass proxy
  for (int k = 0; k <= 5; ++k) {
    const double box = R * std::pow(2.0, -k);
    std::set<std::array<long, 3>> boxes;
    for (int ci : rep.flagged) {
      std::array<long, 3> key{0, 0, 0};
      for (int c = 0; c < u.mesh->dim; ++c)
        key[c] = static_cast<long>(std::floor(family.centers[ci][c] / box));
      boxes.insert(key);
    }
    rep.covering.emplace_back(box, static_cast<int>(boxes.size()));
  }
  return rep;
}

HoelderFit hoelder_exponent(const VectorField& u, const Vec& x0, double R, int dyadic_depth) {
  if (dyadic_depth < 3) throw std::invalid_argument("hoelder_exponent: need dyadic_depth >= 3");
  const Mesh& m = *u.mesh;
  std::vector<double> logs_r, logs_osc;
  SmallVec ub;
  for (int k = 0; k <= dyadic_depth; ++k) {
    const double rad = R * std::pow(2.0, -k);
    const std::vector<int> elems = ball_elements(m, x0, rad);
    if (elems.empty()) continue;
    const Vec mean = mean_value(u, elems);
    double osc = 0.0, vol = 0.0;
    for (int e : elems) {
      element_mean(u, e, ub);
      double d2 = 0.0;
      for (int n = 0; n < u.components; ++n) {
        const double d = ub[n] - mean[n];
        d2 += d * d;
      }
      osc += std::sqrt(d2) * m.volumes[e];
      vol += m.volumes[e];
    }
    osc /= vol;
    if (osc < 1e-300) continue;
    logs_r.push_back(std::log(rad));
    logs_osc.push_back(std::log(osc));
  }
  HoelderFit fit;
  if (logs_r.size() < 2) return fit;  // oscillation identically zero: not applicable

  const int n = static_cast<int>(logs_r.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += logs_r[i];
    sy += logs_osc[i];
    sxx += logs_r[i] * logs_r[i];
    sxy += logs_r[i] * logs_osc[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = logs_osc[i] - (slope * logs_r[i] + icept);
    rss += e * e;
  }
  fit.alpha = std::clamp(slope, 0.0, 1.5);
  fit.fit_residual = std::sqrt(rss / n);
  fit.applicable = true;
  return fit;
}

MaxPrincipleReport max_principle_check(const VectorField& u) {
  MaxPrincipleReport rep;
  for (int a = 0; a < u.mesh->num_nodes(); ++a) {
    const double n = u.value(a).norm();
    if (u.mesh->on_boundary[a])
      rep.boundary_sup = std::max(rep.boundary_sup, n);
    else
      rep.interior_sup = std::max(rep.interior_sup, n);
  }
  rep.pass = rep.interior_sup <= rep.boundary_sup + 1e-8;
  return rep;
}

}  // namespace pharm
