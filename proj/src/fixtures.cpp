#include "pharm/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace pharm {

namespace {

constexpr double kSingularTol = 1e-12;

// 16-point Gauss-Legendre on [0,1]
struct Gauss16 {
  std::array<double, 16> x, w;
  Gauss16() {
    static const double xs[8] = {0.0950125098376374402, 0.2816035507792589132,
                                 0.4580167776572273863, 0.6178762444026437484,
                                 0.7554044083550030339, 0.8656312023878317439,
                                 0.9445750230732325761, 0.9894009349916499326};
    static const double ws[8] = {0.1894506104550684963, 0.1826034150449235888,
                                 0.1691565193950025382, 0.1495959888165767320,
                                 0.1246289712555338720, 0.0951585116824927848,
                                 0.0622535239386478929, 0.0271524594117540949};
    for (int i = 0; i < 8; ++i) {
      x[2 * i] = 0.5 * (1.0 - xs[i]);
      x[2 * i + 1] = 0.5 * (1.0 + xs[i]);
      w[2 * i] = w[2 * i + 1] = 0.5 * ws[i];
    }
  }
};
const Gauss16 g16;

template <class F>
double integrate_01(const F& f) {
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += g16.w[i] * f(g16.x[i]);
  return s;
}

// radial integral over (0, R] with geometric grading toward the singular end
template <class F>
double integrate_radial(const F& f, double R) {
  double s = 0.0;
  double hi = R;
  for (int k = 0; k < 64 && hi > 1e-300; ++k) {
    const double lo = hi * 0.5;
    s += (hi - lo) * integrate_01([&](double t) { return f(lo + (hi - lo) * t); });
    hi = lo;
  }
  return s;
}

}  // namespace

int FixtureSpec::components(int dim) const {
  switch (kind) {
    case FixtureKind::Constant: return static_cast<int>(c.size());
    case FixtureKind::Linear: return static_cast<int>(A.rows());
    case FixtureKind::RadialProjection: return dim;
    case FixtureKind::LogLog:
    case FixtureKind::SinLogLog: return 1;
  }
  return 0;
}

Vec FixtureSpec::eval(const Vec& x) const {
  switch (kind) {
    case FixtureKind::Constant: return c;
    case FixtureKind::Linear: return A * x;
    case FixtureKind::RadialProjection: {
      const Vec d = x - (center.size() ? center : Vec::Zero(x.size()));
      return d / d.norm();
    }
    case FixtureKind::LogLog:
    case FixtureKind::SinLogLog: {
      const Vec d = x - (center.size() ? center : Vec::Zero(x.size()));
      const double v = std::log(std::log(2.0 / d.norm()));
      Vec out(1);
      out[0] = (kind == FixtureKind::LogLog) ? v : std::sin(v);
      return out;
    }
  }
  throw std::logic_error("fixture: unknown kind");
}

double FixtureSpec::gradient_norm(double r, int dim) const {
  switch (kind) {
    case FixtureKind::Constant: return 0.0;
    case FixtureKind::Linear: return A.norm();
    case FixtureKind::RadialProjection: return std::sqrt(double(dim - 1)) / r;
    case FixtureKind::LogLog: return 1.0 / (r * std::log(2.0 / r));
    case FixtureKind::SinLogLog:
      return std::abs(std::cos(std::log(std::log(2.0 / r)))) / (r * std::log(2.0 / r));
  }
  return 0.0;
}

FixtureKind fixture_kind_from_name(const std::string& name) {
  if (name == "constant") return FixtureKind::Constant;
  if (name == "radial") return FixtureKind::RadialProjection;
  if (name == "loglog") return FixtureKind::LogLog;
  if (name == "sinloglog") return FixtureKind::SinLogLog;
  if (name == "linear") return FixtureKind::Linear;
  throw std::invalid_argument("unknown fixture kind: " + name);
}

FixtureField make_fixture(const FixtureSpec& spec, const Mesh& mesh) {
  const int N = spec.components(mesh.dim);
  if (spec.kind == FixtureKind::RadialProjection && spec.center.size() &&
      static_cast<int>(spec.center.size()) != mesh.dim)
    throw std::invalid_argument("make_fixture: center dimension mismatch");
  if (spec.kind == FixtureKind::Linear && static_cast<int>(spec.A.cols()) != mesh.dim)
    throw std::invalid_argument("make_fixture: linear matrix must be N x n");

  FixtureField out;
  out.field = VectorField(mesh, N);
  const bool singular = spec.kind == FixtureKind::RadialProjection ||
                        spec.kind == FixtureKind::LogLog || spec.kind == FixtureKind::SinLogLog;
  const Vec x0 = spec.center.size() ? spec.center : Vec::Zero(mesh.dim);

  std::vector<int> pending;
  for (int a = 0; a < mesh.num_nodes(); ++a) {
    if (singular && (mesh.node(a) - x0).norm() < kSingularTol) {
      pending.push_back(a);
      continue;
    }
    out.field.value(a) = spec.eval(mesh.node(a));
  }

  // nearest-ring average for nodes at the singular point
  for (int a : pending) {
    std::unordered_set<int> ring;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      auto s = mesh.simplex(e);
      bool hit = false;
      for (int k = 0; k <= mesh.dim; ++k) hit |= (s[k] == a);
      if (!hit) continue;
      for (int k = 0; k <= mesh.dim; ++k)
        if (s[k] != a && (mesh.node(s[k]) - x0).norm() >= kSingularTol) ring.insert(s[k]);
    }
    if (ring.empty()) throw std::runtime_error("make_fixture: isolated singular node");
    Vec avg = Vec::Zero(N);
    for (int b : ring) avg += out.field.value(b);
    out.field.value(a) = avg / static_cast<double>(ring.size());
    out.regularized_nodes.push_back(a);
  }
  return out;
}

QuadRegion QuadRegion::ball(const Vec& c, double r, bool upper) {
  QuadRegion q;
  q.kind = Kind::Ball;
  q.center = c;
  q.radius = r;
  q.upper_half = upper;
  return q;
}

QuadRegion QuadRegion::annulus(const Vec& c, double r_inner, double r_outer, bool upper) {
  QuadRegion q = ball(c, r_outer, upper);
  q.radius_inner = r_inner;
  return q;
}

QuadRegion QuadRegion::box(const Vec& lo, const Vec& hi) {
  QuadRegion q;
  q.kind = Kind::Box;
  q.lo = lo;
  q.hi = hi;
  return q;
}

double fixture_energy_oracle(const FixtureSpec& spec, int dim, double p, const QuadRegion& region) {
  const Vec x0 = spec.center.size() ? spec.center : Vec::Zero(dim);

  auto region_volume = [&]() {
    if (region.kind == QuadRegion::Kind::Box) {
      double v = 1.0;
      for (int c = 0; c < dim; ++c) v *= region.hi[c] - region.lo[c];
      return v;
    }
    const double full = (dim == 2) ? std::numbers::pi * region.radius * region.radius
                                   : 4.0 / 3.0 * std::numbers::pi * std::pow(region.radius, 3);
    return region.upper_half ? 0.5 * full : full;
  };

  if (spec.kind == FixtureKind::Constant) return 0.0;
  if (spec.kind == FixtureKind::Linear) return std::pow(spec.A.norm(), p) * region_volume();

  // singular radial kinds
  auto gnorm = [&](double r) { return spec.gradient_norm(r, dim); };

  if (region.kind == QuadRegion::Kind::Ball) {
    if ((region.center - x0).norm() > kSingularTol)
      throw std::invalid_argument("fixture_energy_oracle: ball must be centered at the singularity");
    // x/|x| has |grad|^p ~ r^-p: the ball integral diverges once p >= n
    if (spec.kind == FixtureKind::RadialProjection && region.radius_inner == 0.0 && p >= dim)
      throw std::invalid_argument(
          "fixture_energy_oracle: radial-projection ball energy diverges for p >= n; "
          "use an annulus");
    double sphere = (dim == 2) ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
    if (region.upper_half) sphere *= 0.5;
    auto shell = [&](double r) { return std::pow(gnorm(r), p) * std::pow(r, dim - 1); };
    if (region.radius_inner > 0.0) {
      // smooth away from the center: plain composite panels
      double total = 0.0;
      const int panels = 64;
      const double len = (region.radius - region.radius_inner) / panels;
      for (int k = 0; k < panels; ++k) {
        const double lo = region.radius_inner + k * len;
        total += len * integrate_01([&](double t) { return shell(lo + len * t); });
      }
      return sphere * total;
    }
    return sphere * integrate_radial(shell, region.radius);
  }

  // box region: composite tensor Gauss; the integrand must be smooth there
  bool inside = true;
  for (int c = 0; c < dim; ++c)
    inside &= (x0[c] > region.lo[c] - 1e-12 && x0[c] < region.hi[c] + 1e-12);
  if (inside)
    throw std::invalid_argument("fixture_energy_oracle: box must exclude the singularity");
  const int panels = 24;
  auto axis_pts = [&](int c, std::vector<double>& xs, std::vector<double>& ws) {
    const double len = (region.hi[c] - region.lo[c]) / panels;
    for (int k = 0; k < panels; ++k)
      for (int i = 0; i < 16; ++i) {
        xs.push_back(region.lo[c] + (k + g16.x[i]) * len);
        ws.push_back(g16.w[i] * len);
      }
  };
  std::vector<double> xs[3], ws[3];
  for (int c = 0; c < dim; ++c) axis_pts(c, xs[c], ws[c]);
  double total = 0.0;
  Vec pt(dim);
  const std::size_t nq = xs[0].size();
  if (dim == 2) {
    for (std::size_t i = 0; i < nq; ++i)
      for (std::size_t j = 0; j < nq; ++j) {
        pt[0] = xs[0][i];
        pt[1] = xs[1][j];
        total += ws[0][i] * ws[1][j] * std::pow(gnorm((pt - x0).norm()), p);
      }
  } else {
    for (std::size_t i = 0; i < nq; ++i)
      for (std::size_t j = 0; j < nq; ++j)
        for (std::size_t k = 0; k < nq; ++k) {
          pt[0] = xs[0][i];
          pt[1] = xs[1][j];
          pt[2] = xs[2][k];
          total += ws[0][i] * ws[1][j] * ws[2][k] * std::pow(gnorm((pt - x0).norm()), p);
        }
  }
  return total;
}

}  // namespace pharm
