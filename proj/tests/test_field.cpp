#include "pharm/field.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace pharm;
using namespace pharm::testing;

namespace {

VectorField linear_field(const Mesh& m, const Mat& A) {
  return VectorField::sample(m, static_cast<int>(A.rows()),
                             [&](const Vec& x) -> Vec { return A * x; });
}

}  // namespace

TEST_CASE("gradient of a constant field vanishes") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.25);
  VectorField u = VectorField::constant(m, vec2(3.0, -1.0));
  ElementGradient g = gradient(u);
  for (int e = 0; e < m.num_elements(); ++e) CHECK(g.at(e).norm() == 0.0);
}

TEST_CASE("gradient reproduces affine fields to machine precision") {
  Mesh m = build_mesh(box2(-1, 0, 2, 1), 0.3);
  Mat A(2, 2);
  A << 1.5, -0.25, 0.75, 2.0;
  ElementGradient g = gradient(linear_field(m, A));
  for (int e = 0; e < m.num_elements(); ++e) CHECK((g.at(e) - A).norm() < 1e-13);
}

TEST_CASE("gradient converges to the analytic gradient at barycenters") {
  auto run = [](double h) {
    Mesh m = build_mesh(box2(0, 0, 1, 1), h);
    VectorField u = VectorField::sample(m, 2, [](const Vec& x) -> Vec {
      return vec2(std::sin(x[0]), std::cos(x[1]));
    });
    ElementGradient g = gradient(u);
    double worst = 0.0;
    for (int e = 0; e < m.num_elements(); ++e) {
      const SpaceVec b = m.barycenter(e);
      Mat exact(2, 2);
      exact << std::cos(b[0]), 0.0, 0.0, -std::sin(b[1]);
      worst = std::max(worst, (g.at(e) - exact).norm());
    }
    return worst;
  };
  const double e16 = run(1.0 / 16), e32 = run(1.0 / 32);
  CHECK(e16 < 1.5 / 16);
  CHECK(e32 < 0.75 * e16);
}

TEST_CASE("gradient is linear in the field") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.25);
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  VectorField u(m, 2), w(m, 2), combo(m, 2);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    u.values[i] = dist(rng);
    w.values[i] = dist(rng);
    combo.values[i] = 0.3 * u.values[i] - 1.7 * w.values[i];
  }
  ElementGradient gu = gradient(u), gw = gradient(w), gc = gradient(combo);
  for (int e = 0; e < m.num_elements(); ++e)
    CHECK((gc.at(e) - (0.3 * gu.at(e) - 1.7 * gw.at(e))).norm() < 1e-12);
}

TEST_CASE("mean_value: constants and the independent summation oracle") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.5);  // the 8-triangle mesh
  std::vector<int> all(m.num_elements());
  std::iota(all.begin(), all.end(), 0);

  VectorField c = VectorField::constant(m, vec2(0.5, -2.0));
  CHECK((mean_value(c, all) - vec2(0.5, -2.0)).norm() < 1e-14);

  std::mt19937 rng(11);
  std::normal_distribution<double> dist;
  VectorField u(m, 2);
  for (double& v : u.values) v = dist(rng);
  Vec acc = Vec::Zero(2);
  double vol = 0;
  for (int e = 0; e < m.num_elements(); ++e) {
    auto s = m.simplex(e);
    Vec ub = Vec::Zero(2);
    for (int k = 0; k <= 2; ++k) ub += u.value(s[k]);
    acc += m.volumes[e] * ub / 3.0;
    vol += m.volumes[e];
  }
  CHECK((mean_value(u, all) - acc / vol).norm() < 1e-14);
}

TEST_CASE("mean over a symmetric interior ball recovers the center value") {
  Mesh m = build_mesh(box2(-1, -1, 1, 1), 0.125);
  Mat A(2, 2);
  A << 1.0, 0.5, -0.5, 2.0;
  VectorField u = linear_field(m, A);
  const Vec x0 = vec2(0.0, 0.0);
  const std::vector<int> sel = ball_elements(m, x0, 0.5);
  CHECK((mean_value(u, sel) - A * x0).norm() < 2 * m.h);
}

TEST_CASE("centering a field zeroes its mean") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.2);
  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  VectorField u(m, 3);
  for (double& v : u.values) v = dist(rng);
  std::vector<int> sel = ball_elements(m, vec2(0.4, 0.6), 0.35);
  const Vec mean = mean_value(u, sel);
  VectorField centered = u;
  for (int a = 0; a < m.num_nodes(); ++a) centered.value(a) -= mean;
  CHECK(mean_value(centered, sel).norm() < 1e-13);
}

TEST_CASE("boundary_mean: constants, linear trace, quadrature oracle") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.25);
  VectorField c = VectorField::constant(m, vec2(1.0, 2.0));
  std::vector<int> bottom;
  for (int f = 0; f < static_cast<int>(m.boundary_faces.size()); ++f)
    if (std::abs(m.boundary_faces[f].centroid[1]) < 1e-12) bottom.push_back(f);
  REQUIRE(!bottom.empty());
  CHECK((boundary_mean(c, bottom) - vec2(1.0, 2.0)).norm() < 1e-14);

  VectorField x1 = VectorField::sample(m, 1, [](const Vec& x) -> Vec {
    Vec v(1);
    v << x[0];
    return v;
  });
  CHECK(boundary_mean(x1, bottom)[0] == doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937 rng(5);
  std::normal_distribution<double> dist;
  VectorField u(m, 2);
  for (double& v : u.values) v = dist(rng);
  Vec acc = Vec::Zero(2);
  double area = 0;
  for (int f : bottom) {
    const BoundaryFace& bf = m.boundary_faces[f];
    acc += bf.area * 0.5 * (u.value(bf.nodes[0]) + u.value(bf.nodes[1]));
    area += bf.area;
  }
  CHECK((boundary_mean(u, bottom) - acc / area).norm() < 1e-14);
}

TEST_CASE("empty subsets are rejected") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.5);
  VectorField u = VectorField::constant(m, vec2(1, 0));
  CHECK_THROWS_AS(mean_value(u, {}), std::invalid_argument);
  CHECK_THROWS_AS(boundary_mean(u, {}), std::invalid_argument);
}
