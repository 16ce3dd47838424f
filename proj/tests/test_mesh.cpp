#include "pharm/mesh.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <numbers>
#include <set>

using namespace pharm;
using namespace pharm::testing;

TEST_CASE("structured unit square counts") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.5);
  CHECK(m.num_nodes() == 9);
  CHECK(m.num_elements() == 8);

  Mesh f = build_mesh(box2(0, 0, 1, 1), 0.25);
  CHECK(f.num_nodes() == 25);
  CHECK(f.num_elements() == 32);
}

TEST_CASE("simplex volumes positive, box volume exact") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.13);
  for (double v : m.volumes) CHECK(v > 0);
  CHECK(m.total_volume() == doctest::Approx(1.0).epsilon(1e-13));

  Mesh m3 = build_mesh(box3(vec3(0, 0, 0), vec3(1, 2, 1)), 0.3);
  for (double v : m3.volumes) CHECK(v > 0);
  CHECK(m3.total_volume() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("boundary faces each belong to one simplex and close the surface") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.25);
  double perimeter = 0.0;
  for (const auto& bf : m.boundary_faces) {
    CHECK(bf.element >= 0);
    CHECK(bf.element < m.num_elements());
    perimeter += bf.area;
  }
  CHECK(perimeter == doctest::Approx(4.0));

  Mesh m3 = build_mesh(box3(vec3(0, 0, 0), vec3(1, 1, 1)), 0.5);
  double area = 0.0;
  for (const auto& bf : m3.boundary_faces) area += bf.area;
  CHECK(area == doctest::Approx(6.0));
}

TEST_CASE("half-ball curved boundary approximates the semicircle") {
  DomainSpec d;
  d.kind = DomainKind::HalfBall;
  d.dim = 2;
  d.radius = 1.0;
  Mesh m = build_mesh(d, 0.1);

  double curved = 0.0, flat = 0.0;
  for (const auto& bf : m.boundary_faces) {
    if (std::abs(bf.centroid[1]) < 1e-9)
      flat += bf.area;
    else
      curved += bf.area;
  }
  CHECK(curved == doctest::Approx(std::numbers::pi).epsilon(0.01));
  CHECK(flat == doctest::Approx(2.0).epsilon(1e-12));
  // area within O(h^2)
  CHECK(m.total_volume() == doctest::Approx(std::numbers::pi / 2).epsilon(0.01));
}

TEST_CASE("half-ball in 3D: valid simplices, hemisphere area and volume") {
  DomainSpec d;
  d.kind = DomainKind::HalfBall;
  d.dim = 3;
  d.radius = 1.0;
  Mesh m = build_mesh(d, 0.15);
  for (double v : m.volumes) CHECK(v > 0);
  CHECK(m.total_volume() == doctest::Approx(2 * std::numbers::pi / 3).epsilon(0.02));
}

TEST_CASE("classification on a half-box") {
  ProblemSpec spec;
  spec.dim = 2;
  spec.domain = halfbox2(0, 1, 1);
  spec.boundary.set("bottom", FacePortion::FreeSphere);
  Mesh m = build_mesh(spec.domain, 0.25);
  classify_boundary(m, spec);

  auto class_at = [&](double x, double y) {
    for (int a = 0; a < m.num_nodes(); ++a)
      if (std::abs(m.coords[2 * a] - x) < 1e-12 && std::abs(m.coords[2 * a + 1] - y) < 1e-12)
        return m.node_class[a];
    FAIL("node not found");
    return NodeClass::Interior;
  };
  CHECK(class_at(0.5, 0.0) == NodeClass::FreeSphere);
  CHECK(class_at(0.5, 1.0) == NodeClass::Dirichlet);
  CHECK(class_at(0.5, 0.5) == NodeClass::Interior);
  // corners: Dirichlet wins
  CHECK(class_at(0.0, 0.0) == NodeClass::Dirichlet);
}

TEST_CASE("classification is independent of vertex ordering") {
  ProblemSpec spec;
  spec.dim = 2;
  spec.domain = halfbox2(-1, 1, 1);
  spec.boundary.set("bottom", FacePortion::FreeSphere);
  Mesh m = build_mesh(spec.domain, 0.5);
  classify_boundary(m, spec);

  // rebuild with every simplex's vertex list rotated
  std::vector<int> rotated = m.simplices;
  for (int e = 0; e < m.num_elements(); ++e) {
    int* v = rotated.data() + std::size_t(e) * 3;
    std::swap(v[0], v[1]);
    std::swap(v[1], v[2]);
  }
  Mesh m2 = assemble_mesh(2, m.coords, rotated);
  classify_boundary(m2, spec);
  for (int a = 0; a < m.num_nodes(); ++a) CHECK(m.node_class[a] == m2.node_class[a]);
}

TEST_CASE("natural faces leave their nodes unconstrained") {
  ProblemSpec spec;
  spec.dim = 2;
  spec.domain = halfbox2(0, 1, 1);
  spec.boundary.set("bottom", FacePortion::FreeSphere);
  spec.boundary.set("top", FacePortion::Natural);
  spec.boundary.set("left", FacePortion::Natural);
  spec.boundary.set("right", FacePortion::Natural);
  Mesh m = build_mesh(spec.domain, 0.25);
  classify_boundary(m, spec);
  int dirichlet = 0, free = 0;
  for (int a = 0; a < m.num_nodes(); ++a) {
    dirichlet += m.node_class[a] == NodeClass::Dirichlet;
    free += m.node_class[a] == NodeClass::FreeSphere;
  }
  CHECK(dirichlet == 0);
  CHECK(free == 5);  // the bottom row
}

TEST_CASE("ball_elements: trivial extremes and a measured disc") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.25);
  const Vec c = vec2(0.5, 0.5);

  CHECK(ball_elements(m, c, 10.0).size() == std::size_t(m.num_elements()));
  CHECK(ball_elements(m, c, 1e-6).empty());

  const std::vector<int> sel = ball_elements(m, c, 0.3);
  double vol = 0.0;
  for (int e : sel) vol += m.volumes[e];
  // direct enumeration oracle over barycenters
  double oracle = 0.0;
  for (int e = 0; e < m.num_elements(); ++e)
    if ((m.barycenter(e).head(2) - c).norm() < 0.3) oracle += m.volumes[e];
  CHECK(vol == doctest::Approx(oracle));
  CHECK(vol == doctest::Approx(std::numbers::pi * 0.09).epsilon(0.15));
}

TEST_CASE("ball_elements monotone in the radius") {
  Mesh m = build_mesh(box2(-1, -1, 1, 1), 0.2);
  const Vec c = vec2(0.1, -0.2);
  std::vector<int> small = ball_elements(m, c, 0.4);
  std::vector<int> big = ball_elements(m, c, 0.8);
  std::set<int> bigset(big.begin(), big.end());
  for (int e : small) CHECK(bigset.count(e) == 1);
}

TEST_CASE("build_mesh rejects bad input") {
  CHECK_THROWS_AS(build_mesh(box2(0, 0, 1, 1), -0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(box2(0, 0, 0, 1), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(box2(0, 0, 1, 1), 1e-4, 1000), std::invalid_argument);
}

TEST_CASE("mesh h is the longest edge") {
  Mesh m = build_mesh(box2(0, 0, 1, 1), 0.5);
  CHECK(m.h == doctest::Approx(0.5 * std::numbers::sqrt2));
}
