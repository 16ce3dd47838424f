#pragma once

#include "pharm/field.hpp"

#include <string>
#include <vector>

namespace pharm {

// Analytic reference fields. RadialProjection is x/|x| (needs N = n); LogLog
// and SinLogLog are the scalar log log(2/|x|) and sin log log(2/|x|) maps,
// both singular at the center.
enum class FixtureKind { Constant, RadialProjection, LogLog, SinLogLog, Linear };

struct FixtureSpec {
  FixtureKind kind = FixtureKind::Constant;
  Vec c;       // Constant value
  Mat A;       // Linear: u = A x, N x n
  Vec center;  // singular point / offset (defaults to the origin)

  Vec eval(const Vec& x) const;                    // formula value away from the center
  double gradient_norm(double r, int dim) const;   // |grad u| at distance r from the center
  int components(int dim) const;
};

struct FixtureField {
  VectorField field;
  std::vector<int> regularized_nodes;  // nodes set by the nearest-ring average
};

/// Nodal sampling of the fixture formula. Nodes landing on the singular
/// center get the average of their element neighbors and are flagged.
FixtureField make_fixture(const FixtureSpec& spec, const Mesh& mesh);

FixtureKind fixture_kind_from_name(const std::string& name);

// Region for the independent quadrature oracle. Balls and annuli must be
// centered at the fixture center for the singular kinds; boxes must not
// contain it.
struct QuadRegion {
  enum class Kind { Ball, Box } kind = Kind::Ball;
  Vec center;
  double radius = 1.0;
  double radius_inner = 0.0;  // annulus when positive
  Vec lo, hi;
  bool upper_half = false;  // intersect with {x_n >= 0}, center on the plane

  static QuadRegion ball(const Vec& c, double r, bool upper = false);
  static QuadRegion annulus(const Vec& c, double r_inner, double r_outer, bool upper = false);
  static QuadRegion box(const Vec& lo, const Vec& hi);
};

/// High-order quadrature of |grad u|^p for the analytic fixture over the
/// region, independent of any mesh.
double fixture_energy_oracle(const FixtureSpec& spec, int dim, double p, const QuadRegion& region);

}  // namespace pharm
