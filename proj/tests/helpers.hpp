#pragma once

#include "pharm/mesh.hpp"

#include <random>

namespace pharm::testing {

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

inline DomainSpec box2(double x0, double y0, double x1, double y1) {
  DomainSpec d;
  d.kind = DomainKind::Box;
  d.dim = 2;
  d.lo = vec2(x0, y0);
  d.hi = vec2(x1, y1);
  return d;
}

inline DomainSpec halfbox2(double x0, double x1, double height) {
  DomainSpec d;
  d.kind = DomainKind::HalfBox;
  d.dim = 2;
  d.lo = vec2(x0, 0.0);
  d.hi = vec2(x1, height);
  return d;
}

inline DomainSpec box3(const Vec& lo, const Vec& hi) {
  DomainSpec d;
  d.kind = DomainKind::Box;
  d.dim = 3;
  d.lo = lo;
  d.hi = hi;
  return d;
}

inline DomainSpec halfbox3(double half_width, double height) {
  DomainSpec d;
  d.kind = DomainKind::HalfBox;
  d.dim = 3;
  d.lo = vec3(-half_width, -half_width, 0.0);
  d.hi = vec3(half_width, half_width, height);
  return d;
}

inline Vec random_unit(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v.normalized();
}

}  // namespace pharm::testing
