#pragma once

#include "pharm/field.hpp"

#include <optional>
#include <span>
#include <vector>

namespace pharm {

// Two-level sup family: every (center, radius) pair indexes one ball.
struct BallFamily {
  std::vector<Vec> centers;
  std::vector<int> center_nodes;  // node id per center, -1 for lattice points
  std::vector<double> radii;      // positive, strictly decreasing

  void validate() const;
};

/// Free-boundary nodes plus a coarse interior lattice as centers, dyadic
/// radii R 2^-k for k = 0..depth.
BallFamily default_family(const Mesh& mesh, double R, int depth, double lattice_spacing);

/// r^(p-n) * p-energy over ball_elements(x0, r).
double normalized_energy(const VectorField& u, double p, const Vec& x0, double r);

/// Max of normalized_energy over all (center, radius) pairs of the family.
double sup_normalized_energy(const VectorField& u, double p, const BallFamily& family);

struct MonotonicityReport {
  Vec x0;
  double rho = 0.0, r = 0.0;
  double lhs = 0.0;          // difference of normalized energies
  double rhs = 0.0;          // weighted annulus integral of the radial derivative
  double discrepancy = 0.0;  // |lhs - rhs|
};

/// Both sides of the monotonicity identity on the annulus rho < |x - x0| < r,
/// with the radial direction evaluated at element barycenters. x0 must lie on
/// the flat free boundary, or the ball must be interior.
MonotonicityReport monotonicity_check(const VectorField& u, double p, const Vec& x0,
                                      double rho, double r);

/// Sup of normalized energies over concentric dyadic balls inside B(x0, theta R)
/// divided by the same over B(x0, R). NaN marks a vanishing denominator.
double decay_ratio(const VectorField& u, double p, const Vec& x0, double R, double theta,
                   int depth = 5);

struct GrowthProbeReport {
  double lambda = 0.0, mu = 0.0, r = 0.0;
  double lhs = 0.0;             // energy over the inner ball
  double energy_4r = 0.0;       // energy over the 4r ball
  double annulus = 0.0;         // energy over the 4r \ r annulus
  double oscillation = 0.0;     // int |u - mean|^p over the 4r ball
  double sphere_defect = 0.0;   // int ||u|^2 - 1|^p over the 4r ball
  double caccioppoli_rhs = 0.0; // (lambda + mu^(p-1)) energy + mu^-1 annulus
  double interior_rhs = 0.0;    // lambda energy + lambda^(1-p) r^-p oscillation
  double boundary_rhs = 0.0;    // interior_rhs + lambda^(1-p) r^-p sphere defect
  double c_caccioppoli = 0.0, c_interior = 0.0, c_boundary = 0.0;  // lhs / rhs, NaN if 0/0
};

GrowthProbeReport growth_probe(const VectorField& u, double p, const Vec& y0, double r,
                               double lambda, double mu);

/// Sup over family balls of the mean oscillation of a nodal scalar.
double bmo_seminorm(const Mesh& mesh, std::span<const double> f, const BallFamily& family);

/// Max over the nodes (all nodes when the span is empty) of ||u| - 1|.
double dist_to_sphere_sup(const VectorField& u, std::span<const int> nodes = {});

struct SingularSetReport {
  double eps_threshold = 0.0;
  std::vector<int> flagged;  // indices into family.centers
  int flagged_count = 0;
  std::vector<std::pair<double, int>> covering;  // (box size, boxes needed)
};

/// Flags family centers whose sup over radii < R of the normalized energy
/// reaches the threshold; reports dyadic box-covering counts of the flags.
SingularSetReport singular_set(const VectorField& u, double p, double eps_threshold, double R,
                               const BallFamily& family);

struct HoelderFit {
  double alpha = 0.0;
  double fit_residual = 0.0;
  bool applicable = false;  // false when the oscillation is identically zero
};

/// Least-squares slope of log mean-oscillation against log radius over
/// dyadic balls; the Campanato-style Hoelder exponent estimate, clamped to
/// [0, 1.5].
HoelderFit hoelder_exponent(const VectorField& u, const Vec& x0, double R, int dyadic_depth);

struct MaxPrincipleReport {
  double interior_sup = 0.0;
  double boundary_sup = 0.0;
  bool pass = false;
};

/// Compares max |u| over interior nodes against max |u| over boundary nodes.
MaxPrincipleReport max_principle_check(const VectorField& u);

}  // namespace pharm
