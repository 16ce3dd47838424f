#pragma once

#include "pharm/energy.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pharm {

struct StepRule {
  double initial = 1.0;
  double backtrack = 0.5;            // step shrink factor
  double sufficient_decrease = 1e-4; // Armijo constant
  int max_backtracks = 60;
};

struct EpsSchedule {
  double initial = -1.0;  // < 0: mean |grad u0|^2 of the initial iterate
  double decay = 0.5;
  double floor = -1.0;    // < 0: 1e-8 * initial
};

struct SolverConfig {
  EpsSchedule eps;
  StepRule step;
  double grad_tol = 1e-8;
  long max_iters = 200000;
};

struct TraceEntry {
  long iter = 0;
  double eps = 0.0;
  double energy = 0.0;
  double residual_norm = 0.0;
  double step = 0.0;
};

struct SolveReport {
  long iterations = 0;
  std::vector<TraceEntry> energy_trace;  // iter 0 records the initial state
  double final_residual_norm = 0.0;
  double eps_final = 0.0;
  bool converged = false;
  std::string note;
};

/// Residual with Dirichlet components zeroed and FreeSphere components
/// projected onto the tangent space of the sphere at the nodal value.
VectorField project_residual(const VectorField& r, const VectorField& u);

/// FreeSphere nodal values normalized to the unit sphere; everything else
/// untouched. Throws if a FreeSphere value vanishes.
VectorField retract_free_boundary(VectorField u);

/// Nodal values with |u| > M pulled back to the sphere of radius M.
VectorField truncate_to_ball(VectorField u, double M);

/// One backtracking line-search step along the negative projected residual,
/// followed by the free-boundary retraction. Accepted only on sufficient
/// decrease of the regularized energy; throws on line-search stagnation.
std::pair<VectorField, double> descent_step(const VectorField& u, double p, double eps,
                                            const StepRule& rule);

/// Minimizes the regularized p-energy over fields matching the iterate's
/// Dirichlet values, with the sphere constraint at FreeSphere nodes, driving
/// eps down the schedule. init must be feasible.
std::pair<VectorField, SolveReport> solve(const Mesh& mesh, const ProblemSpec& spec,
                                          const VectorField& init, const SolverConfig& config);

/// Feasible starting point: componentwise harmonic extension of the
/// Dirichlet data (one p = 2 direct solve), then FreeSphere retraction.
VectorField initial_field(const Mesh& mesh, const ProblemSpec& spec);

}  // namespace pharm
