#include "pharm/solver.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

namespace pharm {

namespace {

using MapVec = Eigen::Map<Eigen::VectorXd>;
using CMapVec = Eigen::Map<const Eigen::VectorXd>;

double flat_norm(const VectorField& f) {
  return CMapVec(f.values.data(), f.values.size()).norm();
}

// mean of |grad u|^2 over the domain, the scale reference for eps
double mean_grad_sq(const VectorField& u) {
  const double vol = u.mesh->total_volume();
  return p_energy_total(u, 2.0) / vol;
}

struct LineSearchResult {
  VectorField u;
  double energy = 0.0;
  double step = 0.0;
  bool accepted = false;
};

LineSearchResult line_search(const VectorField& u, const VectorField& dir, double dir_sq,
                             double energy0, double p, double eps, double t0,
                             const StepRule& rule) {
  LineSearchResult res;
  double t = t0;
  for (int back = 0; back < rule.max_backtracks; ++back) {
    VectorField trial = u;
    MapVec(trial.values.data(), trial.values.size()) -=
        t * CMapVec(dir.values.data(), dir.values.size());
    trial = retract_free_boundary(std::move(trial));
    // the decrease is formed elementwise from the difference field, so it
    // stays meaningful below one ulp of the total energy
    const double decrease = regularized_energy_decrease(u, eps, trial, eps, p);
    if (decrease > 0 && decrease >= rule.sufficient_decrease * t * dir_sq) {
      res.u = std::move(trial);
      res.energy = energy0 - decrease;
      res.step = t;
      res.accepted = true;
      return res;
    }
    t *= rule.backtrack;
  }
  return res;
}

}  // namespace

VectorField project_residual(const VectorField& r, const VectorField& u) {
  const Mesh& m = *u.mesh;
  VectorField out = r;
  for (int a = 0; a < m.num_nodes(); ++a) {
    switch (m.node_class[a]) {
      case NodeClass::Dirichlet:
        out.value(a).setZero();
        break;
      case NodeClass::FreeSphere: {
        const Vec q = u.value(a).normalized();
        out.value(a) -= q * q.dot(out.value(a));
        break;
      }
      case NodeClass::Interior:
        break;
    }
  }
  return out;
}

VectorField retract_free_boundary(VectorField u) {
  const Mesh& m = *u.mesh;
  constexpr double kUlps = 4 * std::numeric_limits<double>::epsilon();
  for (int a = 0; a < m.num_nodes(); ++a) {
    if (m.node_class[a] != NodeClass::FreeSphere) continue;
    const double n = u.value(a).norm();
    if (!(n > 0)) throw std::runtime_error("retract_free_boundary: zero value at a free node");
    // idempotent at float precision: renormalizing an already-unit value
    // would inject an ulp-size kick that swamps tiny certified decreases
    if (std::abs(n - 1.0) > kUlps) u.value(a) /= n;
  }
  return u;
}

VectorField truncate_to_ball(VectorField u, double M) {
  if (!(M > 0)) throw std::invalid_argument("truncate_to_ball: M must be positive");
  for (int a = 0; a < u.mesh->num_nodes(); ++a) {
    const double n = u.value(a).norm();
    if (n > M) u.value(a) *= M / n;
  }
  return u;
}

std::pair<VectorField, double> descent_step(const VectorField& u, double p, double eps,
                                            const StepRule& rule) {
  if (!(eps > 0) && p != 2.0) throw std::invalid_argument("descent_step: eps must be positive");
  const VectorField r = project_residual(assemble_residual(u, p, eps), u);
  const double rsq = CMapVec(r.values.data(), r.values.size()).squaredNorm();
  if (rsq == 0.0) return {u, 0.0};
  const double e0 = regularized_energy_total(u, p, eps);
  LineSearchResult ls = line_search(u, r, rsq, e0, p, eps, rule.initial, rule);
  if (!ls.accepted) throw std::runtime_error("descent_step: line search stagnated");
  return {std::move(ls.u), ls.step};
}

std::pair<VectorField, SolveReport> solve(const Mesh& mesh, const ProblemSpec& spec,
                                          const VectorField& init, const SolverConfig& config) {
  spec.validate();
  if (init.mesh != &mesh || init.components != spec.components)
    throw std::invalid_argument("solve: init does not match mesh/spec");
  if (!init.finite()) throw std::invalid_argument("solve: init has non-finite values");

  // feasibility: Dirichlet data honored, free values on the sphere
  for (int a = 0; a < mesh.num_nodes(); ++a) {
    if (mesh.node_class[a] == NodeClass::Dirichlet && spec.dirichlet_data) {
      const Vec g = spec.dirichlet_data(mesh.node(a));
      if ((init.value(a) - g).norm() > 1e-12 * (1.0 + g.norm()))
        throw std::invalid_argument("solve: init violates the Dirichlet data");
    }
    if (mesh.node_class[a] == NodeClass::FreeSphere &&
        std::abs(init.value(a).norm() - 1.0) > 1e-12)
      throw std::invalid_argument("solve: init is not sphere-valued on the free boundary");
  }
  VectorField u = retract_free_boundary(init);

  const double grad_scale = mean_grad_sq(u);
  double eps0 = config.eps.initial >= 0 ? config.eps.initial : grad_scale;
  double eps_floor = config.eps.floor >= 0 ? config.eps.floor : 1e-8 * grad_scale;
  std::vector<double> stages;
  if (spec.p == 2.0) {
    stages.push_back(0.0);  // the energy is quadratic; no continuation needed
  } else {
    if (eps0 <= 0) eps0 = 1.0;
    eps_floor = std::min(std::max(eps_floor, 1e-14 * eps0), eps0);
    for (double e = eps0; e > eps_floor; e *= config.eps.decay) stages.push_back(e);
    stages.push_back(eps_floor);
  }

  SolveReport rep;
  double eps = stages.front();
  double energy = regularized_energy_total(u, spec.p, eps);
  VectorField r = project_residual(assemble_residual(u, spec.p, eps), u);
  rep.energy_trace.push_back({0, eps, energy, flat_norm(r), 0.0});

  VectorField prev_u, prev_r;
  bool have_prev = false;
  bool stagnated = false;

  for (std::size_t stage = 0; stage < stages.size(); ++stage) {
    const double eps_prev = eps;
    eps = stages[stage];
    const bool last = stage + 1 == stages.size();
    const double stage_tol = last ? config.grad_tol
                                  : std::max(config.grad_tol, 1e-3 * std::sqrt(eps));
    // carry the energy across the eps switch by the stable gap, keeping the
    // accumulated trace monotone
    if (stage > 0) energy -= regularized_energy_decrease(u, eps_prev, u, eps, spec.p);
    r = project_residual(assemble_residual(u, spec.p, eps), u);
    have_prev = false;  // BB memory is not meaningful across the eps switch
    stagnated = false;

    while (flat_norm(r) > stage_tol && rep.iterations < config.max_iters) {
      const double rsq = CMapVec(r.values.data(), r.values.size()).squaredNorm();
      double t0 = config.step.initial;
      if (have_prev) {
        // Barzilai-Borwein step from the last accepted move
        CMapVec up(prev_u.values.data(), prev_u.values.size());
        CMapVec uc(u.values.data(), u.values.size());
        CMapVec rp(prev_r.values.data(), prev_r.values.size());
        CMapVec rc(r.values.data(), r.values.size());
        const double sy = (uc - up).dot(rc - rp);
        if (sy > 1e-300) t0 = std::clamp((uc - up).squaredNorm() / sy, 1e-12, 1e6);
      }
      LineSearchResult ls = line_search(u, r, rsq, energy, spec.p, eps, t0, config.step);
      if (!ls.accepted && t0 != config.step.initial)  // a degenerate BB seed can start too low
        ls = line_search(u, r, rsq, energy, spec.p, eps, config.step.initial, config.step);
      if (!ls.accepted) {
        stagnated = true;
        break;
      }
      prev_u = std::move(u);
      prev_r = std::move(r);
      have_prev = true;
      u = std::move(ls.u);
      energy = ls.energy;
      r = project_residual(assemble_residual(u, spec.p, eps), u);
      ++rep.iterations;
      rep.energy_trace.push_back({rep.iterations, eps, energy, flat_norm(r), ls.step});
    }
    if (rep.iterations >= config.max_iters) break;
  }

  rep.final_residual_norm = flat_norm(r);
  rep.eps_final = eps;
  if (rep.energy_trace.back().eps != eps)  // schedule advanced without steps
    rep.energy_trace.push_back({rep.iterations, eps, energy, rep.final_residual_norm, 0.0});
  rep.converged = rep.final_residual_norm <= config.grad_tol;
  if (!rep.converged && stagnated && rep.final_residual_norm <= 10.0 * config.grad_tol) {
    rep.converged = true;
    rep.note = "stagnation at eps floor accepted as convergence";
  } else if (!rep.converged && rep.iterations >= config.max_iters) {
    rep.note = "max_iters exceeded";
  } else if (!rep.converged && stagnated) {
    rep.note = "line search stagnated";
  }
  return {std::move(u), std::move(rep)};
}

VectorField initial_field(const Mesh& mesh, const ProblemSpec& spec) {
  const int N = spec.components;
  VectorField u(mesh, N);
  std::vector<char> fixed(mesh.num_nodes(), 0);
  for (int a = 0; a < mesh.num_nodes(); ++a)
    if (mesh.node_class[a] == NodeClass::Dirichlet) {
      if (!spec.dirichlet_data)
        throw std::invalid_argument("initial_field: Dirichlet nodes present but no data");
      u.value(a) = spec.dirichlet_data(mesh.node(a));
      fixed[a] = 1;
    }

  const int nfree = static_cast<int>(std::count(fixed.begin(), fixed.end(), 0));
  if (nfree == mesh.num_nodes()) {
    // no Dirichlet data anywhere; a unit constant is feasible
    Vec c = Vec::Zero(N);
    c[0] = 1.0;
    return VectorField::constant(mesh, c);
  }

  // componentwise harmonic extension: one scalar stiffness factorization
  std::vector<int> unknown_of(mesh.num_nodes(), -1);
  std::vector<int> node_of(nfree);
  int idx = 0;
  for (int a = 0; a < mesh.num_nodes(); ++a)
    if (!fixed[a]) {
      unknown_of[a] = idx;
      node_of[idx++] = a;
    }

  std::vector<Eigen::Triplet<double>> trips;
  Mat rhs = Mat::Zero(nfree, N);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geom = mesh.element_geometry(e);
    auto s = mesh.simplex(e);
    for (int k = 0; k <= mesh.dim; ++k) {
      if (fixed[s[k]]) continue;
      const int row = unknown_of[s[k]];
      for (int l = 0; l <= mesh.dim; ++l) {
        double kij = 0.0;
        for (int c = 0; c < mesh.dim; ++c) kij += geom.grad(k, c) * geom.grad(l, c);
        kij *= geom.volume;
        if (fixed[s[l]]) {
          rhs.row(row) -= kij * u.value(s[l]).transpose();
        } else {
          trips.emplace_back(row, unknown_of[s[l]], kij);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> K(nfree, nfree);
  K.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(K);
  if (chol.info() != Eigen::Success)
    throw std::runtime_error("initial_field: stiffness factorization failed");
  const Mat sol = chol.solve(rhs);
  for (int i = 0; i < nfree; ++i) u.value(node_of[i]) = sol.row(i).transpose();

  // free-boundary nodes whose extension vanished get a safe unit value
  for (int a = 0; a < mesh.num_nodes(); ++a)
    if (mesh.node_class[a] == NodeClass::FreeSphere && u.value(a).norm() < 1e-14)
      u.value(a)[0] = 1.0;
  return retract_free_boundary(std::move(u));
}

}  // namespace pharm
