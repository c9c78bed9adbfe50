#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "conespectra/eigensolve.hpp"
#include "conespectra/geometry.hpp"

namespace conespectra {

// Log-radial grid for cone annuli, uniform in s = ln r.
struct RadialGrid {
  double s_min = 0.0;
  double s_max = 0.0;
  int n_nodes = 0;

  RadialGrid() = default;
  RadialGrid(double s_lo, double s_hi, int n);

  Eigen::VectorXd s_nodes() const;
  Eigen::VectorXd r_nodes() const;
  double step() const { return (s_max - s_min) / (n_nodes - 1); }
};

enum class Boundary { Dirichlet, Natural };

// One-coordinate Sturm-Liouville problem
//   -(1/W) (W psi')' + V psi = mu psi    on (nodes.front(), nodes.back()),
// assembled in self-adjoint form on the given node vector. `rweight` is an
// optional extra factor R on the eigenvalue side (mass from W*R), used by the
// skin-squared weighted problems.
struct SturmLiouvilleProblem {
  Eigen::VectorXd nodes;  // strictly increasing
  std::function<double(double)> weight;
  std::function<double(double)> potential;
  std::function<double(double)> rweight;  // may be null (R = 1)
  Boundary left = Boundary::Dirichlet;
  Boundary right = Boundary::Dirichlet;

  int size() const { return static_cast<int>(nodes.size()); }
  double lo() const { return nodes[0]; }
  double hi() const { return nodes[nodes.size() - 1]; }
};

struct AssembledForms {
  TriPencil pencil;        // stiffness + mass on the free dofs
  Eigen::VectorXd dofs;    // node coordinates of the free dofs
  int offset_left = 0;     // 1 when the left boundary node was eliminated
};

// Symmetric tridiagonal stiffness and diagonal (lumped) mass; Dirichlet
// boundary rows eliminated. Element integrals of W and W*V by Gauss
// quadrature, so vanishing weights at natural/pole endpoints stay positive
// on the adjacent cells. Throws on non-finite potential values inside the
// open domain.
AssembledForms assemble(const SturmLiouvilleProblem& problem);

// Dirichlet truncation offsets shrinking toward the singular endpoint(s).
struct ExhaustionSchedule {
  std::vector<double> eps_list;  // strictly decreasing, positive

  static ExhaustionSchedule geometric(double eps0, double factor, int count);
  void validate(double domain_span) const;
};

// Node vector on [lo, hi]: uniform core plus geometric tails clustering
// toward endpoints flagged `graded`. Tail octaves are anchored at
// `eps_anchor` so that every offset eps_anchor * 2^k is hit exactly;
// nested truncations of the same lattice then give nested P1 spaces.
Eigen::VectorXd graded_nodes(double lo, double hi, bool grade_left, bool grade_right,
                             double eps_anchor, int target_n);

// Reduced link problem of a catalog cone. Homogeneous links carry no
// effective coordinate; the caller gets the flag instead of a grid.
struct LinkProblem {
  bool zero_dimensional = false;
  double constant_potential = 0.0;       // when zero_dimensional
  SturmLiouvilleProblem sl;              // otherwise
};

// Dirichlet problem on the eps-truncated join-angle domain.
//  - EuclideanFactor, m = 1: (-pi/2+eps, pi/2-eps), both ends Dirichlet
//  - EuclideanFactor, m >= 2: (0, pi/2-eps), natural axis at 0
//  - RoundLink (validation path): (0, pi), both ends natural, eps must be 0
LinkProblem suspension_problem(const ConeModel& model,
                               const std::function<double(double)>& xop_potential, double eps,
                               int n_nodes = 4000,
                               std::optional<double> eps_anchor = std::nullopt);

// Nested Dirichlet problems along the schedule; all members are carved from
// one lattice anchored at the finest offset, so domains (and P1 spaces) nest.
std::vector<LinkProblem> exhaustion(const ConeModel& model,
                                    const std::function<double(double)>& xop_potential,
                                    const ExhaustionSchedule& schedule, int n_nodes = 4000);

}  // namespace conespectra
