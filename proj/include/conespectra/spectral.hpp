#pragma once

#include <Eigen/Dense>
#include <vector>

#include "conespectra/mesh.hpp"
#include "conespectra/operators.hpp"

namespace conespectra {

struct SpectralResult {
  double mu = 0.0;                    // principal eigenvalue of L^x
  Eigen::VectorXd nodes;              // link angle samples (empty for closed form)
  Eigen::VectorXd psi;                // ground state, weighted L^2 = 1
  Eigen::VectorXd psi_midpoint_one;   // same state scaled to 1 at the domain midpoint
  std::vector<double> mu_sequence;    // exhaustion values
  double mu_extrapolated = 0.0;
  double measured_order = 0.0;        // slope used by the extrapolation
  int iterations = 0;
  double residual = 0.0;
  bool closed_form = false;
};

// Ground pair of L^x. Homogeneous links reduce to the constant-potential
// closed form; otherwise inverse power iteration on the assembled pencil.
SpectralResult principal_eigen_link(const CrossSectionOperator& xop, int n_nodes = 4000);

// Dirichlet truncations shrinking to the singular link; mu per member,
// Richardson limit from the measured slope of the tail, ground state
// extrapolated pointwise on the shared interior lattice.
SpectralResult dirichlet_exhaustion(const CrossSectionOperator& xop,
                                    const ExhaustionSchedule& schedule, int n_nodes = 4000);

struct WeightedEigenEstimate {
  std::vector<double> windows;   // log-radius half-widths S_j
  std::vector<double> values;    // lambda(S_j)
  double extrapolated = 0.0;     // lambda^skin
};

// Principal eigenvalue of the skin^2-weighted problem on [-S, S] in s = ln r
// with Dirichlet ends; lambda(S) decreases to lambda^skin at O(S^-2).
WeightedEigenEstimate weighted_principal_eigenvalue(const OperatorKind& kind,
                                                    const ConeModel& model, double w,
                                                    const std::vector<double>& windows,
                                                    int n_nodes = 4000);

// Lowest eigenvalue of the AB-Laplacian quotient with natural boundary
// conditions on the radial patch [r_lo, r_hi] (full symmetric link sector).
double neumann_eigenvalue(const ShiftedOperator& op, const ConeModel& model, double r_lo,
                          double r_hi, int n_nodes = 400);

}  // namespace conespectra
