#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "conespectra/operators.hpp"
#include "conespectra/spectral.hpp"

namespace conespectra {

// Radial growth exponents of the two distinguished solutions
// psi(omega) r^{alpha+-}, roots of alpha^2 + (n-2) alpha - mu = 0.
struct ExponentPair {
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  double discriminant = 0.0;  // ((n-2)/2)^2 + mu
};

// Throws when the discriminant is negative (shift at or beyond the weighted
// principal eigenvalue; no positive product solutions).
ExponentPair exponents_from_mu(double mu, int n);

struct BoundRecord {
  std::string name;
  double required = 0.0;
  double measured = 0.0;
  double margin = 0.0;   // measured - required, oriented so that >= 0 passes
  bool satisfied = false;
};

struct BoundReport {
  std::vector<BoundRecord> records;
  bool all_satisfied() const;
};

// Applicable eigenvalue/exponent bounds per operator kind. `n` is the
// operator's dimensional parameter (n_shift for the shifted conformal
// Laplacian), `k` the cone dimension carrying the radial variable.
BoundReport check_bounds(const OperatorKind& kind, int n, int k, double lambda, double mu,
                         const ExponentPair& pair);

struct ResidualReport {
  std::vector<int> resolutions;
  std::vector<double> residuals;  // interior max-norm per resolution
  double order = 0.0;             // fitted convergence order
  double scaling_fixed_point_dev = 0.0;  // Psi(eta x) eta^{-alpha} vs Psi(x)
};

// Applies the discretized polar operator to psi(omega) r^alpha on the
// annulus and reports the interior residual decay. For homogeneous links
// the check is radial; Euclidean-factor models use the (r, t) tensor grid
// with the supplied link state.
ResidualReport radial_residual(const ExponentPair& pair, const SpectralResult& result,
                               const CrossSectionOperator& xop, double r_lo, double r_hi,
                               const std::vector<int>& resolutions, double eta = 3.0);

struct LpRecord {
  double exponent = 0.0;
  std::vector<double> partial_integrals;
  bool convergent = false;
  bool beyond_guaranteed_range = false;
};

struct LpReport {
  std::vector<LpRecord> link_records;    // int W psi^p over the link exhaustion
  std::vector<LpRecord> radial_records;  // int (psi r^{alpha+})^q over B_1
  double l1_to_inf_ratio = 0.0;          // |psi|_L1 / inf psi
  double guaranteed_link_threshold = 0.0;     // (k-1)/(k-3)
  double guaranteed_radial_threshold = 0.0;   // k/(k-2)
  // sup of psi over the skin sub-level band {skin <= 1/rho}, rho^2 = lambda/|mu|,
  // as a multiple of |psi|_L1; positive shifts on singular links only
  bool sublevel_applicable = false;
  double sublevel_rho = 0.0;
  double sublevel_sup_ratio = 0.0;
};

// Growth classification of the truncated integrals over the exhaustion; the
// guaranteed ranges use the dimension of the cone the state lives on.
LpReport lp_report(const SpectralResult& result, const CrossSectionOperator& xop,
                   const std::vector<double>& p_list, const std::vector<double>& q_list);

}  // namespace conespectra
