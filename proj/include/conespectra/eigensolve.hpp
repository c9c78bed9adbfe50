#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace conespectra {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symmetric tridiagonal pencil K x = mu M x with diagonal mass M > 0.
struct TriPencil {
  Eigen::VectorXd k_diag;  // size N
  Eigen::VectorXd k_off;   // size N-1
  Eigen::VectorXd m_diag;  // size N, strictly positive

  int size() const { return static_cast<int>(k_diag.size()); }
  Eigen::VectorXd apply_k(const Eigen::VectorXd& x) const;
  double form_k(const Eigen::VectorXd& x) const;  // x^T K x
  double form_m(const Eigen::VectorXd& x) const;  // x^T M x
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // M-normalized, positive-sign convention
  int iterations = 0;
  double residual = 0.0;
};

struct EigenOptions {
  double tol = 1e-12;       // relative eigenvalue increment
  int max_iterations = 10000;
};

// Strict lower bound for the pencil spectrum (Gershgorin on the congruent
// standard problem).
double pencil_lower_bound(const TriPencil& pencil);

// Number of pencil eigenvalues strictly below sigma (Sturm sequence of the
// shifted LDL^T pivots).
int eigenvalues_below(const TriPencil& pencil, double sigma);

// k-th smallest eigenpair (k = 0 is the ground pair): Sturm bisection for the
// value, shifted inverse power iteration for the vector, Rayleigh-quotient
// polish to `tol`. Throws SolverError on failure.
EigenPair kth_eigenpair(const TriPencil& pencil, int k, const EigenOptions& opts = {});

inline EigenPair lowest_eigenpair(const TriPencil& pencil, const EigenOptions& opts = {}) {
  return kth_eigenpair(pencil, 0, opts);
}

}  // namespace conespectra
