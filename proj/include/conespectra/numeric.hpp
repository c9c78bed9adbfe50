#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace conespectra {

// Deterministic RNG. Raw mt19937_64 output is mapped to doubles by hand so
// that streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

// Random smooth test function on a grid of N nodes over [0, 1]: a small sine
// series, exactly zero at both ends.
Eigen::VectorXd random_bump(Rng& rng, int n_nodes, int max_modes = 5);

// 4-point Gauss-Legendre on [a, b]
double gauss4(const std::function<double(double)>& f, double a, double b);

// Empirical convergence order from a sequence of values converging at a
// geometric parameter ratio (default: parameter halves each step).
// Returns the per-triple orders log_ratio((v[i]-v[i+1])/(v[i+1]-v[i+2])).
std::vector<double> measured_orders(const std::vector<double>& values, double ratio = 2.0);

// Median of the measured orders; NaN when fewer than 3 values.
double measured_order(const std::vector<double>& values, double ratio = 2.0);

// One Richardson step from the tail of the sequence, eliminating the leading
// error term of the given order under parameter ratio `ratio`.
double richardson_tail(const std::vector<double>& values, double order, double ratio = 2.0);

// Fit of log(err) = log(c) + order*log(h) by least squares.
double fit_order(const std::vector<double>& hs, const std::vector<double>& errs);

}  // namespace conespectra
