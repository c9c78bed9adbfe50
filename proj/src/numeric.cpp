#include "conespectra/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace conespectra {

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Eigen::VectorXd random_bump(Rng& rng, int n_nodes, int max_modes) {
  if (n_nodes < 2) throw std::invalid_argument("random_bump: need at least 2 nodes");
  const int modes = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_modes));
  std::vector<double> amp(modes);
  for (int k = 0; k < modes; ++k) amp[k] = rng.uniform(-1.0, 1.0) / (k + 1);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n_nodes);
  for (int j = 1; j + 1 < n_nodes; ++j) {
    const double x = static_cast<double>(j) / (n_nodes - 1);
    double v = 0.0;
    for (int k = 0; k < modes; ++k) v += amp[k] * std::sin((k + 1) * std::numbers::pi * x);
    f[j] = v;
  }
  return f;
}

double gauss4(const std::function<double(double)>& f, double a, double b) {
  static const double x[2] = {0.3399810435848563, 0.8611363115940526};
  static const double w[2] = {0.6521451548625461, 0.3478548451374538};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    s += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
  return half * s;
}

std::vector<double> measured_orders(const std::vector<double>& values, double ratio) {
  std::vector<double> orders;
  for (std::size_t i = 0; i + 2 < values.size(); ++i) {
    const double d0 = values[i] - values[i + 1];
    const double d1 = values[i + 1] - values[i + 2];
    if (d0 * d1 <= 0.0) continue;  // non-monotone tail, skip
    orders.push_back(std::log(d0 / d1) / std::log(ratio));
  }
  return orders;
}

double measured_order(const std::vector<double>& values, double ratio) {
  std::vector<double> orders = measured_orders(values, ratio);
  if (orders.empty()) return std::nan("");
  std::sort(orders.begin(), orders.end());
  return orders[orders.size() / 2];
}

double richardson_tail(const std::vector<double>& values, double order, double ratio) {
  if (values.size() < 2) throw std::invalid_argument("richardson_tail: need >= 2 values");
  if (!std::isfinite(order) || order <= 0.0) return values.back();
  const double last = values[values.size() - 1];
  const double prev = values[values.size() - 2];
  const double f = std::pow(ratio, order);
  return last + (last - prev) / (f - 1.0);
}

double fit_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  if (hs.size() != errs.size() || hs.size() < 2)
    throw std::invalid_argument("fit_order: need matching sequences of length >= 2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(errs[i] > 0.0) || !(hs[i] > 0.0)) continue;
    const double x = std::log(hs[i]);
    const double y = std::log(errs[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n < 2) return std::nan("");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace conespectra
