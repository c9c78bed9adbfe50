#include "conespectra/eigensolve.hpp"

#include <cmath>
#include <limits>

namespace conespectra {

namespace {

// Guarded Sturm recurrence: pivots of K - sigma M with tiny pivots clamped
// away from zero so the count survives near-singular probes.
int sturm_count(const TriPencil& p, double sigma) {
  const int n = p.size();
  int negatives = 0;
  double q_prev = 1.0;
  for (int i = 0; i < n; ++i) {
    const double center = p.k_diag[i] - sigma * p.m_diag[i];
    double q = center;
    if (i > 0) {
      const double b = p.k_off[i - 1];
      const double scale = std::abs(center) + std::abs(b) + 1e-300;
      double denom = q_prev;
      const double pivmin = 1e-280 * scale;
      if (std::abs(denom) < pivmin) denom = (denom < 0.0) ? -pivmin : pivmin;
      q = center - b * b / denom;
    }
    if (q < 0.0) ++negatives;
    q_prev = q;
  }
  return negatives;
}

// LDL^T factors of the shifted tridiagonal K - sigma M; valid for solving as
// long as the shift is bounded away from the spectrum.
struct TriFactor {
  Eigen::VectorXd d;
  Eigen::VectorXd l;

  bool factor(const TriPencil& p, double sigma) {
    const int n = p.size();
    d.resize(n);
    l.resize(n > 0 ? n - 1 : 0);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
      double di = p.k_diag[i] - sigma * p.m_diag[i];
      if (i > 0) di -= l[i - 1] * l[i - 1] * prev;
      if (di == 0.0 || !std::isfinite(di)) return false;
      d[i] = di;
      if (i + 1 < n) l[i] = p.k_off[i] / di;
      prev = di;
    }
    return true;
  }

  void solve(Eigen::VectorXd& x) const {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
    for (int i = 0; i < n; ++i) x[i] /= d[i];
    for (int i = n - 2; i >= 0; --i) x[i] -= l[i] * x[i + 1];
  }
};

// Symmetric diagonal equilibration M^{-1/2} K M^{-1/2}. The weight profile
// cancels row by row, so entries stay representable for any window; the
// pencil spectrum is unchanged and eigenvectors map back through M^{-1/2}.
struct Equilibrated {
  TriPencil pencil;          // unit mass
  Eigen::VectorXd inv_sqrt_m;

  explicit Equilibrated(const TriPencil& p) {
    const int n = p.size();
    inv_sqrt_m.resize(n);
    for (int i = 0; i < n; ++i) inv_sqrt_m[i] = 1.0 / std::sqrt(p.m_diag[i]);
    pencil.k_diag.resize(n);
    pencil.k_off.resize(n > 0 ? n - 1 : 0);
    pencil.m_diag = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) pencil.k_diag[i] = p.k_diag[i] * inv_sqrt_m[i] * inv_sqrt_m[i];
    for (int i = 0; i + 1 < n; ++i)
      pencil.k_off[i] = p.k_off[i] * inv_sqrt_m[i] * inv_sqrt_m[i + 1];
  }
};

// deterministic generic start vector
Eigen::VectorXd start_vector(int n) {
  Eigen::VectorXd v(n);
  std::uint64_t state = 0x243f6a8885a308d3ull;
  for (int i = 0; i < n; ++i) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    v[i] = 0.5 + static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  return v;
}

}  // namespace

Eigen::VectorXd TriPencil::apply_k(const Eigen::VectorXd& x) const {
  const int n = size();
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double v = k_diag[i] * x[i];
    if (i > 0) v += k_off[i - 1] * x[i - 1];
    if (i + 1 < n) v += k_off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

double TriPencil::form_k(const Eigen::VectorXd& x) const {
  const int n = size();
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += k_diag[i] * x[i] * x[i];
  for (int i = 0; i + 1 < n; ++i) s += 2.0 * k_off[i] * x[i] * x[i + 1];
  return s;
}

double TriPencil::form_m(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += m_diag[i] * x[i] * x[i];
  return s;
}

double pencil_lower_bound(const TriPencil& pencil) {
  const int n = pencil.size();
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double mi = std::sqrt(pencil.m_diag[i]);
    double radius = 0.0;
    if (i > 0) radius += std::abs(pencil.k_off[i - 1]) / (mi * std::sqrt(pencil.m_diag[i - 1]));
    if (i + 1 < n) radius += std::abs(pencil.k_off[i]) / (mi * std::sqrt(pencil.m_diag[i + 1]));
    lo = std::min(lo, pencil.k_diag[i] / pencil.m_diag[i] - radius);
  }
  return lo;
}

int eigenvalues_below(const TriPencil& pencil, double sigma) {
  for (int i = 0; i < pencil.size(); ++i)
    if (!(pencil.m_diag[i] > 0.0)) throw SolverError("eigenvalues_below: mass not positive");
  Equilibrated eq(pencil);
  return sturm_count(eq.pencil, sigma);
}

EigenPair kth_eigenpair(const TriPencil& pencil, int k, const EigenOptions& opts) {
  const int n = pencil.size();
  if (n < 1) throw SolverError("kth_eigenpair: empty pencil");
  if (k < 0 || k >= n) throw SolverError("kth_eigenpair: index out of range");
  for (int i = 0; i < n; ++i)
    if (!(pencil.m_diag[i] > 0.0)) throw SolverError("kth_eigenpair: mass not positive");

  Equilibrated eq(pencil);
  const TriPencil& work = eq.pencil;

  // bracket by inertia counts
  double lo = pencil_lower_bound(work);
  Eigen::VectorXd probe = Eigen::VectorXd::Ones(n);
  double hi = work.form_k(probe) / work.form_m(probe);
  double step = std::max(1.0, std::abs(hi));
  int guard = 0;
  while (sturm_count(work, hi) < k + 1) {
    hi += step;
    step *= 2.0;
    if (++guard > 200) throw SolverError("kth_eigenpair: failed to bracket the eigenvalue");
  }
  if (sturm_count(work, lo) > k) lo = hi - step;

  // Sturm bisection to near machine precision; the counts are robust where
  // Rayleigh quotients lose digits to cancellation
  int bisect_iters = 0;
  while (hi - lo > 5e-15 * (1.0 + std::abs(lo) + std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(work, mid) > k)
      hi = mid;
    else
      lo = mid;
    if (++bisect_iters > 400) break;
  }
  const double width = hi - lo;
  const double mu = 0.5 * (lo + hi);

  // inverse iteration with a shift just below the bisected value polishes
  // the eigenvector; the eigenvalue itself is taken from the bisection
  const double scale = 1.0 + std::abs(mu);
  double sigma = lo - std::max(100.0 * width, 1e-11 * scale);
  TriFactor fac;
  int backoff = 0;
  while (!fac.factor(work, sigma)) {
    sigma -= std::max(1e-9 * scale, 4.0 * (lo - sigma));
    if (++backoff > 64) throw SolverError("kth_eigenpair: factorization failed");
  }

  Eigen::VectorXd x = start_vector(n);
  x /= x.norm();
  double rq = work.form_k(x);
  double best_delta = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iterations; ++iter) {
    Eigen::VectorXd y = x;
    fac.solve(y);
    const double norm = y.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw SolverError("kth_eigenpair: iterate collapsed");
    y /= norm;
    const double rq_new = work.form_k(y);
    const double delta = std::abs(rq_new - rq);
    x.swap(y);
    rq = rq_new;
    if (delta <= opts.tol * (1.0 + std::abs(rq))) {
      converged = true;
      ++iter;
      break;
    }
    // rounding floor of the quotient: accept once the decrease stalls
    if (iter >= 3) {
      if (delta >= 0.5 * best_delta) {
        if (++stagnant >= 3) {
          converged = true;
          ++iter;
          break;
        }
      } else {
        stagnant = 0;
      }
    }
    best_delta = std::min(best_delta, delta);
  }
  if (!converged) throw SolverError("kth_eigenpair: no convergence within iteration limit");

  // map back through M^{-1/2}; unit norm above is exactly unit M-norm here
  Eigen::VectorXd v = (x.array() * eq.inv_sqrt_m.array()).matrix();

  // ground-state sign convention: mass-weighted mean positive
  double weighted_sum = 0.0;
  for (int i = 0; i < n; ++i) weighted_sum += pencil.m_diag[i] * v[i];
  if (weighted_sum < 0.0) v = -v;

  EigenPair out;
  out.value = mu;
  out.vector = v;
  out.iterations = iter + 1 + bisect_iters;
  Eigen::VectorXd r = work.apply_k(x) - mu * x;
  double den = 0.0;
  for (int i = 0; i < n; ++i)
    den = std::max(den, std::abs(work.k_diag[i] * x[i]) + std::abs(mu * x[i]));
  out.residual = den > 0.0 ? r.cwiseAbs().maxCoeff() / den : 0.0;
  return out;
}

}  // namespace conespectra
