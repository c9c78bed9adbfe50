#include "conespectra/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conespectra/numeric.hpp"

namespace conespectra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt34 = 0.8660254037844386;   // sqrt(3/4)
constexpr double kSqrt23 = 0.8164965809277260;   // sqrt(2/3)

void push_lower(BoundReport& rep, const std::string& name, double measured, double required) {
  BoundRecord r;
  r.name = name;
  r.required = required;
  r.measured = measured;
  r.margin = measured - required;
  r.satisfied = r.margin >= 0.0;
  rep.records.push_back(std::move(r));
}

void push_upper(BoundReport& rep, const std::string& name, double measured, double required) {
  BoundRecord r;
  r.name = name;
  r.required = required;
  r.measured = measured;
  r.margin = required - measured;
  r.satisfied = r.margin >= 0.0;
  rep.records.push_back(std::move(r));
}

// linear interpolation of the link state onto an angle
double interp(const Eigen::VectorXd& nodes, const Eigen::VectorXd& values, double t) {
  if (t <= nodes[0]) return values[0];
  const int n = static_cast<int>(nodes.size());
  if (t >= nodes[n - 1]) return values[n - 1];
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (nodes[mid] <= t ? lo : hi) = mid;
  }
  const double u = (t - nodes[lo]) / (nodes[lo + 1] - nodes[lo]);
  return values[lo] * (1.0 - u) + values[lo + 1] * u;
}

// increments of the partial-integral sequence classify by their growth
bool classify_convergent(const std::vector<double>& partials) {
  if (partials.size() < 3) return true;
  const std::size_t k = partials.size();
  const double d0 = partials[k - 2] - partials[k - 3];
  const double d1 = partials[k - 1] - partials[k - 2];
  if (d1 <= 0.0) return true;
  if (d0 <= 0.0) return false;
  return d1 / d0 < 1.0;
}

}  // namespace

ExponentPair exponents_from_mu(double mu, int n) {
  if (n < 2) throw std::invalid_argument("exponents_from_mu: n must be >= 2");
  const double half = 0.5 * (n - 2);
  const double disc = half * half + mu;
  if (disc < 0.0)
    throw std::invalid_argument(
        "exponents_from_mu: negative discriminant (shift at or beyond the weighted principal "
        "eigenvalue)");
  ExponentPair out;
  out.discriminant = disc;
  const double root = std::sqrt(disc);
  out.alpha_plus = -half + root;
  out.alpha_minus = -half - root;
  return out;
}

bool BoundReport::all_satisfied() const {
  for (const BoundRecord& r : records)
    if (!r.satisfied) return false;
  return true;
}

BoundReport check_bounds(const OperatorKind& kind, int n, int k, double lambda, double mu,
                         const ExponentPair& pair) {
  BoundReport rep;
  const double half_k = 0.5 * (k - 2);

  // generic floor for adapted shifts
  push_lower(rep, "mu_above_generic_floor", mu, -half_k * half_k);

  switch (kind.tag) {
    case OperatorTag::Jacobi:
      push_lower(rep, "jacobi_mu_half_dim_bound", mu, -half_k * half_k);
      break;
    case OperatorTag::Conformal: {
      push_lower(rep, "conformal_mu_quarter_bound", mu, -0.25 * half_k * half_k);
      push_lower(rep, "conformal_alpha_plus_bound", pair.alpha_plus, -(1.0 - kSqrt34) * half_k);
      push_upper(rep, "conformal_alpha_minus_bound", pair.alpha_minus, -(1.0 + kSqrt34) * half_k);
      push_lower(rep, "alpha_minus_above_codim_floor", pair.alpha_minus,
                 -static_cast<double>(k - 2));
      push_lower(rep, "exponent_separation", pair.alpha_plus - pair.alpha_minus,
                 kSqrt34 * (k - 2));
      if (lambda > 0.0) push_upper(rep, "alpha_plus_negative", pair.alpha_plus, 0.0);
      break;
    }
    case OperatorTag::DimShiftedConformal: {
      (void)n;
      push_lower(rep, "dimshift_mu_twelfth_bound", mu, -(k - 2) * (k - 2) / 12.0);
      push_lower(rep, "dimshift_alpha_plus_bound", pair.alpha_plus, -(1.0 - kSqrt23) * half_k);
      push_upper(rep, "dimshift_alpha_minus_bound", pair.alpha_minus, -(1.0 + kSqrt23) * half_k);
      push_lower(rep, "dimshift_alpha_minus_floor", pair.alpha_minus, -static_cast<double>(k - 2));
      push_lower(rep, "dimshift_separation", pair.alpha_plus - pair.alpha_minus,
                 kSqrt23 * (k - 2));
      if (lambda > 0.0) push_upper(rep, "alpha_plus_negative", pair.alpha_plus, 0.0);
      break;
    }
    case OperatorTag::Laplacian:
    case OperatorTag::SConformal:
    case OperatorTag::ABLaplacian:
      break;  // only the generic floor applies
  }
  return rep;
}

ResidualReport radial_residual(const ExponentPair& pair, const SpectralResult& result,
                               const CrossSectionOperator& xop, double r_lo, double r_hi,
                               const std::vector<int>& resolutions, double eta) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo))
    throw std::invalid_argument("radial_residual: annulus must satisfy 0 < r_lo < r_hi");
  if (resolutions.size() < 2)
    throw std::invalid_argument("radial_residual: need at least two resolutions");

  const ConeModel& model = xop.model;
  const double alpha = pair.alpha_plus;
  const double n = model.n;
  const double mu = result.mu;

  ResidualReport rep;
  for (int res : resolutions) {
    if (res < 8) throw std::invalid_argument("radial_residual: resolution too small");
    const double hr = (r_hi - r_lo) / (res - 1);
    double worst = 0.0;

    if (xop.homogeneous) {
      // radial check: the link factor is constant and L^x psi = mu psi exactly
      for (int i = 1; i + 1 < res; ++i) {
        const double r = r_lo + hr * i;
        const double vm = std::pow(r - hr, alpha);
        const double v0 = std::pow(r, alpha);
        const double vp = std::pow(r + hr, alpha);
        const double d2 = (vp - 2.0 * v0 + vm) / (hr * hr);
        const double d1 = (vp - vm) / (2.0 * hr);
        const double res_val = -d2 - (n - 1) / r * d1 + mu / (r * r) * v0;
        worst = std::max(worst, std::abs(res_val));
      }
    } else {
      // tensor grid over the interior of the link state's domain
      const Eigen::VectorXd& tn = result.nodes;
      if (tn.size() < 5)
        throw std::invalid_argument("radial_residual: link state too coarse");
      const double t_lo = tn[0], t_hi = tn[tn.size() - 1];
      const double margin = 0.05 * (t_hi - t_lo);
      const int tin = res;
      const double ht = (t_hi - t_lo - 2.0 * margin) / (tin - 1);
      auto psi_at = [&](double t) { return interp(tn, result.psi_midpoint_one, t); };
      for (int i = 1; i + 1 < res; ++i) {
        const double r = r_lo + hr * i;
        for (int j = 1; j + 1 < tin; ++j) {
          const double t = t_lo + margin + ht * j;
          const double w0 = model.weight(t);
          const double wp = model.weight(t + 0.5 * ht);
          const double wm = model.weight(t - 0.5 * ht);
          const double pm = psi_at(t - ht), p0 = psi_at(t), pp = psi_at(t + ht);
          const double lap_t = (wp * (pp - p0) - wm * (p0 - pm)) / (ht * ht * w0);
          const double lx = -lap_t + xop.potential(t) * p0;
          const double rm = std::pow(r - hr, alpha), r0 = std::pow(r, alpha),
                       rp = std::pow(r + hr, alpha);
          const double d2 = (rp - 2.0 * r0 + rm) / (hr * hr) * p0;
          const double d1 = (rp - rm) / (2.0 * hr) * p0;
          const double res_val = -d2 - (n - 1) / r * d1 + lx * r0 / (r * r);
          worst = std::max(worst, std::abs(res_val));
        }
      }
    }
    rep.resolutions.push_back(res);
    rep.residuals.push_back(worst);
  }

  std::vector<double> hs;
  for (int res : resolutions) hs.push_back(1.0 / res);
  rep.order = fit_order(hs, rep.residuals);

  // self-reproduction under the scaling action
  double dev = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / 15.0;
    const double direct = std::pow(r, alpha);
    const double scaled = std::pow(eta * r, alpha) * std::pow(eta, -alpha);
    dev = std::max(dev, std::abs(scaled - direct) / std::abs(direct));
  }
  rep.scaling_fixed_point_dev = dev;
  return rep;
}

LpReport lp_report(const SpectralResult& result, const CrossSectionOperator& xop,
                   const std::vector<double>& p_list, const std::vector<double>& q_list) {
  const ConeModel& model = xop.model;
  LpReport rep;
  const int k_link = model.n;  // dimension of the cone carrying psi
  rep.guaranteed_link_threshold = k_link > 3 ? double(k_link - 1) / (k_link - 3) : 1e300;
  rep.guaranteed_radial_threshold = k_link > 2 ? double(k_link) / (k_link - 2) : 1e300;

  if (!p_list.empty() && xop.homogeneous)
    throw std::invalid_argument("lp_report: link exhaustion data required for p classification");

  // weighted mean of psi^p over the reduced angle, normalized so that
  // int_link psi^p dV = link_volume * mean
  auto link_mean_pow = [&](double p, double t_cut) {
    const Eigen::VectorXd& tn = result.nodes;
    const Eigen::VectorXd& psi = result.psi_midpoint_one;
    double num = 0.0, den = 0.0;
    for (int e = 0; e + 1 < tn.size(); ++e) {
      const double tm = 0.5 * (tn[e] + tn[e + 1]);
      const double wq = model.weight(tm) * (tn[e + 1] - tn[e]);
      den += wq;
      if (std::abs(tm) > t_cut) continue;
      const double pm = 0.5 * (psi[e] + psi[e + 1]);
      num += wq * std::pow(std::abs(pm), p);
    }
    return den > 0.0 ? num / den : 0.0;
  };

  // |psi|_L1 / inf psi
  if (xop.homogeneous) {
    rep.l1_to_inf_ratio = model.link_volume;  // constant state
  } else {
    const Eigen::VectorXd& psi = result.psi_midpoint_one;
    double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < psi.size(); ++i) inf = std::min(inf, std::abs(psi[i]));
    rep.l1_to_inf_ratio = model.link_volume * link_mean_pow(1.0, 0.5 * kPi) / inf;
  }

  for (double p : p_list) {
    LpRecord rec;
    rec.exponent = p;
    rec.beyond_guaranteed_range = p >= rep.guaranteed_link_threshold;
    const Eigen::VectorXd& tn = result.nodes;
    const double eps_f = 0.5 * kPi - tn[tn.size() - 1];  // finest available offset
    for (int level = 0; level < 6; ++level) {
      const double cut = eps_f * std::pow(2.0, 5 - level);
      rec.partial_integrals.push_back(model.link_volume *
                                      link_mean_pow(p, 0.5 * kPi - cut));
    }
    rec.convergent = classify_convergent(rec.partial_integrals);
    rep.link_records.push_back(std::move(rec));
  }

  for (double q : q_list) {
    LpRecord rec;
    rec.exponent = q;
    rec.beyond_guaranteed_range = q >= rep.guaranteed_radial_threshold;
    // int over B_1 of (psi r^alpha)^q against r^{n-1} dr, truncated at r = eps
    double alpha = 0.0;
    {
      ExponentPair pair = exponents_from_mu(result.mu, model.n);
      alpha = pair.alpha_plus;
    }
    const double link_factor =
        xop.homogeneous ? model.link_volume
                        : model.link_volume * link_mean_pow(q, 0.5 * kPi);
    for (int level = 0; level < 6; ++level) {
      const double eps = 1e-2 * std::pow(2.0, -(level));
      const int steps = 2000;
      double integral = 0.0;
      const double s_lo = std::log(eps);
      const double h = -s_lo / steps;
      for (int i = 0; i < steps; ++i) {
        const double s = s_lo + (i + 0.5) * h;
        const double r = std::exp(s);
        integral += std::pow(r, q * alpha + model.n) * h;  // r^{n-1} dr = r^n ds
      }
      rec.partial_integrals.push_back(integral * link_factor);
    }
    rec.convergent = classify_convergent(rec.partial_integrals);
    rep.radial_records.push_back(std::move(rec));
  }

  // sup over the skin sub-level band, rho^2 = lambda / |mu|
  if (xop.lambda > 0.0 && !xop.homogeneous && result.mu < 0.0) {
    const double rho = std::sqrt(xop.lambda / std::abs(result.mu));
    const double sx0 = skin_cross_section(model, xop.w, 0.0);
    const double cos_edge = rho * sx0;  // skin(t) <= 1/rho iff cos t >= rho * sx0
    if (cos_edge < 1.0) {
      const double band = std::acos(cos_edge);
      double sup = 0.0;
      for (int i = 0; i < result.nodes.size(); ++i)
        if (std::abs(result.nodes[i]) <= band)
          sup = std::max(sup, std::abs(result.psi_midpoint_one[i]));
      const double l1 = model.link_volume * link_mean_pow(1.0, 0.5 * kPi);
      if (sup > 0.0 && l1 > 0.0) {
        rep.sublevel_applicable = true;
        rep.sublevel_rho = rho;
        rep.sublevel_sup_ratio = sup / l1;
      }
    }
  }

  return rep;
}

}  // namespace conespectra
