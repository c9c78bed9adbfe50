#include "conespectra/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "conespectra/numeric.hpp"

namespace conespectra {

namespace {

constexpr double kPi = std::numbers::pi;

std::function<double(double)> join_weight(int m, int core_link_dim) {
  return [m, core_link_dim](double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    if (c < 0.0) return 0.0;
    const double sp = (m == 1) ? 1.0 : std::pow(std::abs(s), m - 1);
    return sp * std::pow(c, core_link_dim);
  };
}

}  // namespace

RadialGrid::RadialGrid(double s_lo, double s_hi, int n) : s_min(s_lo), s_max(s_hi), n_nodes(n) {
  if (!(s_min < s_max)) throw std::invalid_argument("RadialGrid: s_min < s_max required");
  if (n_nodes < 16) throw std::invalid_argument("RadialGrid: N >= 16 required");
}

Eigen::VectorXd RadialGrid::s_nodes() const {
  return Eigen::VectorXd::LinSpaced(n_nodes, s_min, s_max);
}

Eigen::VectorXd RadialGrid::r_nodes() const { return s_nodes().array().exp(); }

AssembledForms assemble(const SturmLiouvilleProblem& problem) {
  const int n = problem.size();
  if (n < 3) throw std::invalid_argument("assemble: need at least 3 nodes");
  for (int i = 0; i + 1 < n; ++i)
    if (!(problem.nodes[i] < problem.nodes[i + 1]))
      throw std::invalid_argument("assemble: nodes must be strictly increasing");

  Eigen::VectorXd k_diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd k_off = Eigen::VectorXd::Zero(n - 1);
  Eigen::VectorXd m_diag = Eigen::VectorXd::Zero(n);

  for (int e = 0; e + 1 < n; ++e) {
    const double a = problem.nodes[e];
    const double b = problem.nodes[e + 1];
    const double h = b - a;

    auto wv = [&](double t) {
      const double v = problem.potential(t);
      if (!std::isfinite(v))
        throw std::invalid_argument("assemble: non-finite potential inside the open domain");
      return problem.weight(t) * v;
    };
    auto w_phi_left = [&](double t) { return problem.weight(t) * (b - t) / h; };
    auto w_phi_right = [&](double t) { return problem.weight(t) * (t - a) / h; };
    auto wv_phi_left = [&](double t) { return wv(t) * (b - t) / h; };
    auto wv_phi_right = [&](double t) { return wv(t) * (t - a) / h; };

    const double w_int = gauss4([&](double t) { return problem.weight(t); }, a, b);
    const double stiff = w_int / (h * h);
    k_diag[e] += stiff;
    k_diag[e + 1] += stiff;
    k_off[e] -= stiff;

    // lumped potential and mass keep the pencil tridiagonal/diagonal
    k_diag[e] += gauss4(wv_phi_left, a, b);
    k_diag[e + 1] += gauss4(wv_phi_right, a, b);

    if (problem.rweight) {
      auto wr_phi_left = [&](double t) { return w_phi_left(t) * problem.rweight(t); };
      auto wr_phi_right = [&](double t) { return w_phi_right(t) * problem.rweight(t); };
      m_diag[e] += gauss4(wr_phi_left, a, b);
      m_diag[e + 1] += gauss4(wr_phi_right, a, b);
    } else {
      m_diag[e] += gauss4(w_phi_left, a, b);
      m_diag[e + 1] += gauss4(w_phi_right, a, b);
    }
  }

  const int drop_left = (problem.left == Boundary::Dirichlet) ? 1 : 0;
  const int drop_right = (problem.right == Boundary::Dirichlet) ? 1 : 0;
  const int m = n - drop_left - drop_right;
  if (m < 1) throw std::invalid_argument("assemble: no free dofs");

  AssembledForms out;
  out.offset_left = drop_left;
  out.pencil.k_diag = k_diag.segment(drop_left, m);
  out.pencil.k_off = k_off.segment(drop_left, m > 1 ? m - 1 : 0);
  out.pencil.m_diag = m_diag.segment(drop_left, m);
  out.dofs = problem.nodes.segment(drop_left, m);
  return out;
}

ExhaustionSchedule ExhaustionSchedule::geometric(double eps0, double factor, int count) {
  if (!(eps0 > 0.0) || !(factor > 0.0) || factor >= 1.0 || count < 1)
    throw std::invalid_argument("ExhaustionSchedule: need eps0 > 0, factor in (0,1), count >= 1");
  ExhaustionSchedule s;
  double e = eps0;
  for (int i = 0; i < count; ++i, e *= factor) s.eps_list.push_back(e);
  return s;
}

void ExhaustionSchedule::validate(double domain_span) const {
  if (eps_list.empty()) throw std::invalid_argument("ExhaustionSchedule: empty schedule");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("ExhaustionSchedule: offsets must be > 0");
    if (!(eps_list[i] < domain_span / 4.0))
      throw std::invalid_argument("ExhaustionSchedule: offset too large for the domain");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("ExhaustionSchedule: offsets must be strictly decreasing");
  }
}

Eigen::VectorXd graded_nodes(double lo, double hi, bool grade_left, bool grade_right,
                             double eps_anchor, int target_n) {
  if (!(lo < hi)) throw std::invalid_argument("graded_nodes: lo < hi required");
  if (target_n < 16) throw std::invalid_argument("graded_nodes: N >= 16 required");
  const double span = hi - lo;

  std::set<double> nodes;
  nodes.insert(lo);
  nodes.insert(hi);

  const int sides = (grade_left ? 1 : 0) + (grade_right ? 1 : 0);
  double tail_span = 0.0;
  if (sides > 0) {
    if (!(eps_anchor > 0.0) || eps_anchor >= span / 4.0)
      throw std::invalid_argument("graded_nodes: eps_anchor must lie in (0, span/4)");
    tail_span = std::min(0.2 * span, span / (2.0 * sides + 1.0));
    const int octaves = std::max(1, static_cast<int>(std::ceil(std::log2(tail_span / eps_anchor))));
    int per_octave = static_cast<int>(std::lround(0.45 * target_n / (sides * octaves)));
    per_octave = std::clamp(per_octave, 6, 96);

    auto add_tail = [&](bool from_right) {
      for (int j = 0; j < octaves; ++j) {
        const double tau0 = eps_anchor * std::pow(2.0, j);
        for (int l = 0; l < per_octave; ++l) {
          const double tau = tau0 * (1.0 + static_cast<double>(l) / per_octave);
          if (tau >= tail_span) break;
          nodes.insert(from_right ? hi - tau : lo + tau);
        }
      }
    };
    if (grade_right) add_tail(true);
    if (grade_left) add_tail(false);
  }

  const double core_lo = grade_left ? lo + tail_span : lo;
  const double core_hi = grade_right ? hi - tail_span : hi;
  const int used = static_cast<int>(nodes.size());
  const int core_n = std::max(8, target_n - used);
  for (int i = 0; i <= core_n; ++i)
    nodes.insert(core_lo + (core_hi - core_lo) * i / core_n);

  Eigen::VectorXd out(static_cast<int>(nodes.size()));
  int i = 0;
  double prev = lo - 1.0;
  for (double t : nodes) {
    // drop nearly coincident nodes where the lattices intersect
    if (i > 0 && t - prev < 1e-13 * span) continue;
    out[i++] = t;
    prev = t;
  }
  return out.head(i).eval();
}

LinkProblem suspension_problem(const ConeModel& model,
                               const std::function<double(double)>& xop_potential, double eps,
                               int n_nodes, std::optional<double> eps_anchor) {
  LinkProblem out;

  if (model.homogeneous_link && model.spec.family == Family::ProductOfSpheres) {
    out.zero_dimensional = true;
    out.constant_potential = xop_potential ? xop_potential(0.0) : 0.0;
    return out;
  }
  if (!(eps >= 0.0)) throw std::invalid_argument("suspension_problem: eps must be >= 0");

  if (model.spec.family == Family::RoundLink) {
    // round S^{link_dim} as suspension of S^{link_dim - 1}; regular poles
    if (eps != 0.0)
      throw std::invalid_argument("suspension_problem: round link has no singular endpoint");
    const int d = model.link_dim;
    out.sl.nodes = graded_nodes(0.0, kPi, false, false, 0.0, n_nodes);
    out.sl.weight = [d](double t) { return std::pow(std::sin(t), d - 1); };
    out.sl.potential = xop_potential ? xop_potential : [](double) { return 0.0; };
    out.sl.left = Boundary::Natural;
    out.sl.right = Boundary::Natural;
    return out;
  }

  // EuclideanFactor join coordinate
  const int m = model.ef_m;
  const double hi = 0.5 * kPi - eps;
  const double lo = (m == 1) ? -(0.5 * kPi - eps) : 0.0;
  if (!(lo < hi)) throw std::invalid_argument("suspension_problem: empty truncated domain");
  if (eps == 0.0)
    throw std::invalid_argument("suspension_problem: singular endpoint requires eps > 0");

  const double anchor = eps_anchor.value_or(eps);
  if (anchor > eps) throw std::invalid_argument("suspension_problem: eps_anchor exceeds eps");

  out.sl.nodes = graded_nodes(lo, hi, m == 1, true, anchor, n_nodes);
  out.sl.weight = join_weight(m, model.core_link_dim);
  out.sl.potential = xop_potential;
  out.sl.left = (m == 1) ? Boundary::Dirichlet : Boundary::Natural;
  out.sl.right = Boundary::Dirichlet;
  return out;
}

std::vector<LinkProblem> exhaustion(const ConeModel& model,
                                    const std::function<double(double)>& xop_potential,
                                    const ExhaustionSchedule& schedule, int n_nodes) {
  if (model.homogeneous_link)
    throw std::invalid_argument("exhaustion: homogeneous link has no truncation coordinate");
  const double span = model.angle_hi() - model.angle_lo();
  schedule.validate(span);

  // master lattice for the finest member, with every schedule boundary pinned
  const double anchor = schedule.eps_list.back();
  LinkProblem finest = suspension_problem(model, xop_potential, anchor, n_nodes, anchor);
  {
    std::set<double> all(finest.sl.nodes.data(), finest.sl.nodes.data() + finest.sl.nodes.size());
    for (double eps : schedule.eps_list) {
      all.insert(0.5 * kPi - eps);
      if (model.ef_m == 1) all.insert(-(0.5 * kPi - eps));
    }
    Eigen::VectorXd merged(static_cast<int>(all.size()));
    int i = 0;
    double prev = -1e300;
    for (double t : all) {
      if (i > 0 && t - prev < 1e-13) continue;
      merged[i++] = t;
      prev = t;
    }
    finest.sl.nodes = merged.head(i).eval();
  }

  std::vector<LinkProblem> out;
  for (double eps : schedule.eps_list) {
    const double hi = 0.5 * kPi - eps;
    const double lo = (model.ef_m == 1) ? -hi : 0.0;
    LinkProblem member;
    member.sl = finest.sl;
    std::vector<double> nd;
    nd.reserve(finest.sl.nodes.size());
    const double snap = 1e-12;
    for (int i = 0; i < finest.sl.nodes.size(); ++i) {
      const double t = finest.sl.nodes[i];
      if (t > lo - snap && t < hi + snap) nd.push_back(std::clamp(t, lo, hi));
    }
    if (nd.size() < 3) throw std::invalid_argument("exhaustion: truncated domain too small");
    member.sl.nodes = Eigen::Map<Eigen::VectorXd>(nd.data(), static_cast<int>(nd.size())).eval();
    out.push_back(std::move(member));
  }
  return out;
}

}  // namespace conespectra
