#include "conespectra/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace conespectra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// distances from one center, truncated at the radius bound
void ball_distances(const PointCloud& cloud, int source, double radius,
                    std::vector<std::pair<int, double>>& out) {
  out.clear();
  static thread_local std::vector<double> dist;
  static thread_local std::vector<int> stamp;
  static thread_local int cur = 0;
  if (static_cast<int>(dist.size()) != cloud.size()) {
    dist.assign(cloud.size(), kInf);
    stamp.assign(cloud.size(), 0);
    cur = 0;
  }
  ++cur;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  auto get = [&](int i) { return stamp[i] == cur ? dist[i] : kInf; };
  auto set = [&](int i, double d) {
    stamp[i] = cur;
    dist[i] = d;
  };
  set(source, 0.0);
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > get(u)) continue;
    out.emplace_back(u, d);
    for (int e = cloud.adj_offsets[u]; e < cloud.adj_offsets[u + 1]; ++e) {
      const int v = cloud.adj_index[e];
      const double nd = d + cloud.adj_len[e];
      if (nd <= radius && nd < get(v)) {
        set(v, nd);
        heap.emplace(nd, v);
      }
    }
  }
}

}  // namespace

HardyDirect direct_hardy(const ConeModel& model, const SkinField& skin,
                         const std::vector<double>& windows, int n_nodes) {
  if (skin.zero_field)
    throw std::invalid_argument(
        "direct_hardy: zero skin field (totally geodesic, Hardy trivial by convention)");
  if (!model.homogeneous_link)
    throw std::invalid_argument("direct_hardy: homogeneous-link models only");
  if (windows.empty()) throw std::invalid_argument("direct_hardy: need at least one window");

  const double a2 = model.a2_const;
  const double sx = skin.a_link + skin.w;
  const double exponent = model.n - 2;

  HardyDirect out;
  for (double S : windows) {
    if (!(S > 0.0) || exponent * S > 600.0)
      throw std::invalid_argument("direct_hardy: window out of range");
    // window-relative coordinates; the e^{(n-2)s} prefactor cancels in the quotient
    const double span = 2.0 * S;
    SturmLiouvilleProblem p;
    p.nodes = Eigen::VectorXd::LinSpaced(n_nodes, 0.0, 1.0);
    const double rate = exponent * span;
    p.weight = [rate](double u) { return std::exp(rate * (u - 0.5)); };
    p.potential = [a2, span](double) { return a2 * span * span; };
    p.rweight = [sx, span](double) { return sx * sx * span * span; };
    p.left = Boundary::Dirichlet;
    p.right = Boundary::Dirichlet;
    AssembledForms forms = assemble(p);
    out.windows.push_back(S);
    out.values.push_back(lowest_eigenpair(forms.pencil).value);
  }
  if (out.values.size() >= 2) {
    const double s1 = out.windows[out.windows.size() - 2];
    const double s2 = out.windows.back();
    const double l1 = out.values[out.values.size() - 2];
    const double l2 = out.values.back();
    const double c = (l1 - l2) / (1.0 / (s1 * s1) - 1.0 / (s2 * s2));
    out.k_direct = l2 - c / (s2 * s2);
  } else {
    out.k_direct = out.values.back();
  }
  out.metric_corollary = out.k_direct / (skin.lipschitz * skin.lipschitz);
  return out;
}

Cover build_cover(const PointCloud& cloud, const Eigen::VectorXd& skin_values, double xi) {
  const int n = cloud.size();
  if (skin_values.size() != n)
    throw std::invalid_argument("build_cover: skin/cloud size mismatch");
  if (!(xi > 0.0)) throw std::invalid_argument("build_cover: xi must be > 0");

  std::vector<int> regular;
  for (int i = 0; i < n; ++i)
    if (skin_values[i] > 0.0) regular.push_back(i);
  if (regular.empty()) throw std::invalid_argument("build_cover: empty regular part");

  // measured Lipschitz constant of delta over adjacent pairs
  double lip = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int e = cloud.adj_offsets[i]; e < cloud.adj_offsets[i + 1]; ++e) {
      const int j = cloud.adj_index[e];
      if (j <= i || skin_values[i] <= 0.0 || skin_values[j] <= 0.0) continue;
      lip = std::max(lip,
                     std::abs(1.0 / skin_values[i] - 1.0 / skin_values[j]) / cloud.adj_len[e]);
    }
  }
  if (lip > 0.0 && xi >= 1.0 / (1e3 * lip))
    std::cerr << "build_cover: warning: xi = " << xi << " exceeds the soft bound "
              << 1.0 / (1e3 * lip) << " from the measured Lipschitz constant\n";

  // decreasing skin order, near the singularity first
  std::sort(regular.begin(), regular.end(), [&](int a, int b) {
    if (skin_values[a] != skin_values[b]) return skin_values[a] > skin_values[b];
    return a < b;
  });

  Cover cover;
  cover.xi = xi;
  std::vector<double> theta_all(n, 0.0);
  for (int i : regular) theta_all[i] = xi / skin_values[i];

  std::vector<char> covered(n, 0);
  std::vector<std::pair<int, double>> reach;
  for (int p : regular) {
    if (covered[p]) continue;  // p lies inside an accepted center's ball
    cover.centers.push_back(p);
    ball_distances(cloud, p, theta_all[p], reach);
    for (auto [v, d] : reach) {
      (void)d;
      covered[v] = 1;
    }
  }
  cover.theta.resize(static_cast<int>(cover.centers.size()));
  for (std::size_t i = 0; i < cover.centers.size(); ++i)
    cover.theta[static_cast<int>(i)] = theta_all[cover.centers[i]];

  // covering number at rho = 1 and the structural flags
  std::vector<int> count(n, 0);
  cover.separation_ok = true;
  for (std::size_t ci = 0; ci < cover.centers.size(); ++ci) {
    const int c = cover.centers[ci];
    ball_distances(cloud, c, cover.theta[static_cast<int>(ci)], reach);
    for (auto [v, d] : reach) {
      ++count[v];
      if (v != c && d <= cover.theta[static_cast<int>(ci)]) {
        // another center inside this ball violates the separation condition
        if (std::find(cover.centers.begin(), cover.centers.end(), v) != cover.centers.end())
          cover.separation_ok = false;
      }
    }
  }
  cover.covering_number = 0;
  cover.coverage_ok = true;
  for (int i : regular) {
    cover.covering_number = std::max(cover.covering_number, count[i]);
    if (count[i] == 0) cover.coverage_ok = false;
  }
  return cover;
}

void dump_cover_csv(const Cover& cover, const PointCloud& cloud,
                    const Eigen::VectorXd& skin_values, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_cover_csv: cannot open " + path);
  const int dim = static_cast<int>(cloud.positions.cols());
  for (int j = 0; j < dim; ++j) out << "x" << (j + 1) << ",";
  out << "skin,theta\n";
  char buf[64];
  for (std::size_t i = 0; i < cover.centers.size(); ++i) {
    const int c = cover.centers[i];
    for (int j = 0; j < dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", cloud.positions(c, j));
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", skin_values[c]);
    out << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", cover.theta[static_cast<int>(i)]);
    out << buf << "\n";
  }
}

double cover_lower_bound(const Cover& cover, const std::vector<double>& per_ball_neumann,
                         double boundary_patch_neumann) {
  if (per_ball_neumann.empty())
    throw std::invalid_argument("cover_lower_bound: no per-ball values");
  double nu_min = boundary_patch_neumann;
  for (double nu : per_ball_neumann) nu_min = std::min(nu_min, nu);
  if (!(nu_min > 0.0))
    throw std::invalid_argument("cover_lower_bound: non-positive Neumann value (failed patch solve)");
  return nu_min / (cover.covering_number + 1);
}

H12Report h12_report(const Eigen::VectorXd& f, const ShiftedOperator& op, const ConeModel& model,
                     const RadialGrid& grid, double lambda_skin) {
  FormValue fv = quadratic_form(op, model, grid, f);

  // Dirichlet part alone, via the Laplacian form
  ShiftedOperator lap;
  lap.kind = OperatorKind::laplacian();
  lap.lambda = 0.0;
  lap.w = op.w;
  FormValue dirichlet = quadratic_form(lap, model, grid, f);

  H12Report rep;
  rep.f_l_f = fv.form;
  rep.skin_sq = fv.skin_sq;
  rep.h12_sq = dirichlet.form + fv.skin_sq;

  const LinkPotential vx = potential_on_link(op.kind, model);
  const double sx = skin_cross_section(model, op.w, 0.0);
  rep.a_l = sx > 0.0 ? std::abs(vx.value) / (sx * sx) : 0.0;
  rep.beta_star = lambda_skin > 0.0 ? 1.0 + (rep.a_l + 1.0) / lambda_skin : kInf;
  rep.lower_ok = rep.f_l_f >= lambda_skin * rep.skin_sq - 1e-12 * std::abs(rep.f_l_f);
  rep.upper_ok = rep.beta_star * rep.f_l_f >= rep.h12_sq - 1e-12 * std::abs(rep.h12_sq);
  return rep;
}

CoverPipelineResult cover_pipeline(const ConeModel& model, const SkinField& skin,
                                   const PointCloud& cloud, const Eigen::VectorXd& skin_values,
                                   double xi) {
  CoverPipelineResult out;
  out.cover = build_cover(cloud, skin_values, xi);

  ShiftedOperator ab;
  ab.kind = OperatorKind::ab_laplacian();
  ab.lambda = 0.0;
  ab.w = skin.w;

  out.per_ball.reserve(out.cover.centers.size());
  double outer_edge = 0.0;
  for (std::size_t i = 0; i < out.cover.centers.size(); ++i) {
    const int c = out.cover.centers[i];
    const double r = cloud.positions.row(c).norm();
    const double th = out.cover.theta[static_cast<int>(i)];
    const double lo = std::max(r - th, 0.25 * r);
    out.per_ball.push_back(neumann_eigenvalue(ab, model, lo, r + th, 200));
    outer_edge = std::max(outer_edge, r + th);
  }
  out.nu_min_ball = *std::min_element(out.per_ball.begin(), out.per_ball.end());

  // boundary patch: the outer annulus beyond the last center
  double r_max = 0.0;
  for (int i = 0; i < cloud.size(); ++i) r_max = std::max(r_max, cloud.positions.row(i).norm());
  if (outer_edge < r_max * (1.0 - 1e-9)) {
    out.nu_boundary = neumann_eigenvalue(ab, model, outer_edge, r_max, 200);
  } else {
    out.nu_boundary = out.nu_min_ball;  // cover already reaches the outer rim
  }
  out.k_cover = cover_lower_bound(out.cover, out.per_ball, out.nu_boundary);
  return out;
}

HardyReport hardy_pipeline(const ConeModel& model, const SkinField& skin, const PointCloud& cloud,
                           const Eigen::VectorXd& skin_values, double xi,
                           const std::vector<double>& windows, int n_nodes) {
  HardyReport rep;
  rep.direct = direct_hardy(model, skin, windows, n_nodes);
  CoverPipelineResult cp = cover_pipeline(model, skin, cloud, skin_values, xi);
  rep.covering_number = cp.cover.covering_number;
  rep.center_count = static_cast<int>(cp.cover.centers.size());
  rep.nu_min_ball = cp.nu_min_ball;
  rep.nu_boundary = cp.nu_boundary;
  rep.k_cover = cp.k_cover;
  return rep;
}

}  // namespace conespectra
