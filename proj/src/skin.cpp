#include "conespectra/skin.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace conespectra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// scratch space for repeated truncated Dijkstra runs
struct DijkstraScratch {
  std::vector<double> dist;
  std::vector<int> stamp;
  int current = 0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

  void reset(int n) {
    if (static_cast<int>(dist.size()) != n) {
      dist.assign(n, kInf);
      stamp.assign(n, 0);
      current = 0;
    }
    ++current;
    heap = {};
  }
  double get(int i) const { return stamp[i] == current ? dist[i] : kInf; }
  void set(int i, double d) {
    stamp[i] = current;
    dist[i] = d;
  }
};

// dist(x, {|A| >= c}) <= budget, explored outward from x and cut off at the
// budget radius. Levels above the sampled maximum have no witnesses in the
// cloud; only a degenerate self-witness at the maximum survives there (the
// sample standing in for the unsampled singular region).
bool feasible_from(const PointCloud& cloud, DijkstraScratch& scratch, int x, double c,
                   double budget, double max_a) {
  if (c > max_a) return cloud.abs_a[x] == max_a;
  if (cloud.abs_a[x] >= c) return true;
  scratch.reset(cloud.size());
  scratch.set(x, 0.0);
  scratch.heap.emplace(0.0, x);
  while (!scratch.heap.empty()) {
    auto [d, u] = scratch.heap.top();
    scratch.heap.pop();
    if (d > budget) return false;
    if (d > scratch.get(u)) continue;
    if (cloud.abs_a[u] >= c) return true;
    for (int e = cloud.adj_offsets[u]; e < cloud.adj_offsets[u + 1]; ++e) {
      const int v = cloud.adj_index[e];
      const double nd = d + cloud.adj_len[e];
      if (nd <= budget && nd < scratch.get(v)) {
        scratch.set(v, nd);
        scratch.heap.emplace(nd, v);
      }
    }
  }
  return false;
}

// full single-source distances (connectivity probe, diameter estimate)
void dijkstra_all(const PointCloud& cloud, int source, std::vector<double>& dist) {
  dist.assign(cloud.size(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (int e = cloud.adj_offsets[u]; e < cloud.adj_offsets[u + 1]; ++e) {
      const int v = cloud.adj_index[e];
      const double nd = d + cloud.adj_len[e];
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
}

int thread_count(int requested, int jobs) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int n = requested > 0 ? requested : hw;
  return std::max(1, std::min(n, jobs));
}

}  // namespace

double SkinField::eval(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("SkinField::eval: r must be > 0");
  if (zero_field) return 0.0;
  return (a_link + w) / r;
}

double SkinField::delta(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("SkinField::delta: r must be > 0");
  if (zero_field) return kInf;
  return r / (a_link + w);
}

SkinField skin_closed_form(const ConeModel& model, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("skin_closed_form: w must be > 0");
  if (!model.homogeneous_link)
    throw std::invalid_argument("skin_closed_form: model must have a homogeneous link");
  SkinField f;
  f.w = w;
  if (model.a2_const == 0.0) {
    f.zero_field = true;  // trivial gauge
    f.a_link = 0.0;
    f.lipschitz = 0.0;
    return f;
  }
  // {|A| >= c} = {r <= a/c}; radial tube of width w/c reaches r <= (a+w)/c,
  // and the sup over feasible c at radius r is (a+w)/r
  f.a_link = std::sqrt(model.a2_const);
  f.lipschitz = 1.0 / (f.a_link + w);
  return f;
}

double skin_cross_section(const ConeModel& model, double w, double angle) {
  if (!(w > 0.0)) throw std::invalid_argument("skin_cross_section: w must be > 0");
  if (model.homogeneous_link) {
    if (model.a2_const == 0.0) return 0.0;
    return std::sqrt(model.a2_const) + w;
  }
  if (model.angle_is_singular(angle))
    throw std::invalid_argument("skin_cross_section: angle in the link singular set");
  // superlevel sets of |A| are slabs around R^m x {0}; the tube distance is
  // radial in the core factor, at distance r*cos(t) from the singular line
  return (std::sqrt(model.core_a2) + w) / std::cos(angle);
}

void PointCloud::check_edges() const {
  if (static_cast<int>(adj_offsets.size()) != size() + 1)
    throw std::invalid_argument("PointCloud: bad adjacency offsets");
  for (double len : adj_len)
    if (!(len > 0.0)) throw std::invalid_argument("PointCloud: edge lengths must be positive");
}

PointCloud ray_cloud(const ConeModel& model, double r_min, double r_max, int samples) {
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw std::invalid_argument("ray_cloud: need 0 < r_min < r_max");
  if (samples < 2) throw std::invalid_argument("ray_cloud: need at least 2 samples");

  // a fixed regular link direction; for product links use the first axis of
  // each sphere factor scaled by the link radii
  Eigen::VectorXd dir;
  const ConeSpec& spec = model.spec;
  if (spec.family == Family::ProductOfSpheres) {
    dir = Eigen::VectorXd::Zero(spec.p + spec.q + 2);
    dir[0] = std::sqrt(double(spec.p) / (spec.p + spec.q));
    dir[spec.p + 1] = std::sqrt(double(spec.q) / (spec.p + spec.q));
  } else if (spec.family == Family::RoundLink) {
    dir = Eigen::VectorXd::Zero(spec.d + 2);
    dir[0] = 1.0;
  } else {
    // regular ray of the factor cone at join angle 0
    const ConeSpec* core = spec.inner.get();
    while (core && core->family == Family::EuclideanFactor) core = core->inner.get();
    if (!core) throw std::invalid_argument("ray_cloud: malformed euclidean_factor spec");
    dir = Eigen::VectorXd::Zero(model.n + 1);
    dir[0] = std::sqrt(double(core->p) / (core->p + core->q));
    dir[core->p + 1] = std::sqrt(double(core->q) / (core->p + core->q));
  }

  PointCloud cloud;
  cloud.positions.resize(samples, dir.size());
  cloud.abs_a.resize(samples);
  const double ratio = std::log(r_max / r_min) / (samples - 1);
  Eigen::VectorXd radii(samples);
  for (int i = 0; i < samples; ++i) {
    const double r = r_min * std::exp(ratio * i);
    radii[i] = r;
    cloud.positions.row(i) = (r * dir).transpose();
    cloud.abs_a[i] = model.homogeneous_link ? std::sqrt(model.a2_const) / r
                                            : std::sqrt(model.a2_link(0.0)) / r;
  }

  cloud.adj_offsets.assign(samples + 1, 0);
  for (int i = 0; i < samples; ++i)
    cloud.adj_offsets[i + 1] = cloud.adj_offsets[i] + ((i == 0 || i == samples - 1) ? 1 : 2);
  cloud.adj_index.resize(cloud.adj_offsets[samples]);
  cloud.adj_len.resize(cloud.adj_offsets[samples]);
  for (int i = 0; i < samples; ++i) {
    int k = cloud.adj_offsets[i];
    if (i > 0) {
      cloud.adj_index[k] = i - 1;
      cloud.adj_len[k] = radii[i] - radii[i - 1];
      ++k;
    }
    if (i + 1 < samples) {
      cloud.adj_index[k] = i + 1;
      cloud.adj_len[k] = radii[i + 1] - radii[i];
    }
  }
  return cloud;
}

PointCloud scaled_cloud(const PointCloud& cloud, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scaled_cloud: lambda must be > 0");
  PointCloud out = cloud;
  out.positions *= lambda;
  out.abs_a /= lambda;
  for (double& len : out.adj_len) len *= lambda;
  return out;
}

PointCloud load_cloud_csv(const std::string& points_path, const std::string& adjacency_path) {
  std::ifstream pf(points_path);
  if (!pf) throw std::runtime_error("load_cloud_csv: cannot open " + points_path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(pf, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> row;
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) continue;  // header
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("load_cloud_csv: no samples in " + points_path);
  const std::size_t cols = rows[0].size();
  if (cols < 2) throw std::runtime_error("load_cloud_csv: need at least x1,absA columns");
  for (const auto& r : rows)
    if (r.size() != cols) throw std::runtime_error("load_cloud_csv: ragged rows");

  PointCloud cloud;
  const int n = static_cast<int>(rows.size());
  cloud.positions.resize(n, static_cast<int>(cols) - 1);
  cloud.abs_a.resize(n);
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < cols; ++j) cloud.positions(i, static_cast<int>(j)) = rows[i][j];
    cloud.abs_a[i] = rows[i][cols - 1];
  }

  std::ifstream af(adjacency_path);
  if (!af) throw std::runtime_error("load_cloud_csv: cannot open " + adjacency_path);
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  while (std::getline(af, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
      continue;
    int i, j;
    double len;
    try {
      i = std::stoi(a);
      j = std::stoi(b);
      len = std::stod(c);
    } catch (...) {
      continue;  // header
    }
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw std::runtime_error("load_cloud_csv: adjacency index out of range");
    adj[i].emplace_back(j, len);
    adj[j].emplace_back(i, len);
  }
  cloud.adj_offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) cloud.adj_offsets[i + 1] = cloud.adj_offsets[i] + static_cast<int>(adj[i].size());
  cloud.adj_index.resize(cloud.adj_offsets[n]);
  cloud.adj_len.resize(cloud.adj_offsets[n]);
  for (int i = 0; i < n; ++i) {
    int k = cloud.adj_offsets[i];
    for (auto [j, len] : adj[i]) {
      cloud.adj_index[k] = j;
      cloud.adj_len[k] = len;
      ++k;
    }
  }
  cloud.check_edges();
  return cloud;
}

bool skin_feasible(const PointCloud& cloud, double w, int sample, double c) {
  DijkstraScratch scratch;
  return feasible_from(cloud, scratch, sample, c, w / c, cloud.abs_a.maxCoeff());
}

SkinNumericResult skin_numeric(const PointCloud& cloud, double w, const SkinNumericOptions& opts) {
  if (!(w > 0.0)) throw std::invalid_argument("skin_numeric: w must be > 0");
  cloud.check_edges();
  const int n = cloud.size();

  SkinNumericResult out;
  out.values = Eigen::VectorXd::Zero(n);
  out.saturated.assign(n, false);

  const double max_a = cloud.abs_a.maxCoeff();
  if (max_a <= 0.0) return out;  // zero field

  // connectivity; report the offending component by a representative sample
  std::vector<double> dist0;
  dijkstra_all(cloud, 0, dist0);
  for (int i = 0; i < n; ++i)
    if (dist0[i] == kInf)
      throw std::runtime_error("skin_numeric: graph disconnected (sample " + std::to_string(i) +
                               " unreachable from sample 0)");
  const double diam_est = 2.0 * *std::max_element(dist0.begin(), dist0.end());

  double min_a_pos = kInf;
  for (int i = 0; i < n; ++i)
    if (cloud.abs_a[i] > 0.0) min_a_pos = std::min(min_a_pos, cloud.abs_a[i]);

  const double c_floor = 0.5 * std::min(min_a_pos, diam_est > 0.0 ? w / diam_est : min_a_pos);
  const double c_max = 2.0 * max_a * (1.0 + w * max_a);
  out.c_max = c_max;

  std::atomic<int> next{0};
  auto worker = [&]() {
    DijkstraScratch scratch;
    for (;;) {
      const int x = next.fetch_add(1);
      if (x >= n) return;
      double lo;
      if (cloud.abs_a[x] > 0.0) {
        lo = cloud.abs_a[x];  // always feasible at the sample's own level
      } else {
        lo = c_floor;
        while (lo > 1e-300 && !feasible_from(cloud, scratch, x, lo, w / lo, max_a)) lo *= 0.5;
        if (lo <= 1e-300) {
          out.values[x] = 0.0;
          continue;
        }
      }
      if (feasible_from(cloud, scratch, x, c_max, w / c_max, max_a)) {
        out.values[x] = c_max;
        out.saturated[x] = true;
        continue;
      }
      double hi = c_max;
      while (hi - lo > opts.rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (feasible_from(cloud, scratch, x, mid, w / mid, max_a))
          lo = mid;
        else
          hi = mid;
      }
      out.values[x] = lo;
    }
  };

  const int threads = thread_count(opts.max_threads, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

AxiomReport skin_axiom_report(const SkinField& field, const PointCloud& cloud,
                              double scaling_lambda) {
  AxiomReport rep;
  const int n = cloud.size();
  if (field.zero_field) {
    rep.zero_gauge = true;
    rep.dominance_min_margin = 0.0;
    rep.lipschitz_measured = 0.0;  // |delta - delta| == 0 convention
    rep.scaling_max_rel_dev = 0.0;
    return rep;
  }
  double margin = kInf;
  double lip = 0.0;
  double scal_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = cloud.positions.row(i).norm();
    const double s = field.eval(r);
    margin = std::min(margin, s - cloud.abs_a[i]);
    const double scaled = field.eval(scaling_lambda * r) * scaling_lambda;
    scal_dev = std::max(scal_dev, std::abs(scaled - s) / s);
    for (int e = cloud.adj_offsets[i]; e < cloud.adj_offsets[i + 1]; ++e) {
      const int j = cloud.adj_index[e];
      if (j <= i) continue;
      const double rj = cloud.positions.row(j).norm();
      lip = std::max(lip, std::abs(field.delta(r) - field.delta(rj)) / cloud.adj_len[e]);
    }
  }
  rep.dominance_min_margin = margin;
  rep.lipschitz_measured = lip;
  rep.scaling_max_rel_dev = scal_dev;
  return rep;
}

AxiomReport skin_axiom_report(const SkinNumericResult& numeric, const PointCloud& cloud, double w,
                              bool check_scaling, double scaling_lambda,
                              const SkinNumericOptions& opts) {
  AxiomReport rep;
  const int n = cloud.size();
  const Eigen::VectorXd& skin_values = numeric.values;
  if (skin_values.size() != n)
    throw std::invalid_argument("skin_axiom_report: value/cloud size mismatch");
  if (skin_values.maxCoeff() <= 0.0) {
    rep.zero_gauge = true;
    return rep;
  }
  double margin = kInf;
  double lip = 0.0;
  for (int i = 0; i < n; ++i) {
    margin = std::min(margin, skin_values[i] - cloud.abs_a[i]);
    if (numeric.saturated[i]) continue;
    for (int e = cloud.adj_offsets[i]; e < cloud.adj_offsets[i + 1]; ++e) {
      const int j = cloud.adj_index[e];
      if (j <= i || numeric.saturated[j]) continue;
      if (skin_values[i] <= 0.0 || skin_values[j] <= 0.0) continue;
      const double di = 1.0 / skin_values[i];
      const double dj = 1.0 / skin_values[j];
      lip = std::max(lip, std::abs(di - dj) / cloud.adj_len[e]);
    }
  }
  rep.dominance_min_margin = margin;
  rep.lipschitz_measured = lip;
  rep.scaling_max_rel_dev = 0.0;
  if (check_scaling) {
    PointCloud scaled = scaled_cloud(cloud, scaling_lambda);
    SkinNumericResult sres = skin_numeric(scaled, w, opts);
    for (int i = 0; i < n; ++i) {
      if (skin_values[i] <= 0.0 || numeric.saturated[i] || sres.saturated[i]) continue;
      const double dev = std::abs(sres.values[i] * scaling_lambda - skin_values[i]) / skin_values[i];
      rep.scaling_max_rel_dev = std::max(rep.scaling_max_rel_dev, dev);
    }
  }
  return rep;
}

}  // namespace conespectra
