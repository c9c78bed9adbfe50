#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "conespectra/geometry.hpp"

namespace conespectra {

// Metric skin transform on a catalog cone. On links with constant
// |A_link| = a the distance-tube construction evaluates to
//   s_w(x) = (a + w) / r,   delta(x) = r / (a + w),
// with exact Lipschitz constant 1/(a+w) for delta. Totally geodesic cones
// carry the zero field (delta = +inf by convention).
struct SkinField {
  double w = 1.0;
  bool zero_field = false;
  double a_link = 0.0;       // sqrt of the constant link |A|^2
  double lipschitz = 0.0;    // exact Lipschitz constant of delta

  double eval(double r) const;    // skin value at radius r
  double delta(double r) const;   // 1 / skin; +inf on the zero field
};

SkinField skin_closed_form(const ConeModel& model, double w);

// Cross-sectional skin s^x(angle) = r * s(x) at r = 1. Defined for the whole
// catalog; on Euclidean-factor links the superlevel sets of |A| are slabs
// around R^m x {0} and the tube construction gives (a_core + w)/cos t.
double skin_cross_section(const ConeModel& model, double w, double angle);

// Discrete carrier for the intrinsic distance and |A|.
struct PointCloud {
  Eigen::MatrixXd positions;   // N x ambient_dim
  Eigen::VectorXd abs_a;       // N
  std::vector<int> adj_offsets;  // CSR, size N+1
  std::vector<int> adj_index;
  std::vector<double> adj_len;

  int size() const { return static_cast<int>(abs_a.size()); }
  void check_edges() const;  // positive edge lengths, symmetric structure assumed
};

// Log-uniform samples of a single ray through a regular link point, chained
// by consecutive edges. Positions are embedded in R^{n+1}.
PointCloud ray_cloud(const ConeModel& model, double r_min, double r_max, int samples);

PointCloud scaled_cloud(const PointCloud& cloud, double lambda);

// CSV import: points file with columns x1..xk,absA (header optional);
// adjacency file with rows i,j,length (0-based indices).
PointCloud load_cloud_csv(const std::string& points_path, const std::string& adjacency_path);

struct SkinNumericResult {
  Eigen::VectorXd values;
  std::vector<bool> saturated;  // sup hit the c_max bracket end
  double c_max = 0.0;
};

struct SkinNumericOptions {
  double rel_tol = 1e-10;    // bisection tolerance on c
  int max_threads = 0;       // 0: hardware concurrency
};

// Per-sample sup over c of the feasibility predicate
//   dist_graph(x, {|A| >= c}) <= w / c,
// by bisection; the predicate is monotone in c. Throws on a disconnected
// graph, identifying the offending component.
SkinNumericResult skin_numeric(const PointCloud& cloud, double w,
                               const SkinNumericOptions& opts = {});

// Single feasibility probe, exposed for the monotonicity property checks.
bool skin_feasible(const PointCloud& cloud, double w, int sample, double c);

struct AxiomReport {
  double dominance_min_margin = 0.0;  // min over samples of s - |A|
  double lipschitz_measured = 0.0;    // max adjacent-pair |d delta| / d
  double scaling_max_rel_dev = 0.0;   // s_{lambda.}(lambda x) * lambda vs s(x)
  bool zero_gauge = false;            // totally geodesic convention path
};

// Closed-form field evaluated on the cloud radii.
AxiomReport skin_axiom_report(const SkinField& field, const PointCloud& cloud,
                              double scaling_lambda = 2.0);

// Numeric values on the cloud; the scaling check recomputes the field on the
// scaled cloud when `check_scaling` is set. Saturated samples carry flagged
// bracket artifacts and are skipped in the Lipschitz and scaling statistics.
AxiomReport skin_axiom_report(const SkinNumericResult& numeric, const PointCloud& cloud, double w,
                              bool check_scaling = false, double scaling_lambda = 2.0,
                              const SkinNumericOptions& opts = {});

}  // namespace conespectra
