#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "conespectra/operators.hpp"
#include "conespectra/skin.hpp"
#include "conespectra/spectral.hpp"

namespace conespectra {

struct HardyDirect {
  std::vector<double> windows;
  std::vector<double> values;   // quotient minimum per window
  double k_direct = 0.0;        // window-extrapolated constant
  double metric_corollary = 0.0;  // k_direct / L_skin^2
};

// Rayleigh quotient (int |grad f|^2 + |A|^2 f^2) / (int skin^2 f^2) over the
// log-radial window with Dirichlet ends, extrapolated over the window
// sequence. Homogeneous singular models only; the zero field is rejected.
HardyDirect direct_hardy(const ConeModel& model, const SkinField& skin,
                         const std::vector<double>& windows, int n_nodes = 8000);

struct Cover {
  std::vector<int> centers;     // sample indices, in acceptance order
  Eigen::VectorXd theta;        // ball radius per center
  double xi = 0.0;
  int covering_number = 0;      // max over samples at rho = 1
  bool separation_ok = false;   // no center inside another center's ball
  bool coverage_ok = false;     // every sample inside some closed ball
};

// Greedy maximal center selection in decreasing skin order with radii
// Theta(p) = xi * delta(p). Soft-checks xi against the measured Lipschitz
// bound (warning on stderr, run proceeds).
Cover build_cover(const PointCloud& cloud, const Eigen::VectorXd& skin_values, double xi);

void dump_cover_csv(const Cover& cover, const PointCloud& cloud,
                    const Eigen::VectorXd& skin_values, const std::string& path);

// min(per-ball and boundary-patch Neumann values) / (covering number + 1).
double cover_lower_bound(const Cover& cover, const std::vector<double>& per_ball_neumann,
                         double boundary_patch_neumann);

struct H12Report {
  double h12_sq = 0.0;        // int |grad f|^2 + skin^2 f^2
  double f_l_f = 0.0;         // int f L f
  double skin_sq = 0.0;       // int skin^2 f^2
  double a_l = 0.0;           // potential bound |V| <= a_l skin^2
  double beta_star = 0.0;     // 1 + (a_l + 1) / lambda_skin
  bool lower_ok = false;      // f L f >= lambda_skin * skin_sq
  bool upper_ok = false;      // beta_star * f L f >= h12_sq
};

// Norm-equivalence check for a compactly supported radial test function.
H12Report h12_report(const Eigen::VectorXd& f, const ShiftedOperator& op, const ConeModel& model,
                     const RadialGrid& grid, double lambda_skin);

// Cover construction plus the per-ball/boundary Neumann solves.
struct CoverPipelineResult {
  Cover cover;
  std::vector<double> per_ball;
  double nu_min_ball = 0.0;
  double nu_boundary = 0.0;
  double k_cover = 0.0;
};

CoverPipelineResult cover_pipeline(const ConeModel& model, const SkinField& skin,
                                   const PointCloud& cloud, const Eigen::VectorXd& skin_values,
                                   double xi);

// Full two-pipeline Hardy estimate on a ray cloud.
struct HardyReport {
  HardyDirect direct;
  double k_cover = 0.0;
  double nu_min_ball = 0.0;
  double nu_boundary = 0.0;
  int covering_number = 0;
  int center_count = 0;
};

HardyReport hardy_pipeline(const ConeModel& model, const SkinField& skin, const PointCloud& cloud,
                           const Eigen::VectorXd& skin_values, double xi,
                           const std::vector<double>& windows, int n_nodes = 8000);

}  // namespace conespectra
