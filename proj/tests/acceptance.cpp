// Acceptance suite: one check per criterion, each printing a pass/fail line
// with the measured values and its wall time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "conespectra/exponents.hpp"
#include "conespectra/geometry.hpp"
#include "conespectra/hardy.hpp"
#include "conespectra/mesh.hpp"
#include "conespectra/numeric.hpp"
#include "conespectra/operators.hpp"
#include "conespectra/report.hpp"
#include "conespectra/skin.hpp"
#include "conespectra/spectral.hpp"

using namespace conespectra;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

struct Criterion {
  std::string notes;
  bool ok = true;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes += (notes.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { notes += (notes.empty() ? "" : "; ") + what; }
};

void run_criterion(int id, const char* title, double budget_s,
                   const std::function<void(Criterion&)>& body) {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes += std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= budget_s) {
    c.ok = false;
    c.notes += (c.notes.empty() ? "" : "; ") + std::string("over time budget");
  }
  std::printf("[%s] criterion %2d: %s (%.2f s%s%s)\n", c.ok ? "PASS" : "FAIL", id, title, secs,
              c.notes.empty() ? "" : " | ", c.notes.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

ShiftedOperator shifted(OperatorKind kind, double lambda = 0.0, double w = 1.0) {
  ShiftedOperator op;
  op.kind = kind;
  op.lambda = lambda;
  op.w = w;
  return op;
}

std::vector<std::pair<int, int>> partitions(int total) {
  std::vector<std::pair<int, int>> out;
  for (int p = 1; 2 * p <= total; ++p) out.push_back({p, total - p});
  return out;
}

char buf[256];

std::string fmt(const char* pattern, double a, double b = 0.0) {
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

}  // namespace

int main() {
  const double sqrt6 = std::sqrt(6.0);
  const double sx2 = (sqrt6 + 1.0) * (sqrt6 + 1.0);

  // 1. Simons-cone Jacobi exponents, closed-form path
  run_criterion(1, "Simons-cone Jacobi exponents", 1.0, [&](Criterion& c) {
    ConeModel m = build_cone(ConeSpec::product_of_spheres(3, 3));
    SpectralResult res = principal_eigen_link(cross_section(shifted(OperatorKind::jacobi()), m));
    ExponentPair pair = exponents_from_mu(res.mu, m.n);
    c.require(std::abs(res.mu + 6.0) <= 1e-12, "mu != -6");
    c.require(std::abs(pair.alpha_plus + 2.0) <= 1e-12, "alpha_+ != -2");
    c.require(std::abs(pair.alpha_minus + 3.0) <= 1e-12, "alpha_- != -3");
    c.note(fmt("mu=%.15g", res.mu));
  });

  // 2. Simons stability threshold
  run_criterion(2, "stability threshold at p+q = 6", 5.0, [&](Criterion& c) {
    for (int total = 6; total <= 12; ++total) {
      for (auto [p, q] : partitions(total)) {
        ConeModel m = build_cone(ConeSpec::product_of_spheres(p, q));
        const double half = 0.5 * (m.n - 2);
        c.require(half * half - (p + q) >= 0.0,
                  fmt("registry discriminant negative at p+q=%g", total));
      }
    }
    ConeModel c23 = build_cone(ConeSpec::product_of_spheres(2, 3));
    const double half = 0.5 * (c23.n - 2);
    c.require(half * half - 5.0 < 0.0, "C(2,3) discriminant not negative");
    // negative quadratic-form witness: slowly varying substituted bump
    RadialGrid grid(-8.0, 8.0, 2000);
    Eigen::VectorXd s = grid.s_nodes();
    Eigen::VectorXd f(s.size());
    for (int i = 0; i < s.size(); ++i) {
      const double u = (s[i] - grid.s_min) / (grid.s_max - grid.s_min);
      f[i] = std::exp(-0.5 * (c23.n - 2) * s[i]) * std::sin(kPi * u);
    }
    f[0] = f[s.size() - 1] = 0.0;
    FormValue v = quadratic_form(shifted(OperatorKind::jacobi()), c23, grid, f);
    c.require(v.form < 0.0, "no negative test value on C(2,3)");
    c.note(fmt("witness form=%.4g", v.form));
  });

  // 3. Conformal Laplacian bounds over the registry sweep
  run_criterion(3, "conformal bounds across the sweep", 10.0, [&](Criterion& c) {
    double min_margin = 1e300;
    for (int total = 6; total <= 10; ++total) {
      for (auto [p, q] : partitions(total)) {
        ConeModel m = build_cone(ConeSpec::product_of_spheres(p, q));
        for (double lambda : {0.0, 0.005, 0.01, 0.02}) {
          SpectralResult res =
              principal_eigen_link(cross_section(shifted(OperatorKind::conformal(), lambda), m));
          ExponentPair pair = exponents_from_mu(res.mu, m.n);
          BoundReport rep = check_bounds(OperatorKind::conformal(), m.n, m.n, lambda, res.mu, pair);
          for (const BoundRecord& r : rep.records) {
            if (r.name == "alpha_plus_negative") continue;  // strictness tracked separately
            min_margin = std::min(min_margin, r.margin);
            c.require(r.margin > 0.0, "non-positive margin " + r.name +
                                          fmt(" at p+q=%g lambda=%g", total, lambda));
          }
          if (lambda > 0.0) c.require(pair.alpha_plus < 0.0, "alpha_+ not negative");
        }
      }
    }
    // anchor values from the constant-potential oracle
    ConeModel m = build_cone(ConeSpec::product_of_spheres(3, 3));
    SpectralResult res =
        principal_eigen_link(cross_section(shifted(OperatorKind::conformal(), 0.02), m));
    ExponentPair pair = exponents_from_mu(res.mu, m.n);
    const double mu_oracle = -1.25 - 0.02 * sx2;
    const double alpha_oracle = -2.5 + std::sqrt(6.25 + mu_oracle);
    c.require(std::abs(res.mu - mu_oracle) <= 1e-9, "anchor mu off");
    c.require(std::abs(pair.alpha_plus - alpha_oracle) <= 1e-9, "anchor alpha_+ off");
    c.note(fmt("anchor mu=%.9f, min margin=%.4g", res.mu, min_margin));
  });

  // 4. Dimensionally shifted bounds
  run_criterion(4, "dimensionally shifted bounds", 5.0, [&](Criterion& c) {
    for (auto [p, q] : partitions(6)) {
      ConeModel m = build_cone(ConeSpec::product_of_spheres(p, q));
      for (int n_shift : {8, 10, 14}) {
        for (double lambda : {0.0, 0.01}) {
          SpectralResult res = principal_eigen_link(
              cross_section(shifted(OperatorKind::dim_shifted_conformal(n_shift), lambda), m));
          ExponentPair pair = exponents_from_mu(res.mu, m.n);
          BoundReport rep = check_bounds(OperatorKind::dim_shifted_conformal(n_shift), n_shift,
                                         m.n, lambda, res.mu, pair);
          for (const BoundRecord& r : rep.records)
            c.require(r.satisfied, "failed " + r.name + fmt(" at n_shift=%g lambda=%g",
                                                            n_shift, lambda));
        }
      }
    }
    ConeModel m = build_cone(ConeSpec::product_of_spheres(3, 3));
    SpectralResult res = principal_eigen_link(
        cross_section(shifted(OperatorKind::dim_shifted_conformal(10), 0.0), m));
    c.require(std::abs(res.mu + 4.0 / 3.0) <= 1e-12, "anchor mu != -4/3");
    c.note(fmt("anchor mu=%.15g", res.mu));
  });

  // 5. Exhaustion solver vs the closed form on R x C(3,3)
  run_criterion(5, "exhaustion vs closed form", 30.0, [&](Criterion& c) {
    ConeModel rx = build_cone(ConeSpec::euclidean_factor(1, ConeSpec::product_of_spheres(3, 3)));
    CrossSectionOperator xop = cross_section(shifted(OperatorKind::jacobi()), rx);
    ExhaustionSchedule sched = ExhaustionSchedule::geometric(1e-2, 0.5, 6);
    SpectralResult res = dirichlet_exhaustion(xop, sched, 4000);
    for (std::size_t i = 0; i + 1 < res.mu_sequence.size(); ++i)
      c.require(res.mu_sequence[i + 1] <= res.mu_sequence[i] + 1e-10, "mu sequence increased");
    c.require(std::abs(res.mu_extrapolated + 8.0) <= 1e-2, "mu* not within 1e-2 of -8");
    const double eps5 = sched.eps_list.back();
    double worst = 0.0;
    for (int i = 0; i < res.nodes.size(); ++i) {
      const double t = res.nodes[i];
      if (std::abs(t) > 0.5 * kPi - 10.0 * eps5) continue;
      const double ref = 1.0 / (std::cos(t) * std::cos(t));
      worst = std::max(worst, std::abs(res.psi_midpoint_one[i] - ref) / ref);
    }
    c.require(worst <= 1e-2, fmt("psi deviates by %.3g", worst));
    ExponentPair pair = exponents_from_mu(res.mu_extrapolated, rx.n);
    c.require(std::abs(pair.alpha_plus + 2.0) <= 5e-3, "alpha_+ inheritance broken");
    c.note(fmt("mu*=%.6f, psi err=%.2e", res.mu_extrapolated, worst));
  });

  // 6. Hardy constants and weighted principal eigenvalues
  run_criterion(6, "hardy constants", 60.0, [&](Criterion& c) {
    ConeModel m = build_cone(ConeSpec::product_of_spheres(3, 3));
    SkinField skin = skin_closed_form(m, 1.0);
    HardyDirect hd = direct_hardy(m, skin, {5.0, 10.0, 20.0}, 8000);
    const double k_oracle = 12.25 / sx2;
    c.require(std::abs(hd.k_direct - k_oracle) <= 1e-3, fmt("k_direct=%.6f", hd.k_direct));

    PointCloud cloud = ray_cloud(m, 0.1, 10.0, 10000);
    Eigen::VectorXd svals(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) svals[i] = skin.eval(cloud.positions.row(i).norm());
    CoverPipelineResult cp = cover_pipeline(m, skin, cloud, svals, 0.05);
    c.require(cp.k_cover > 0.0, "k_cover not positive");
    c.require(cp.k_cover <= hd.k_direct + 1e-6, "k_cover exceeds k_direct");

    WeightedEigenEstimate jac =
        weighted_principal_eigenvalue(OperatorKind::jacobi(), m, 1.0, {5.0, 10.0, 20.0}, 8000);
    WeightedEigenEstimate conf =
        weighted_principal_eigenvalue(OperatorKind::conformal(), m, 1.0, {5.0, 10.0, 20.0}, 8000);
    c.require(std::abs(jac.extrapolated - 0.25 / sx2) <= 1e-3, "lambda_skin(jacobi) off");
    c.require(std::abs(conf.extrapolated - 5.0 / sx2) <= 1e-3, "lambda_skin(conformal) off");
    c.note(fmt("k_direct=%.6f k_cover=%.6f", hd.k_direct, cp.k_cover) +
           fmt(", ls_j=%.6f ls_c=%.6f", jac.extrapolated, conf.extrapolated));
  });

  // 7. Skin axioms on the C(3,3) cloud
  run_criterion(7, "skin axioms", 60.0, [&](Criterion& c) {
    ConeModel m = build_cone(ConeSpec::product_of_spheres(3, 3));
    SkinField skin = skin_closed_form(m, 1.0);
    SkinNumericOptions opts;
    PointCloud cloud = ray_cloud(m, 0.1, 10.0, 10000);
    SkinNumericResult num = skin_numeric(cloud, 1.0, opts);
    double worst = 0.0;
    for (int i = 0; i < cloud.size(); ++i) {
      c.require(num.values[i] >= cloud.abs_a[i], "dominance violated");
      const double r = cloud.positions.row(i).norm();
      if (r < 0.15 || r > 9.5) continue;  // witness radius must lie inside the cloud
      worst = std::max(worst, std::abs(num.values[i] - skin.eval(r)) / skin.eval(r));
    }
    c.require(worst <= 0.02, fmt("numeric error %.3g", worst));

    // first-order refinement ladder ending at the production cloud
    auto err_at = [&](int n) {
      PointCloud cl = ray_cloud(m, 0.1, 10.0, n);
      SkinNumericResult res = skin_numeric(cl, 1.0, opts);
      double w = 0.0;
      for (int i = 0; i < cl.size(); ++i) {
        const double r = cl.positions.row(i).norm();
        if (r < 0.15 || r > 9.5) continue;
        w = std::max(w, std::abs(res.values[i] - skin.eval(r)) / skin.eval(r));
      }
      return w;
    };
    const double e0 = err_at(2500);
    const double e1 = err_at(5000);
    const double r01 = e0 / e1;
    const double r12 = e1 / worst;
    c.require(r01 >= 1.5 && r01 <= 4.0, fmt("refinement ratio %.2f out of range", r01));
    c.require(r12 >= 1.5 && r12 <= 4.0, fmt("refinement ratio %.2f out of range", r12));

    AxiomReport closed = skin_axiom_report(skin, cloud);
    c.require(closed.scaling_max_rel_dev <= 1e-12, "closed-form scaling not exact");
    AxiomReport numeric = skin_axiom_report(num, cloud, 1.0, true, 2.0, opts);
    c.require(numeric.lipschitz_measured <= 1.0 / (sqrt6 + 1.0) + 1e-3, "lipschitz bound broken");
    c.require(numeric.scaling_max_rel_dev <= 1e-3, "numeric scaling deviates");
    c.note(fmt("err=%.2e, ratios %.2f", worst, r01) + fmt("/%.2f", r12) +
           fmt(", lip=%.6f", numeric.lipschitz_measured));
  });

  // 8. Solver validation: sphere harmonics and residual orders
  run_criterion(8, "solver validation", 30.0, [&](Criterion& c) {
    ConeModel flat = build_cone(ConeSpec::round_link(6));
    LinkProblem lp = suspension_problem(flat, [](double) { return 0.0; }, 0.0, 4000);
    AssembledForms forms = assemble(lp.sl);
    EigenPair first = kth_eigenpair(forms.pencil, 1);
    c.require(std::abs(first.value - 6.0) <= 1e-4, fmt("sphere eigenvalue %.6f", first.value));

    std::vector<double> hs, errs;
    for (int n : {500, 1000, 2000}) {
      LinkProblem p = suspension_problem(flat, [](double) { return 0.0; }, 0.0, n);
      AssembledForms f = assemble(p.sl);
      hs.push_back(1.0 / n);
      errs.push_back(std::abs(kth_eigenpair(f.pencil, 1).value - 6.0));
    }
    const double sl_order = fit_order(hs, errs);
    c.require(sl_order >= 1.8 && sl_order <= 2.2, fmt("SL order %.2f", sl_order));

    ConeModel m = build_cone(ConeSpec::product_of_spheres(3, 3));
    CrossSectionOperator x = cross_section(shifted(OperatorKind::jacobi()), m);
    SpectralResult res = principal_eigen_link(x);
    ExponentPair pair = exponents_from_mu(res.mu, m.n);
    ResidualReport rr = radial_residual(pair, res, x, 0.5, 2.0, {200, 400, 800});
    c.require(rr.order >= 1.8 && rr.order <= 2.2, fmt("residual order %.2f", rr.order));
    c.note(fmt("sphere=%.6f, orders %.2f", first.value, sl_order) + fmt("/%.2f", rr.order));
  });

  // 9. Neumann scaling invariance and cover stability
  run_criterion(9, "neumann scaling and cover stability", 30.0, [&](Criterion& c) {
    ConeModel m = build_cone(ConeSpec::product_of_spheres(3, 3));
    SkinField skin = skin_closed_form(m, 1.0);
    ShiftedOperator ab = shifted(OperatorKind::ab_laplacian());
    const double r_hi = 1.0 + 0.3 / skin.eval(1.0);
    double worst = 0.0;
    for (double base : {0.4, 1.0, 3.0}) {
      const double nu = neumann_eigenvalue(ab, m, base, base * r_hi, 400);
      const double nu2 = neumann_eigenvalue(ab, m, 2.0 * base, 2.0 * base * r_hi, 400);
      worst = std::max(worst, std::abs(nu - nu2));
      c.require(nu > 0.0, "nu not positive");
    }
    c.require(worst <= 1e-12, fmt("scaling deviation %.2e", worst));

    PointCloud cloud = ray_cloud(m, 0.1, 10.0, 10000);
    Eigen::VectorXd svals(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) svals[i] = skin.eval(cloud.positions.row(i).norm());
    // xi small enough that the greedy cover's overlap bands stay below both
    // sampling densities; the statistic is then resolution independent
    Cover cover = build_cover(cloud, svals, 0.02);
    PointCloud fine = ray_cloud(m, 0.1, 10.0, 40000);
    Eigen::VectorXd fvals(fine.size());
    for (int i = 0; i < fine.size(); ++i) fvals[i] = skin.eval(fine.positions.row(i).norm());
    Cover refined = build_cover(fine, fvals, 0.02);
    c.require(cover.separation_ok && refined.separation_ok, "separation violated");
    c.require(cover.coverage_ok && refined.coverage_ok, "coverage violated");
    c.require(cover.covering_number == refined.covering_number, "covering number moved");
    c.note(fmt("dev=%.2e, covering=%g", worst, cover.covering_number));
  });

  // 10. L^p diagnostics
  run_criterion(10, "Lp diagnostics", 10.0, [&](Criterion& c) {
    ConeModel rx = build_cone(ConeSpec::euclidean_factor(1, ConeSpec::product_of_spheres(3, 3)));
    CrossSectionOperator xop = cross_section(shifted(OperatorKind::jacobi()), rx);
    SpectralResult res = dirichlet_exhaustion(xop, ExhaustionSchedule::geometric(1e-2, 0.5, 6), 4000);
    LpReport link = lp_report(res, xop, {1.0, 1.3}, {});
    c.require(link.guaranteed_link_threshold == 7.0 / 5.0, "link threshold wrong");
    for (const LpRecord& r : link.link_records)
      c.require(r.convergent, fmt("p=%.2f classified divergent", r.exponent));

    ConeModel m = build_cone(ConeSpec::product_of_spheres(3, 3));
    CrossSectionOperator x7 = cross_section(shifted(OperatorKind::jacobi()), m);
    SpectralResult res7 = principal_eigen_link(x7);
    LpReport radial = lp_report(res7, x7, {}, {1.2});
    c.require(radial.guaranteed_radial_threshold == 7.0 / 5.0, "radial threshold wrong");
    c.require(radial.radial_records[0].convergent, "q=1.2 classified divergent");
    c.note("link p in {1, 1.3} convergent; radial q=1.2 convergent");
  });

  // 11. Determinism of the full anchor document
  run_criterion(11, "byte-identical reports", 120.0, [&](Criterion& c) {
    ordered_json doc;
    doc["seed"] = 20260809;
    doc["skin"]["w"] = 1.0;
    doc["mesh"]["N"] = 4000;
    doc["mesh"]["windows"] = {5.0, 10.0, 20.0};
    doc["cloud"]["samples"] = 10000;
    doc["cloud"]["r_min"] = 0.1;
    doc["cloud"]["r_max"] = 10.0;
    doc["cloud"]["xi"] = 0.05;
    doc["cone"]["family"] = "product_of_spheres";
    doc["cone"]["p"] = 3;
    doc["cone"]["q"] = 3;
    doc["operator"]["kind"] = "conformal";
    doc["operator"]["lambda"] = 0.02;
    doc["analyses"] = {"skin", "spectrum", "exponents", "bounds", "hardy", "cover", "lp",
                       "residual"};
    RunConfig cfg = parse_config(doc);
    cfg.jobs = 4;
    const std::string a = dump_json17(run_config(cfg).doc);
    const std::string b = dump_json17(run_config(cfg).doc);
    c.require(a == b, "reports differ");
    c.require(a.size() > 1000, "report suspiciously small");
    c.note(fmt("report bytes: %g", double(a.size())));
  });

  if (failures == 0) std::printf("acceptance: all criteria passed\n");
  else std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
