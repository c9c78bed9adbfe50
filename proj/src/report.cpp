#include "conespectra/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "conespectra/exponents.hpp"
#include "conespectra/hardy.hpp"
#include "conespectra/numeric.hpp"
#include "conespectra/skin.hpp"
#include "conespectra/spectral.hpp"

namespace conespectra {

namespace {

ConeSpec parse_cone(const ordered_json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "cone spec must be an object");
  if (!j.contains("family") || !j["family"].is_string())
    throw ConfigError(path + ".family", "missing family");
  const std::string fam = j["family"].get<std::string>();
  auto get_int = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
      throw ConfigError(path + "." + key, "missing integer field");
    return j[key].get<int>();
  };
  if (fam == "product_of_spheres") {
    return ConeSpec::product_of_spheres(get_int("p"), get_int("q"));
  }
  if (fam == "round_link") {
    return ConeSpec::round_link(get_int("d"));
  }
  if (fam == "euclidean_factor") {
    if (!j.contains("inner")) throw ConfigError(path + ".inner", "missing inner spec");
    return ConeSpec::euclidean_factor(get_int("m"), parse_cone(j["inner"], path + ".inner"));
  }
  throw ConfigError(path + ".family", "unknown family");
}

Analysis parse_analysis(const std::string& name, const std::string& path) {
  if (name == "skin") return Analysis::Skin;
  if (name == "spectrum") return Analysis::Spectrum;
  if (name == "exponents") return Analysis::Exponents;
  if (name == "bounds") return Analysis::Bounds;
  if (name == "hardy") return Analysis::Hardy;
  if (name == "cover") return Analysis::Cover;
  if (name == "lp") return Analysis::Lp;
  if (name == "residual") return Analysis::Residual;
  throw ConfigError(path, "unknown analysis '" + name + "'");
}

OperatorKind make_kind(const RunConfig& cfg) {
  if (cfg.kind_name == "laplacian") return OperatorKind::laplacian();
  if (cfg.kind_name == "jacobi") return OperatorKind::jacobi();
  if (cfg.kind_name == "conformal") return OperatorKind::conformal();
  if (cfg.kind_name == "s_conformal") return OperatorKind::s_conformal(cfg.s_constant);
  if (cfg.kind_name == "ab_laplacian") return OperatorKind::ab_laplacian();
  if (cfg.kind_name == "dim_shifted_conformal")
    return OperatorKind::dim_shifted_conformal(cfg.n_shift);
  throw ConfigError("operator.kind", "unknown operator kind '" + cfg.kind_name + "'");
}

bool wants(const RunConfig& cfg, Analysis a) {
  for (Analysis x : cfg.analyses)
    if (x == a) return true;
  return false;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json cone_block(const ConeModel& model) {
  ordered_json j;
  j["label"] = model.spec.label();
  switch (model.spec.family) {
    case Family::ProductOfSpheres:
      j["family"] = "product_of_spheres";
      j["p"] = model.spec.p;
      j["q"] = model.spec.q;
      break;
    case Family::EuclideanFactor: {
      j["family"] = "euclidean_factor";
      j["m"] = model.ef_m;
      const ConeSpec* core = model.spec.inner.get();
      while (core && core->family == Family::EuclideanFactor) core = core->inner.get();
      if (core) {
        j["p"] = core->p;
        j["q"] = core->q;
      }
      break;
    }
    case Family::RoundLink:
      j["family"] = "round_link";
      j["d"] = model.spec.d;
      break;
  }
  j["n"] = model.n;
  j["minimizing"] = model.minimizing;
  j["homogeneous_link"] = model.homogeneous_link;
  if (model.homogeneous_link)
    j["a2_link"] = model.a2_const;
  else
    j["core_a2"] = model.core_a2;
  j["link_volume"] = model.link_volume;
  return j;
}

struct CellResult {
  ordered_json doc;
  int errors = 0;
  bool bounds_all_pass = true;
  bool has_bounds = false;
  ordered_json verdicts = ordered_json::array();
};

CellResult run_cell(const RunConfig& cfg, const ConeSpec& spec, double lambda,
                    std::uint64_t cell_seed) {
  CellResult cell;
  ordered_json& out = cell.doc;
  ordered_json errors = ordered_json::array();

  auto record_error = [&](const char* analysis, const std::exception& e) {
    ordered_json err;
    err["analysis"] = analysis;
    err["message"] = e.what();
    errors.push_back(err);
    ++cell.errors;
  };

  const OperatorKind kind = make_kind(cfg);
  const ConeModel model = build_cone(spec);
  out["cone"] = cone_block(model);
  out["kind"] = kind.name();
  out["lambda"] = lambda;
  out["w"] = cfg.w;
  ordered_json analyses = ordered_json::object();

  ShiftedOperator op;
  op.kind = kind;
  op.lambda = lambda;
  op.w = cfg.w;

  const bool has_skin_field = model.homogeneous_link ? model.a2_const > 0.0 : true;

  // skin
  if (wants(cfg, Analysis::Skin)) {
    try {
      ordered_json js;
      js["w"] = cfg.w;
      if (model.homogeneous_link) {
        SkinField field = skin_closed_form(model, cfg.w);
        js["zero_field"] = field.zero_field;
        if (!field.zero_field) {
          js["value_at_r1"] = field.eval(1.0);
          js["delta_lipschitz"] = field.lipschitz;
        }
        PointCloud cloud =
            cfg.cloud_points_csv.empty()
                ? ray_cloud(model, cfg.cloud_r_min, cfg.cloud_r_max, cfg.cloud_samples)
                : load_cloud_csv(cfg.cloud_points_csv, cfg.cloud_adjacency_csv);
        AxiomReport closed = skin_axiom_report(field, cloud);
        ordered_json ja;
        ja["dominance_min_margin"] = closed.dominance_min_margin;
        ja["lipschitz_measured"] = closed.lipschitz_measured;
        ja["scaling_max_rel_dev"] = closed.scaling_max_rel_dev;
        ja["zero_gauge"] = closed.zero_gauge;
        js["axioms_closed_form"] = ja;

        if (!field.zero_field) {
          SkinNumericOptions sopts;
          sopts.max_threads = 1;  // cells already run in parallel
          SkinNumericResult num = skin_numeric(cloud, cfg.w, sopts);
          AxiomReport numeric = skin_axiom_report(num, cloud, cfg.w, true, 2.0, sopts);
          double max_rel = 0.0;
          const double margin = std::max(1.2, 1.05 * (field.a_link + cfg.w) / field.a_link);
          int compared = 0, saturated = 0;
          for (int i = 0; i < cloud.size(); ++i) {
            if (num.saturated[i]) ++saturated;
            const double r = cloud.positions.row(i).norm();
            if (r < cfg.cloud_r_min * margin || r > 0.95 * cfg.cloud_r_max) continue;
            const double ref = field.eval(r);
            max_rel = std::max(max_rel, std::abs(num.values[i] - ref) / ref);
            ++compared;
          }
          ordered_json jn;
          jn["samples"] = cloud.size();
          jn["compared_interior_samples"] = compared;
          jn["max_rel_error_vs_closed_form"] = max_rel;
          jn["dominance_min_margin"] = numeric.dominance_min_margin;
          jn["lipschitz_measured"] = numeric.lipschitz_measured;
          jn["scaling_max_rel_dev"] = numeric.scaling_max_rel_dev;
          jn["saturated_count"] = saturated;
          js["numeric"] = jn;
        }
      } else {
        js["closed_form"] = "projected-core field; cross-section (a_core + w)/cos t";
        js["cross_section_at_axis"] = skin_cross_section(model, cfg.w, 0.0);
      }
      analyses["skin"] = js;
    } catch (const std::exception& e) {
      record_error("skin", e);
    }
  }

  // spectrum (also a dependency of exponents/bounds/lp/residual)
  const bool need_spectrum = wants(cfg, Analysis::Spectrum) || wants(cfg, Analysis::Exponents) ||
                             wants(cfg, Analysis::Bounds) || wants(cfg, Analysis::Lp) ||
                             wants(cfg, Analysis::Residual);
  bool have_spectrum = false;
  SpectralResult spectrum;
  CrossSectionOperator xop;
  if (need_spectrum) {
    try {
      xop = cross_section(op, model);
      if (xop.homogeneous) {
        spectrum = principal_eigen_link(xop, cfg.mesh_n);
      } else {
        ExhaustionSchedule schedule;
        schedule.eps_list = cfg.eps_schedule;
        spectrum = dirichlet_exhaustion(xop, schedule, cfg.mesh_n);
      }
      have_spectrum = true;
      if (wants(cfg, Analysis::Spectrum)) {
        ordered_json js;
        js["mu"] = spectrum.mu;
        js["closed_form"] = spectrum.closed_form;
        js["mu_sequence"] = spectrum.mu_sequence;
        js["mu_extrapolated"] = spectrum.mu_extrapolated;
        if (!spectrum.closed_form) js["measured_order"] = spectrum.measured_order;
        js["iterations"] = spectrum.iterations;
        js["residual"] = spectrum.residual;
        js["psi_normalization"] =
            "unit weighted L2; midpoint-scaled variant included; reference normalization at the "
            "unit-sphere cross-section differs";
        bool psi_positive = true;
        for (int i = 0; i < spectrum.psi.size(); ++i)
          if (!(spectrum.psi[i] > 0.0)) psi_positive = false;
        js["psi_positive"] = psi_positive;
        if (model.homogeneous_link && model.a2_const > 0.0) {
          WeightedEigenEstimate west =
              weighted_principal_eigenvalue(kind, model, cfg.w, cfg.windows, cfg.mesh_n);
          ordered_json jw;
          jw["windows"] = west.windows;
          jw["values"] = west.values;
          jw["extrapolated"] = west.extrapolated;
          js["lambda_skin"] = jw;
        }
        analyses["spectrum"] = js;
      }
    } catch (const std::exception& e) {
      record_error("spectrum", e);
    }
  }

  // exponents
  bool have_pair = false;
  ExponentPair pair;
  if (wants(cfg, Analysis::Exponents) || wants(cfg, Analysis::Bounds) ||
      wants(cfg, Analysis::Residual)) {
    if (have_spectrum) {
      try {
        pair = exponents_from_mu(spectrum.mu, model.n);
        have_pair = true;
        if (wants(cfg, Analysis::Exponents)) {
          ordered_json je;
          je["alpha_plus"] = pair.alpha_plus;
          je["alpha_minus"] = pair.alpha_minus;
          je["discriminant"] = pair.discriminant;
          analyses["exponents"] = je;
        }
      } catch (const std::exception& e) {
        record_error("exponents", e);
      }
    }
  }

  // bounds
  if (wants(cfg, Analysis::Bounds)) {
    if (have_pair) {
      try {
        const int n_param =
            kind.tag == OperatorTag::DimShiftedConformal ? kind.n_shift : model.n;
        BoundReport bounds = check_bounds(kind, n_param, model.n, lambda, spectrum.mu, pair);
        ordered_json jb;
        ordered_json verdicts = ordered_json::array();
        for (const BoundRecord& r : bounds.records) {
          ordered_json jv;
          jv["name"] = r.name;
          jv["required"] = r.required;
          jv["measured"] = r.measured;
          jv["margin"] = r.margin;
          jv["satisfied"] = r.satisfied;
          verdicts.push_back(jv);
          ordered_json agg = jv;
          agg["cone"] = model.spec.label();
          agg["kind"] = kind.name();
          agg["lambda"] = lambda;
          cell.verdicts.push_back(agg);
        }
        jb["verdicts"] = verdicts;
        jb["all_pass"] = bounds.all_satisfied();
        cell.has_bounds = true;
        cell.bounds_all_pass = bounds.all_satisfied();
        analyses["bounds"] = jb;
      } catch (const std::exception& e) {
        record_error("bounds", e);
      }
    } else if (need_spectrum) {
      record_error("bounds", std::runtime_error("dependency failed: exponents unavailable"));
    }
  }

  // hardy
  bool have_hardy = false;
  double k_direct = 0.0;
  if (wants(cfg, Analysis::Hardy)) {
    try {
      if (!has_skin_field)
        throw std::invalid_argument("hardy: zero skin field (trivial by convention)");
      SkinField field = skin_closed_form(model, cfg.w);
      HardyDirect direct = direct_hardy(model, field, cfg.windows, std::max(cfg.mesh_n, 8000));
      k_direct = direct.k_direct;
      have_hardy = true;
      ordered_json jh;
      jh["windows"] = direct.windows;
      jh["values"] = direct.values;
      jh["k_direct"] = direct.k_direct;
      jh["metric_corollary"] = direct.metric_corollary;

      // random-bump norm equivalence checks for the unshifted operator
      WeightedEigenEstimate west =
          weighted_principal_eigenvalue(kind, model, cfg.w, cfg.windows, cfg.mesh_n);
      ShiftedOperator op0 = op;
      op0.lambda = 0.0;
      Rng rng(cell_seed);
      RadialGrid grid(-5.0, 5.0, 512);
      ordered_json checks = ordered_json::array();
      for (int trial = 0; trial < 4; ++trial) {
        Eigen::VectorXd f = random_bump(rng, grid.n_nodes);
        H12Report h = h12_report(f, op0, model, grid, west.extrapolated);
        ordered_json jc;
        jc["f_l_f"] = h.f_l_f;
        jc["skin_sq"] = h.skin_sq;
        jc["h12_sq"] = h.h12_sq;
        jc["a_l"] = h.a_l;
        jc["beta_star"] = h.beta_star;
        jc["lower_ok"] = h.lower_ok;
        jc["upper_ok"] = h.upper_ok;
        checks.push_back(jc);
      }
      jh["norm_equivalence"] = checks;
      analyses["hardy"] = jh;
    } catch (const std::exception& e) {
      record_error("hardy", e);
    }
  }

  // cover
  if (wants(cfg, Analysis::Cover)) {
    try {
      if (!has_skin_field || !model.homogeneous_link)
        throw std::invalid_argument("cover: homogeneous singular models only");
      SkinField field = skin_closed_form(model, cfg.w);
      PointCloud cloud =
          cfg.cloud_points_csv.empty()
              ? ray_cloud(model, cfg.cloud_r_min, cfg.cloud_r_max, cfg.cloud_samples)
              : load_cloud_csv(cfg.cloud_points_csv, cfg.cloud_adjacency_csv);
      Eigen::VectorXd svals(cloud.size());
      for (int i = 0; i < cloud.size(); ++i) svals[i] = field.eval(cloud.positions.row(i).norm());
      CoverPipelineResult rep = cover_pipeline(model, field, cloud, svals, cfg.cover_xi);
      if (!cfg.cover_csv.empty()) dump_cover_csv(rep.cover, cloud, svals, cfg.cover_csv);
      ordered_json jc;
      jc["xi"] = cfg.cover_xi;
      jc["center_count"] = static_cast<int>(rep.cover.centers.size());
      jc["covering_number"] = rep.cover.covering_number;
      jc["separation_ok"] = rep.cover.separation_ok;
      jc["coverage_ok"] = rep.cover.coverage_ok;
      jc["nu_min_ball"] = rep.nu_min_ball;
      jc["nu_boundary"] = rep.nu_boundary;
      jc["k_cover"] = rep.k_cover;
      if (have_hardy) jc["k_cover_le_k_direct"] = rep.k_cover <= k_direct + 1e-6;
      analyses["cover"] = jc;
    } catch (const std::exception& e) {
      record_error("cover", e);
    }
  }

  // lp
  if (wants(cfg, Analysis::Lp)) {
    if (have_spectrum) {
      try {
        std::vector<double> p_list = xop.homogeneous ? std::vector<double>{} : cfg.lp_p;
        LpReport rep = lp_report(spectrum, xop, p_list, cfg.lp_q);
        ordered_json jl;
        jl["l1_to_inf_ratio"] = rep.l1_to_inf_ratio;
        jl["link_threshold"] = rep.guaranteed_link_threshold;
        jl["radial_threshold"] = rep.guaranteed_radial_threshold;
        ordered_json link = ordered_json::array();
        for (const LpRecord& r : rep.link_records) {
          ordered_json jr;
          jr["p"] = r.exponent;
          jr["convergent"] = r.convergent;
          jr["beyond_guaranteed_range"] = r.beyond_guaranteed_range;
          jr["partial_integrals"] = r.partial_integrals;
          link.push_back(jr);
        }
        jl["link"] = link;
        ordered_json radial = ordered_json::array();
        for (const LpRecord& r : rep.radial_records) {
          ordered_json jr;
          jr["q"] = r.exponent;
          jr["convergent"] = r.convergent;
          jr["beyond_guaranteed_range"] = r.beyond_guaranteed_range;
          jr["partial_integrals"] = r.partial_integrals;
          radial.push_back(jr);
        }
        jl["radial"] = radial;
        analyses["lp"] = jl;
      } catch (const std::exception& e) {
        record_error("lp", e);
      }
    } else {
      record_error("lp", std::runtime_error("dependency failed: spectrum unavailable"));
    }
  }

  // residual
  if (wants(cfg, Analysis::Residual)) {
    if (have_spectrum && have_pair) {
      try {
        ResidualReport rep =
            radial_residual(pair, spectrum, xop, 0.5, 2.0, {200, 400, 800});
        ordered_json jr;
        jr["resolutions"] = rep.resolutions;
        jr["residuals"] = rep.residuals;
        jr["order"] = rep.order;
        jr["scaling_fixed_point_dev"] = rep.scaling_fixed_point_dev;
        analyses["residual"] = jr;
      } catch (const std::exception& e) {
        record_error("residual", e);
      }
    } else {
      record_error("residual", std::runtime_error("dependency failed: spectrum unavailable"));
    }
  }

  out["analyses"] = analyses;
  out["errors"] = errors;

  // flattened scalars for the CSV emitter
  ordered_json flat;
  flat["mu"] = have_spectrum ? ordered_json(spectrum.mu) : ordered_json();
  flat["alpha_plus"] = have_pair ? ordered_json(pair.alpha_plus) : ordered_json();
  flat["alpha_minus"] = have_pair ? ordered_json(pair.alpha_minus) : ordered_json();
  flat["k_direct"] = have_hardy ? ordered_json(k_direct) : ordered_json();
  flat["k_cover"] = analyses.contains("cover") && analyses["cover"].contains("k_cover")
                        ? analyses["cover"]["k_cover"]
                        : ordered_json();
  flat["all_bounds_pass"] = cell.has_bounds ? ordered_json(cell.bounds_all_pass) : ordered_json();
  out["flat"] = flat;
  return cell;
}

}  // namespace

RunConfig parse_config(const ordered_json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  RunConfig cfg;

  auto num_in = [&](const ordered_json& j, const std::string& path, double lo, double hi) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v) || v < lo || v > hi)
      throw ConfigError(path, "value out of documented range [" + fmt17(lo) + ", " + fmt17(hi) + "]");
    return v;
  };

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) throw ConfigError("seed", "expected an integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("skin")) {
    const auto& js = doc["skin"];
    if (js.contains("w")) cfg.w = num_in(js["w"], "skin.w", 1e-6, 100.0);
  }
  if (doc.contains("mesh")) {
    const auto& jm = doc["mesh"];
    if (jm.contains("N")) cfg.mesh_n = static_cast<int>(num_in(jm["N"], "mesh.N", 16, 200000));
    if (jm.contains("windows")) {
      if (!jm["windows"].is_array()) throw ConfigError("mesh.windows", "expected an array");
      cfg.windows.clear();
      for (std::size_t i = 0; i < jm["windows"].size(); ++i)
        cfg.windows.push_back(
            num_in(jm["windows"][i], "mesh.windows[" + std::to_string(i) + "]", 0.1, 60.0));
      for (std::size_t i = 1; i < cfg.windows.size(); ++i)
        if (cfg.windows[i] <= cfg.windows[i - 1])
          throw ConfigError("mesh.windows", "windows must be strictly increasing");
    }
    if (jm.contains("exhaustion")) {
      const auto& je = jm["exhaustion"];
      const double eps0 = je.contains("eps0") ? num_in(je["eps0"], "mesh.exhaustion.eps0", 1e-8, 0.3)
                                              : 1e-2;
      const double factor =
          je.contains("factor") ? num_in(je["factor"], "mesh.exhaustion.factor", 0.05, 0.95) : 0.5;
      const int count = je.contains("count")
                            ? static_cast<int>(num_in(je["count"], "mesh.exhaustion.count", 1, 20))
                            : 6;
      cfg.eps_schedule = ExhaustionSchedule::geometric(eps0, factor, count).eps_list;
    }
  }
  if (cfg.eps_schedule.empty())
    cfg.eps_schedule = ExhaustionSchedule::geometric(1e-2, 0.5, 6).eps_list;

  if (doc.contains("cloud")) {
    const auto& jc = doc["cloud"];
    if (jc.contains("samples"))
      cfg.cloud_samples = static_cast<int>(num_in(jc["samples"], "cloud.samples", 2, 200000));
    if (jc.contains("r_min")) cfg.cloud_r_min = num_in(jc["r_min"], "cloud.r_min", 1e-9, 1e9);
    if (jc.contains("r_max")) cfg.cloud_r_max = num_in(jc["r_max"], "cloud.r_max", 1e-9, 1e9);
    if (!(cfg.cloud_r_min < cfg.cloud_r_max))
      throw ConfigError("cloud.r_max", "r_max must exceed r_min");
    if (jc.contains("xi")) cfg.cover_xi = num_in(jc["xi"], "cloud.xi", 1e-9, 0.999);
    if (jc.contains("points_csv")) cfg.cloud_points_csv = jc["points_csv"].get<std::string>();
    if (jc.contains("adjacency_csv"))
      cfg.cloud_adjacency_csv = jc["adjacency_csv"].get<std::string>();
    if (!cfg.cloud_points_csv.empty() != !cfg.cloud_adjacency_csv.empty())
      throw ConfigError("cloud.adjacency_csv", "points_csv and adjacency_csv come together");
    if (jc.contains("cover_csv")) cfg.cover_csv = jc["cover_csv"].get<std::string>();
  }
  if (doc.contains("lp")) {
    const auto& jl = doc["lp"];
    if (jl.contains("p")) {
      cfg.lp_p.clear();
      for (std::size_t i = 0; i < jl["p"].size(); ++i)
        cfg.lp_p.push_back(num_in(jl["p"][i], "lp.p[" + std::to_string(i) + "]", 0.1, 50.0));
    }
    if (jl.contains("q")) {
      cfg.lp_q.clear();
      for (std::size_t i = 0; i < jl["q"].size(); ++i)
        cfg.lp_q.push_back(num_in(jl["q"][i], "lp.q[" + std::to_string(i) + "]", 0.1, 50.0));
    }
  }

  if (doc.contains("cone")) {
    cfg.cones.push_back(parse_cone(doc["cone"], "cone"));
  }
  if (doc.contains("cones")) {
    if (!doc["cones"].is_array()) throw ConfigError("cones", "expected an array");
    for (std::size_t i = 0; i < doc["cones"].size(); ++i)
      cfg.cones.push_back(parse_cone(doc["cones"][i], "cones[" + std::to_string(i) + "]"));
  }
  if (cfg.cones.empty()) throw ConfigError("cone", "at least one cone spec required");

  if (doc.contains("operator")) {
    const auto& jo = doc["operator"];
    if (jo.contains("kind")) {
      if (!jo["kind"].is_string()) throw ConfigError("operator.kind", "expected a string");
      cfg.kind_name = jo["kind"].get<std::string>();
    }
    if (jo.contains("s_constant"))
      cfg.s_constant = num_in(jo["s_constant"], "operator.s_constant", -1e6, 1e6);
    if (jo.contains("n_shift"))
      cfg.n_shift = static_cast<int>(num_in(jo["n_shift"], "operator.n_shift", 2, 1000));
    if (jo.contains("lambda")) {
      cfg.lambdas.clear();
      if (jo["lambda"].is_array()) {
        if (jo["lambda"].size() > 256) throw ConfigError("operator.lambda", "grid too large");
        for (std::size_t i = 0; i < jo["lambda"].size(); ++i)
          cfg.lambdas.push_back(
              num_in(jo["lambda"][i], "operator.lambda[" + std::to_string(i) + "]", -100.0, 100.0));
      } else {
        cfg.lambdas.push_back(num_in(jo["lambda"], "operator.lambda", -100.0, 100.0));
      }
      if (cfg.lambdas.empty()) throw ConfigError("operator.lambda", "empty lambda grid");
    }
  }
  // validate the kind name eagerly for schema errors
  make_kind(cfg);

  if (!doc.contains("analyses") || !doc["analyses"].is_array() || doc["analyses"].empty())
    throw ConfigError("analyses", "at least one analysis required");
  for (std::size_t i = 0; i < doc["analyses"].size(); ++i) {
    const auto& ja = doc["analyses"][i];
    if (!ja.is_string()) throw ConfigError("analyses[" + std::to_string(i) + "]", "expected a string");
    cfg.analyses.push_back(
        parse_analysis(ja.get<std::string>(), "analyses[" + std::to_string(i) + "]"));
  }

  if (doc.contains("output")) {
    const auto& jo = doc["output"];
    if (jo.contains("format")) {
      cfg.format = jo["format"].get<std::string>();
      if (cfg.format != "json" && cfg.format != "csv")
        throw ConfigError("output.format", "format must be json or csv");
    }
    if (jo.contains("path")) cfg.out_path = jo["path"].get<std::string>();
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ConfigError("", std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

Report run_config(const RunConfig& cfg) {
  struct Cell {
    ConeSpec spec;
    double lambda;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const ConeSpec& spec : cfg.cones)
    for (double lambda : cfg.lambdas)
      cells.push_back({spec, lambda, cfg.seed + 0x9e3779b97f4a7c15ull * (cells.size() + 1)});

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = run_cell(cfg, cells[i].spec, cells[i].lambda, cells[i].seed);
      } catch (const std::exception& e) {
        CellResult bad;
        bad.doc["cone"] = cells[i].spec.label();
        bad.doc["lambda"] = cells[i].lambda;
        ordered_json err;
        err["analysis"] = "cell";
        err["message"] = e.what();
        bad.doc["errors"] = ordered_json::array({err});
        bad.errors = 1;
        results[i] = std::move(bad);
      }
    }
  };
  int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Report report;
  ordered_json& doc = report.doc;
  ordered_json prov;
  prov["tool"] = "cone-spectra";
  prov["version"] = kToolVersion;
  ordered_json echo;
  echo["seed"] = cfg.seed;
  echo["w"] = cfg.w;
  echo["mesh_n"] = cfg.mesh_n;
  echo["windows"] = cfg.windows;
  echo["eps_schedule"] = cfg.eps_schedule;
  echo["kind"] = cfg.kind_name;
  echo["lambdas"] = cfg.lambdas;
  prov["config"] = echo;
  doc["provenance"] = prov;

  ordered_json runs = ordered_json::array();
  ordered_json verdicts = ordered_json::array();
  for (CellResult& cell : results) {
    report.analysis_errors += cell.errors;
    if (cell.has_bounds && !cell.bounds_all_pass) report.all_verdicts_pass = false;
    for (auto& v : cell.verdicts) verdicts.push_back(v);
    runs.push_back(std::move(cell.doc));
  }
  doc["runs"] = runs;
  doc["verdicts"] = verdicts;
  doc["all_verdicts_pass"] = report.all_verdicts_pass;
  return report;
}

namespace {

void dump_impl(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad1(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        out += ordered_json(it.key()).dump();
        out += ": ";
        dump_impl(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        dump_impl(v, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::detail::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      out += fmt17(v);
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

std::string csv_field(const ordered_json& j) {
  if (j.is_null()) return "";
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_float()) return fmt17(j.get<double>());
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_string()) return j.get<std::string>();
  return "";
}

}  // namespace

std::string dump_json17(const ordered_json& doc, int indent) {
  std::string out;
  dump_impl(doc, out, indent, 0);
  out += "\n";
  return out;
}

std::string report_to_csv(const Report& report) {
  std::string out =
      "cone,family,p,q,m,n,kind,lambda,w,mu,alpha_plus,alpha_minus,k_direct,k_cover,all_bounds_"
      "pass\n";
  if (!report.doc.contains("runs")) return out;
  for (const auto& run : report.doc["runs"]) {
    const ordered_json cone = run.contains("cone") ? run["cone"] : ordered_json();
    auto cone_field = [&](const char* key) {
      return cone.is_object() && cone.contains(key) ? csv_field(cone[key]) : "";
    };
    const ordered_json flat = run.contains("flat") ? run["flat"] : ordered_json();
    auto flat_field = [&](const char* key) {
      return flat.is_object() && flat.contains(key) ? csv_field(flat[key]) : "";
    };
    out += cone.is_object() ? cone_field("label") : csv_field(run.value("cone", ordered_json()));
    out += "," + cone_field("family");
    out += "," + cone_field("p");
    out += "," + cone_field("q");
    out += "," + cone_field("m");
    out += "," + cone_field("n");
    out += "," + (run.contains("kind") ? csv_field(run["kind"]) : "");
    out += "," + (run.contains("lambda") ? csv_field(run["lambda"]) : "");
    out += "," + (run.contains("w") ? csv_field(run["w"]) : "");
    out += "," + flat_field("mu");
    out += "," + flat_field("alpha_plus");
    out += "," + flat_field("alpha_minus");
    out += "," + flat_field("k_direct");
    out += "," + flat_field("k_cover");
    out += "," + flat_field("all_bounds_pass");
    out += "\n";
  }
  return out;
}

void emit(const Report& report, const std::string& format, const std::string& path) {
  std::string payload;
  if (format == "json") {
    payload = dump_json17(report.doc);
  } else if (format == "csv") {
    payload = report_to_csv(report);
  } else {
    throw std::invalid_argument("emit: format must be json or csv");
  }
  if (path == "-" || path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open output path " + path);
  out << payload;
  if (!out) throw std::runtime_error("emit: write failed for " + path);
}

}  // namespace conespectra
