#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "conespectra/report.hpp"

using namespace conespectra;

namespace {

ordered_json anchor_doc() {
  ordered_json doc;
  doc["seed"] = 42;
  doc["skin"]["w"] = 1.0;
  doc["mesh"]["N"] = 1200;
  doc["mesh"]["windows"] = {5.0, 10.0};
  doc["cloud"]["samples"] = 600;
  doc["cloud"]["r_min"] = 0.1;
  doc["cloud"]["r_max"] = 10.0;
  doc["cloud"]["xi"] = 0.05;
  doc["cone"]["family"] = "product_of_spheres";
  doc["cone"]["p"] = 3;
  doc["cone"]["q"] = 3;
  doc["operator"]["kind"] = "conformal";
  doc["operator"]["lambda"] = 0.02;
  doc["analyses"] = {"skin", "spectrum", "exponents", "bounds", "hardy", "cover", "lp", "residual"};
  return doc;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(CONE_SPECTRA_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("unknown family reports the field path") {
  ordered_json doc = anchor_doc();
  doc["cone"]["family"] = "lawson";
  try {
    parse_config(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path == "cone.family");
    CHECK(std::string(e.what()).find("unknown family") != std::string::npos);
  }
}

TEST_CASE("schema validation catches ranges") {
  ordered_json doc = anchor_doc();
  doc["mesh"]["N"] = 4;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = anchor_doc();
  doc["analyses"] = ordered_json::array();
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = anchor_doc();
  doc["operator"]["kind"] = "helmholtz";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc = anchor_doc();
  doc["mesh"]["windows"] = {10.0, 5.0};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("anchor run passes all verdicts") {
  RunConfig cfg = parse_config(anchor_doc());
  cfg.jobs = 2;
  Report rep = run_config(cfg);
  CHECK(rep.analysis_errors == 0);
  CHECK(rep.all_verdicts_pass);
  REQUIRE(rep.doc["runs"].size() == 1);
  const auto& run = rep.doc["runs"][0];
  CHECK(run["analyses"].contains("bounds"));
  CHECK(run["analyses"]["bounds"]["all_pass"].get<bool>());
  const double mu = run["analyses"]["spectrum"]["mu"].get<double>();
  CHECK(std::abs(mu + 1.4879795897113272) < 1e-12);
  // every verdict names its bound
  for (const auto& v : rep.doc["verdicts"]) {
    CHECK(v.contains("name"));
    CHECK(v["name"].is_string());
    CHECK(!v["name"].get<std::string>().empty());
  }
}

TEST_CASE("lambda grid sweeps produce one run per cell with decreasing discriminant") {
  ordered_json doc = anchor_doc();
  doc["operator"]["lambda"] = {0.0, 0.01, 0.02, 0.04};
  doc["analyses"] = {"spectrum", "exponents"};
  RunConfig cfg = parse_config(doc);
  Report rep = run_config(cfg);
  REQUIRE(rep.doc["runs"].size() == 4);
  double prev = 1e300;
  for (const auto& run : rep.doc["runs"]) {
    const double disc = run["analyses"]["exponents"]["discriminant"].get<double>();
    CHECK(disc < prev);
    prev = disc;
  }
}

TEST_CASE("json report is byte-identical across repeated runs and job counts") {
  ordered_json doc = anchor_doc();
  doc["operator"]["lambda"] = {0.0, 0.01, 0.02};
  doc["analyses"] = {"spectrum", "exponents", "bounds", "hardy"};
  RunConfig cfg = parse_config(doc);
  cfg.jobs = 4;
  const std::string a = dump_json17(run_config(cfg).doc);
  const std::string b = dump_json17(run_config(cfg).doc);
  cfg.jobs = 1;
  const std::string c = dump_json17(run_config(cfg).doc);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.size() > 1000);
}

TEST_CASE("floats are serialized with 17 significant digits") {
  ordered_json doc;
  doc["x"] = 0.1;
  doc["y"] = 2.0;
  const std::string s = dump_json17(doc, 0);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("csv emitter") {
  RunConfig cfg = parse_config(anchor_doc());
  Report rep = run_config(cfg);
  const std::string csv = report_to_csv(rep);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "cone,family,p,q,m,n,kind,lambda,w,mu,alpha_plus,alpha_minus,k_direct,k_cover,all_bounds_"
        "pass");
  std::string row;
  REQUIRE(std::getline(in, row));
  CHECK(row.find("C(3,3)") == 0);
  CHECK(row.find("true") != std::string::npos);

  // empty report keeps the header
  Report empty;
  const std::string empty_csv = report_to_csv(empty);
  CHECK(empty_csv.rfind("cone,family", 0) == 0);
}

TEST_CASE("json round trip is structurally stable") {
  RunConfig cfg = parse_config(anchor_doc());
  Report rep = run_config(cfg);
  const std::string payload = dump_json17(rep.doc);
  ordered_json parsed = ordered_json::parse(payload);
  CHECK(parsed["runs"].size() == rep.doc["runs"].size());
  CHECK(dump_json17(parsed) == payload);
}

TEST_CASE("cli binary exit codes") {
  write_file("cfg_ok.json", dump_json17(anchor_doc()));
  ordered_json bad = anchor_doc();
  bad["cone"]["family"] = "unknown";
  write_file("cfg_bad.json", dump_json17(bad));

  CHECK(run_binary("validate --config cfg_ok.json") == 0);
  CHECK(run_binary("validate --config cfg_bad.json") == 1);
  CHECK(run_binary("catalog") == 0);

  // analysis failure: jacobi on a non-minimizing cone breaches the adapted
  // regime (negative discriminant in the exponents block)
  ordered_json fail2 = anchor_doc();
  fail2["cone"] = ordered_json{{"family", "product_of_spheres"}, {"p", 2}, {"q", 3}};
  fail2["operator"]["kind"] = "jacobi";
  fail2["operator"]["lambda"] = 0.0;
  fail2["analyses"] = {"spectrum", "exponents"};
  write_file("cfg_fail2.json", dump_json17(fail2));
  CHECK(run_binary("run --config cfg_fail2.json --out out2.json") == 2);

  // verdict failure under --strict-verdicts: conformal quarter bound breaks
  // on the non-minimizing C(2,3) at lambda = 0.02
  ordered_json fail3 = anchor_doc();
  fail3["cone"] = ordered_json{{"family", "product_of_spheres"}, {"p", 2}, {"q", 3}};
  fail3["analyses"] = {"spectrum", "exponents", "bounds"};
  write_file("cfg_fail3.json", dump_json17(fail3));
  CHECK(run_binary("run --config cfg_fail3.json --strict-verdicts --out out3.json") == 3);
  CHECK(run_binary("run --config cfg_fail3.json --out out3.json") == 0);

  write_file("cfg_small.json", dump_json17(fail3));
  CHECK(run_binary("run --config cfg_small.json --format csv --out out_small.csv") == 0);

  for (const char* f : {"cfg_ok.json", "cfg_bad.json", "cfg_fail2.json", "cfg_fail3.json",
                        "cfg_small.json", "out2.json", "out3.json", "out_small.csv"})
    std::remove(f);
}

TEST_CASE("unwritable output path fails") {
  RunConfig cfg = parse_config(anchor_doc());
  Report rep;
  rep.doc["x"] = 1;
  CHECK_THROWS_AS(emit(rep, "json", "/nonexistent_dir/report.json"), std::runtime_error);
}

TEST_CASE("external cloud import and cover dump through the config") {
  // write a small ray cloud in the documented CSV layout
  ordered_json doc = anchor_doc();
  doc["analyses"] = {"skin", "cover"};
  doc["cloud"]["points_csv"] = "cli_points.csv";
  doc["cloud"]["adjacency_csv"] = "cli_adjacency.csv";
  doc["cloud"]["cover_csv"] = "cli_cover.csv";
  {
    std::ofstream p("cli_points.csv");
    std::ofstream a("cli_adjacency.csv");
    p << "x1,x2,absA\n";
    a << "i,j,length\n";
    const double a6 = std::sqrt(6.0);
    double prev = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double r = 0.1 * std::pow(100.0, i / 399.0);
      p << r << ",0," << (a6 / r) << "\n";
      if (i > 0) a << (i - 1) << "," << i << "," << (r - prev) << "\n";
      prev = r;
    }
  }
  RunConfig cfg = parse_config(doc);
  Report rep = run_config(cfg);
  CHECK(rep.analysis_errors == 0);
  const auto& run = rep.doc["runs"][0];
  CHECK(run["analyses"]["skin"]["numeric"]["samples"].get<int>() == 400);
  CHECK(run["analyses"]["cover"]["k_cover"].get<double>() > 0.0);
  std::ifstream dumped("cli_cover.csv");
  CHECK(dumped.good());
  for (const char* f : {"cli_points.csv", "cli_adjacency.csv", "cli_cover.csv"}) std::remove(f);
}

TEST_CASE("mismatched cloud csv options are rejected") {
  ordered_json doc = anchor_doc();
  doc["cloud"]["points_csv"] = "only_points.csv";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}
