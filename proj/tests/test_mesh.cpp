#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conespectra/geometry.hpp"
#include "conespectra/mesh.hpp"
#include "conespectra/numeric.hpp"

using namespace conespectra;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("radial grid invariants") {
  RadialGrid g(-2.0, 3.0, 64);
  Eigen::VectorXd r = g.r_nodes();
  for (int i = 0; i + 1 < r.size(); ++i) CHECK(r[i] < r[i + 1]);
  CHECK_THROWS_AS(RadialGrid(1.0, 1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid(0.0, 1.0, 8), std::invalid_argument);
}

TEST_CASE("vibrating string eigenvalue") {
  // -psi'' = mu psi on (0, pi), Dirichlet: mu_1 = 1
  SturmLiouvilleProblem p;
  p.nodes = Eigen::VectorXd::LinSpaced(2000, 0.0, kPi);
  p.weight = [](double) { return 1.0; };
  p.potential = [](double) { return 0.0; };
  p.left = p.right = Boundary::Dirichlet;
  AssembledForms forms = assemble(p);
  EigenPair pair = lowest_eigenpair(forms.pencil);
  CHECK(std::abs(pair.value - 1.0) < 1e-6);
}

TEST_CASE("sphere suspension recovers S^6 harmonics") {
  ConeModel flat = build_cone(ConeSpec::round_link(6));
  LinkProblem lp = suspension_problem(flat, [](double) { return 0.0; }, 0.0, 4000);
  REQUIRE_FALSE(lp.zero_dimensional);
  CHECK(lp.sl.left == Boundary::Natural);
  CHECK(lp.sl.right == Boundary::Natural);
  CHECK(lp.sl.weight(1.0) == doctest::Approx(std::pow(std::sin(1.0), 5)).epsilon(1e-15));
  AssembledForms forms = assemble(lp.sl);
  EigenPair ground = kth_eigenpair(forms.pencil, 0);
  EigenPair first = kth_eigenpair(forms.pencil, 1);
  CHECK(std::abs(ground.value) < 1e-8);
  // zonal spectrum l(l+5), l = 1
  CHECK(std::abs(first.value - 6.0) < 1e-4);
}

TEST_CASE("sphere eigenvalue converges at second order") {
  ConeModel flat = build_cone(ConeSpec::round_link(6));
  std::vector<double> hs, errs;
  for (int n : {400, 800, 1600}) {
    LinkProblem lp = suspension_problem(flat, [](double) { return 0.0; }, 0.0, n);
    AssembledForms forms = assemble(lp.sl);
    EigenPair first = kth_eigenpair(forms.pencil, 1);
    hs.push_back(1.0 / n);
    errs.push_back(std::abs(first.value - 6.0));
  }
  const double order = fit_order(hs, errs);
  CHECK(order >= 1.8);
  CHECK(order <= 2.2);
}

TEST_CASE("suspension problem for the euclidean factor") {
  ConeModel rx = build_cone(ConeSpec::euclidean_factor(1, ConeSpec::product_of_spheres(3, 3)));
  auto potential = [](double t) { return -6.0 / (std::cos(t) * std::cos(t)); };
  LinkProblem lp = suspension_problem(rx, potential, 1e-2, 800);
  REQUIRE_FALSE(lp.zero_dimensional);
  CHECK(lp.sl.left == Boundary::Dirichlet);
  CHECK(lp.sl.right == Boundary::Dirichlet);
  CHECK(lp.sl.lo() == doctest::Approx(-(0.5 * kPi - 1e-2)).epsilon(1e-14));
  CHECK(lp.sl.hi() == doctest::Approx(0.5 * kPi - 1e-2).epsilon(1e-14));
  CHECK(lp.sl.weight(0.5) == doctest::Approx(std::pow(std::cos(0.5), 6)).epsilon(1e-15));

  ConeModel r2 = build_cone(ConeSpec::euclidean_factor(2, ConeSpec::product_of_spheres(3, 3)));
  LinkProblem lp2 = suspension_problem(r2, potential, 1e-2, 800);
  CHECK(lp2.sl.left == Boundary::Natural);
  CHECK(lp2.sl.lo() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(lp2.sl.weight(0.5) ==
        doctest::Approx(std::sin(0.5) * std::pow(std::cos(0.5), 6)).epsilon(1e-15));
}

TEST_CASE("homogeneous links reduce to the zero-dimensional flag") {
  ConeModel c33 = build_cone(ConeSpec::product_of_spheres(3, 3));
  LinkProblem lp = suspension_problem(c33, [](double) { return -6.0; }, 0.0, 100);
  CHECK(lp.zero_dimensional);
  CHECK(lp.constant_potential == -6.0);
}

TEST_CASE("oversized truncation is rejected") {
  ConeModel rx = build_cone(ConeSpec::euclidean_factor(1, ConeSpec::product_of_spheres(3, 3)));
  CHECK_THROWS_AS(suspension_problem(rx, [](double) { return 0.0; }, 1.0 + 0.5 * kPi, 100),
                  std::invalid_argument);
  // eps = 1 leaves a sliver narrower than the grading can anchor
  CHECK_THROWS_AS(suspension_problem(rx, [](double) { return 0.0; }, 1.0, 100),
                  std::invalid_argument);
  ExhaustionSchedule too_big;
  too_big.eps_list = {1.5};
  CHECK_THROWS_AS(exhaustion(rx, [](double) { return 0.0; }, too_big, 100),
                  std::invalid_argument);
}

TEST_CASE("non-finite potential inside the domain is rejected") {
  SturmLiouvilleProblem p;
  p.nodes = Eigen::VectorXd::LinSpaced(100, 0.0, 1.0);
  p.weight = [](double) { return 1.0; };
  p.potential = [](double t) { return t > 0.5 ? std::nan("") : 0.0; };
  p.left = p.right = Boundary::Dirichlet;
  CHECK_THROWS_AS(assemble(p), std::invalid_argument);
}

TEST_CASE("assembled stiffness is symmetric by construction") {
  ConeModel rx = build_cone(ConeSpec::euclidean_factor(1, ConeSpec::product_of_spheres(3, 3)));
  LinkProblem lp = suspension_problem(rx, [](double t) { return -6.0 / (std::cos(t) * std::cos(t)); },
                                      1e-2, 500);
  AssembledForms forms = assemble(lp.sl);
  // the tridiagonal pencil stores one off-diagonal: K - K^T == 0 identically;
  // check the mass is strictly positive as well
  for (int i = 0; i < forms.pencil.size(); ++i) CHECK(forms.pencil.m_diag[i] > 0.0);
  CHECK(forms.pencil.k_off.size() == forms.pencil.size() - 1);
}

TEST_CASE("exhaustion members nest") {
  ConeModel rx = build_cone(ConeSpec::euclidean_factor(1, ConeSpec::product_of_spheres(3, 3)));
  ExhaustionSchedule sched;
  sched.eps_list = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
  auto members = exhaustion(rx, [](double t) { return -6.0 / (std::cos(t) * std::cos(t)); }, sched,
                            600);
  REQUIRE(members.size() == 4);
  for (std::size_t i = 0; i + 1 < members.size(); ++i) {
    CHECK(members[i].sl.lo() > members[i + 1].sl.lo());
    CHECK(members[i].sl.hi() < members[i + 1].sl.hi());
    // node nesting: every node of the coarser domain appears in the finer
    int j = 0;
    for (int a = 0; a < members[i].sl.nodes.size(); ++a) {
      const double t = members[i].sl.nodes[a];
      while (j < members[i + 1].sl.nodes.size() && members[i + 1].sl.nodes[j] < t - 1e-13) ++j;
      REQUIRE(j < members[i + 1].sl.nodes.size());
      CHECK(std::abs(members[i + 1].sl.nodes[j] - t) < 1e-12);
    }
  }
}

TEST_CASE("singleton schedule") {
  ConeModel rx = build_cone(ConeSpec::euclidean_factor(1, ConeSpec::product_of_spheres(3, 3)));
  ExhaustionSchedule sched;
  sched.eps_list = {1e-2};
  auto members = exhaustion(rx, [](double t) { return -6.0 / (std::cos(t) * std::cos(t)); }, sched,
                            400);
  CHECK(members.size() == 1);
}

TEST_CASE("discrete eigenvalues nonincreasing along the schedule") {
  ConeModel rx = build_cone(ConeSpec::euclidean_factor(1, ConeSpec::product_of_spheres(3, 3)));
  ExhaustionSchedule sched = ExhaustionSchedule::geometric(1e-2, 0.5, 3);
  auto members = exhaustion(rx, [](double t) { return -6.0 / (std::cos(t) * std::cos(t)); }, sched,
                            800);
  double prev = std::numeric_limits<double>::infinity();
  for (const LinkProblem& member : members) {
    AssembledForms forms = assemble(member.sl);
    EigenPair pair = lowest_eigenpair(forms.pencil);
    CHECK(pair.value <= prev + 1e-10);
    prev = pair.value;
  }
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(ExhaustionSchedule::geometric(0.0, 0.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(ExhaustionSchedule::geometric(1e-2, 1.5, 3), std::invalid_argument);
  ExhaustionSchedule bad;
  bad.eps_list = {1e-3, 1e-2};
  CHECK_THROWS_AS(bad.validate(kPi), std::invalid_argument);
  ExhaustionSchedule empty;
  CHECK_THROWS_AS(empty.validate(kPi), std::invalid_argument);
}
