#include "conespectra/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace conespectra {

namespace {

constexpr double kPi = std::numbers::pi;

// int_0^{pi/2} sin^a t cos^b t dt = B((a+1)/2, (b+1)/2) / 2
double half_beta(int a, int b) {
  const double x = 0.5 * (a + 1);
  const double y = 0.5 * (b + 1);
  return 0.5 * std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

int nesting_depth(const ConeSpec& spec) {
  if (spec.family != Family::EuclideanFactor) return 0;
  return 1 + (spec.inner ? nesting_depth(*spec.inner) : 0);
}

}  // namespace

ConeSpec ConeSpec::product_of_spheres(int p, int q) {
  if (p < 1 || q < 1) throw std::invalid_argument("product_of_spheres: p, q must be >= 1");
  ConeSpec s;
  s.family = Family::ProductOfSpheres;
  s.p = p;
  s.q = q;
  return s;
}

ConeSpec ConeSpec::euclidean_factor(int m, ConeSpec inner) {
  if (m < 1) throw std::invalid_argument("euclidean_factor: m must be >= 1");
  ConeSpec s;
  s.family = Family::EuclideanFactor;
  s.m = m;
  s.inner = std::make_shared<const ConeSpec>(std::move(inner));
  return s;
}

ConeSpec ConeSpec::round_link(int d) {
  if (d < 2) throw std::invalid_argument("round_link: d must be >= 2");
  ConeSpec s;
  s.family = Family::RoundLink;
  s.d = d;
  return s;
}

int ConeSpec::dim() const {
  switch (family) {
    case Family::ProductOfSpheres: return p + q + 1;
    case Family::EuclideanFactor: return m + (inner ? inner->dim() : 0);
    case Family::RoundLink: return d + 1;
  }
  return 0;
}

std::string ConeSpec::label() const {
  switch (family) {
    case Family::ProductOfSpheres:
      return "C(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case Family::EuclideanFactor:
      return "R^" + std::to_string(m) + "x" + (inner ? inner->label() : "?");
    case Family::RoundLink:
      return "flat(" + std::to_string(d) + ")";
  }
  return "?";
}

ConeModel build_cone(const ConeSpec& spec) {
  ConeModel model;

  switch (spec.family) {
    case Family::ProductOfSpheres: {
      if (spec.p < 1 || spec.q < 1)
        throw std::invalid_argument("build_cone: product_of_spheres needs p, q >= 1");
      model.spec = spec;
      model.n = spec.p + spec.q + 1;
      model.link_dim = model.n - 1;
      model.homogeneous_link = true;
      model.singular_link = false;
      // principal curvatures of S^p(a_p) x S^q(a_q) in S^{p+q+1} are
      // sqrt(q/p) (p times) and -sqrt(p/q) (q times)
      model.a2_const = static_cast<double>(spec.p + spec.q);
      model.minimizing = (spec.p + spec.q >= 6);
      const double ap = std::sqrt(double(spec.p) / (spec.p + spec.q));
      const double aq = std::sqrt(double(spec.q) / (spec.p + spec.q));
      model.link_volume = sphere_volume(spec.p) * std::pow(ap, spec.p) *
                          sphere_volume(spec.q) * std::pow(aq, spec.q);
      return model;
    }

    case Family::RoundLink: {
      if (spec.d < 2) throw std::invalid_argument("build_cone: round_link needs d >= 2");
      model.spec = spec;
      model.n = spec.d + 1;
      model.link_dim = spec.d;
      model.homogeneous_link = true;
      model.singular_link = false;
      model.a2_const = 0.0;
      model.minimizing = true;  // flat R^n
      model.link_volume = sphere_volume(spec.d);
      return model;
    }

    case Family::EuclideanFactor: {
      if (nesting_depth(spec) > 2)
        throw std::invalid_argument("build_cone: euclidean_factor nesting depth > 2");
      // flatten R^m x (R^m' x C) to R^{m+m'} x C; the factors share one
      // join angle by symmetry
      int m = spec.m;
      const ConeSpec* core = spec.inner.get();
      if (!core) throw std::invalid_argument("build_cone: euclidean_factor without inner spec");
      if (core->family == Family::EuclideanFactor) {
        m += core->m;
        core = core->inner.get();
        if (!core) throw std::invalid_argument("build_cone: euclidean_factor without inner spec");
      }
      if (core->family == Family::RoundLink)
        throw std::invalid_argument(
            "build_cone: round_link inside euclidean_factor is rejected (flat inner cone has "
            "empty singular set)");
      if (core->family != Family::ProductOfSpheres)
        throw std::invalid_argument("build_cone: unsupported euclidean_factor core");

      const ConeModel core_model = build_cone(*core);
      model.spec = spec;
      model.n = m + core_model.n;
      model.link_dim = model.n - 1;
      model.homogeneous_link = false;
      model.singular_link = true;
      model.ef_m = m;
      model.core_link_dim = core_model.link_dim;
      model.core_a2 = core_model.a2_const;
      model.minimizing = core_model.minimizing;
      // vol(S^{m-1}) * vol(core link) * int sin^{m-1} cos^{core_link_dim};
      // for m = 1 the full interval (-pi/2, pi/2) doubles the half-line value
      const double angular = half_beta(m - 1, core_model.link_dim);
      model.link_volume = (m == 1 ? 2.0 * angular : sphere_volume(m - 1) * angular) *
                          core_model.link_volume;
      return model;
    }
  }
  throw std::invalid_argument("build_cone: unknown family");
}

double ConeModel::a2_link(double t) const {
  if (homogeneous_link) return a2_const;
  const double c = std::cos(t);
  return core_a2 / (c * c);
}

double ConeModel::weight(double t) const {
  if (homogeneous_link) return 1.0;
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double sp = (ef_m == 1) ? 1.0 : std::pow(std::abs(s), ef_m - 1);
  return sp * std::pow(std::abs(c), core_link_dim) * ((c < 0) ? 0.0 : 1.0);
}

double ConeModel::angle_lo() const {
  if (homogeneous_link) return 0.0;
  return (ef_m == 1) ? -0.5 * kPi : 0.0;
}

double ConeModel::angle_hi() const { return homogeneous_link ? 0.0 : 0.5 * kPi; }

bool ConeModel::angle_is_singular(double t) const {
  if (!singular_link) return false;
  if (t >= angle_hi() - 1e-14) return true;  // cos t -> 0 endpoint(s)
  if (ef_m == 1) return t <= angle_lo() + 1e-14;
  return t < angle_lo();  // the axis at t = 0 is a regular point for m >= 2
}

double second_fundamental_norm(const ConeModel& model, double r, double angle) {
  if (!(r > 0.0)) throw std::invalid_argument("second_fundamental_norm: r must be > 0");
  if (model.angle_is_singular(angle))
    throw std::invalid_argument("second_fundamental_norm: angle lies in the link singular set");
  return std::sqrt(model.a2_link(angle)) / r;
}

double scalar_curvature(const ConeModel& model, double r, double angle) {
  if (!(r > 0.0)) throw std::invalid_argument("scalar_curvature: r must be > 0");
  if (model.angle_is_singular(angle))
    throw std::invalid_argument("scalar_curvature: angle lies in the link singular set");
  return -model.a2_link(angle) / (r * r);
}

double sphere_volume(int d) {
  if (d < 0) throw std::invalid_argument("sphere_volume: d must be >= 0");
  return 2.0 * std::pow(kPi, 0.5 * (d + 1)) / std::exp(std::lgamma(0.5 * (d + 1)));
}

std::vector<CatalogEntry> catalog_entries() {
  return {
      {"product_of_spheres", "cone over S^p(sqrt(p/(p+q))) x S^q(sqrt(q/(p+q)))",
       "minimizing iff p+q >= 6"},
      {"euclidean_factor", "R^m x inner cone (inner must be product_of_spheres)",
       "minimizing iff inner is minimizing"},
      {"round_link", "flat R^{d+1} (cone over round S^d)", "always minimizing, regular"},
  };
}

}  // namespace conespectra
