#pragma once

#include <memory>
#include <string>
#include <vector>

namespace conespectra {

// Catalog of explicit area-minimizing cones. Every member reduces, by
// symmetry, to at most one effective link coordinate.
enum class Family { ProductOfSpheres, EuclideanFactor, RoundLink };

struct ConeSpec {
  Family family = Family::ProductOfSpheres;
  int p = 0, q = 0;                        // ProductOfSpheres
  int m = 0;                               // EuclideanFactor
  int d = 0;                               // RoundLink
  std::shared_ptr<const ConeSpec> inner;   // EuclideanFactor

  static ConeSpec product_of_spheres(int p, int q);
  static ConeSpec euclidean_factor(int m, ConeSpec inner);
  static ConeSpec round_link(int d);

  int dim() const;  // cone dimension n
  std::string label() const;
};

// Derived closed-form geometry of a catalog cone.
//
// ProductOfSpheres and RoundLink have homogeneous links; EuclideanFactor
// models reduce to the join angle t with
//   |A_link|^2(t) = core_a2 / cos^2 t,
//   weight(t)     = sin^{m-1} t * cos^{core_link_dim} t,
// singular at cos t = 0.  Nested Euclidean factors are flattened into a
// single factor over a ProductOfSpheres core.
struct ConeModel {
  ConeSpec spec;
  int n = 0;
  int link_dim = 0;
  bool minimizing = false;
  bool homogeneous_link = true;
  bool singular_link = false;   // link singular set nonempty
  double a2_const = 0.0;        // |A_link|^2 for homogeneous links

  // EuclideanFactor reduction data
  int ef_m = 0;
  int core_link_dim = 0;
  double core_a2 = 0.0;

  double link_volume = 0.0;

  double a2_link(double t) const;
  double weight(double t) const;
  // join-angle domain of the reduced link coordinate; (0,0) if homogeneous
  double angle_lo() const;
  double angle_hi() const;
  bool angle_is_singular(double t) const;
};

ConeModel build_cone(const ConeSpec& spec);

// |A|(r, angle) = sqrt(a2_link(angle)) / r on the regular part.
double second_fundamental_norm(const ConeModel& model, double r, double angle = 0.0);

// scal(r, angle) = -a2_link(angle) / r^2 for minimal hypersurfaces of flat space.
double scalar_curvature(const ConeModel& model, double r, double angle = 0.0);

// unit-sphere volume, vol(S^0) = 2
double sphere_volume(int d);

// catalog labels and registry flags for the CLI `catalog` subcommand
struct CatalogEntry {
  std::string family;
  std::string form;
  std::string minimizing_rule;
};
std::vector<CatalogEntry> catalog_entries();

}  // namespace conespectra
