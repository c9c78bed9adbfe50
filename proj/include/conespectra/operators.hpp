#pragma once

#include <Eigen/Dense>
#include <functional>

#include "conespectra/geometry.hpp"
#include "conespectra/mesh.hpp"
#include "conespectra/skin.hpp"

namespace conespectra {

enum class OperatorTag { Laplacian, Jacobi, Conformal, SConformal, ABLaplacian, DimShiftedConformal };

// Natural Schrodinger operators on catalog cones. Ambient curvature slots
// (S, B) are kept in the interface but pinned to the flat-ambient values:
// S homogeneous of degree -2, B = 0.
struct OperatorKind {
  OperatorTag tag = OperatorTag::Laplacian;
  double s_constant = 0.0;  // SConformal: S = s_constant / r^2
  int s_degree = -2;        // homogeneity degree of S
  double b_norm2 = 0.0;     // ABLaplacian: |B|^2 contribution, must be 0
  int n_shift = 0;          // DimShiftedConformal

  static OperatorKind laplacian() { return {OperatorTag::Laplacian, 0, -2, 0, 0}; }
  static OperatorKind jacobi() { return {OperatorTag::Jacobi, 0, -2, 0, 0}; }
  static OperatorKind conformal() { return {OperatorTag::Conformal, 0, -2, 0, 0}; }
  static OperatorKind s_conformal(double c, int degree = -2) {
    return {OperatorTag::SConformal, c, degree, 0, 0};
  }
  static OperatorKind ab_laplacian(double b2 = 0.0) { return {OperatorTag::ABLaplacian, 0, -2, b2, 0}; }
  static OperatorKind dim_shifted_conformal(int n_shift) {
    return {OperatorTag::DimShiftedConformal, 0, -2, 0, n_shift};
  }

  const char* name() const;
};

// V^x on the link, as a function of the reduced angle; constant for
// homogeneous links.
struct LinkPotential {
  bool constant = true;
  double value = 0.0;
  std::function<double(double)> fn;  // used when !constant

  double operator()(double t) const { return constant ? value : fn(t); }
};

LinkPotential potential_on_link(const OperatorKind& kind, const ConeModel& model);

// L_lambda = L - lambda * skin^2 * Id
struct ShiftedOperator {
  OperatorKind kind;
  double lambda = 0.0;
  double w = 1.0;  // skin width used to form skin^2
};

// The link operator L^x: -Delta_link + (V^x - lambda (s^x)^2).
struct CrossSectionOperator {
  ConeModel model;
  OperatorKind kind;
  double lambda = 0.0;
  double w = 1.0;
  bool homogeneous = true;     // potential constant
  LinkPotential potential;     // V^x - lambda (s^x)^2
  int exponent_dim() const { return model.n; }  // radial dimension is the cone dimension
};

CrossSectionOperator cross_section(const ShiftedOperator& op, const ConeModel& model);

struct FormValue {
  double form = 0.0;      // int (|grad f|^2 + V f^2) dV over the truncated cone
  double skin_sq = 0.0;   // int skin^2 f^2 dV
};

// Discretized quadratic form for a radial test function on the log-radial
// window; f must vanish at both window ends. Homogeneous links only.
FormValue quadratic_form(const ShiftedOperator& op, const ConeModel& model, const RadialGrid& grid,
                         const Eigen::VectorXd& f);

}  // namespace conespectra
