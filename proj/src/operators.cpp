#include "conespectra/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace conespectra {

const char* OperatorKind::name() const {
  switch (tag) {
    case OperatorTag::Laplacian: return "laplacian";
    case OperatorTag::Jacobi: return "jacobi";
    case OperatorTag::Conformal: return "conformal";
    case OperatorTag::SConformal: return "s_conformal";
    case OperatorTag::ABLaplacian: return "ab_laplacian";
    case OperatorTag::DimShiftedConformal: return "dim_shifted_conformal";
  }
  return "?";
}

LinkPotential potential_on_link(const OperatorKind& kind, const ConeModel& model) {
  // flat ambient: scal = -|A|^2, Ric = 0, tr A = 0
  double coeff = 0.0;
  double s_shift = 0.0;
  switch (kind.tag) {
    case OperatorTag::Laplacian:
      coeff = 0.0;
      break;
    case OperatorTag::Jacobi:
      coeff = -1.0;
      break;
    case OperatorTag::Conformal:
      coeff = -double(model.n - 2) / (4.0 * (model.n - 1));
      break;
    case OperatorTag::SConformal: {
      if (kind.s_degree != -2)
        throw std::invalid_argument(
            "potential_on_link: S must be homogeneous of degree -2 on a cone");
      coeff = -double(model.n - 2) / (4.0 * (model.n - 1));
      s_shift = -double(model.n - 2) / (4.0 * (model.n - 1)) * kind.s_constant;
      break;
    }
    case OperatorTag::ABLaplacian: {
      if (kind.b_norm2 != 0.0)
        throw std::invalid_argument("potential_on_link: B must vanish on Euclidean hypersurfaces");
      coeff = 1.0;
      break;
    }
    case OperatorTag::DimShiftedConformal: {
      if (kind.n_shift < model.n)
        throw std::invalid_argument("potential_on_link: n_shift must be >= cone dimension");
      coeff = -double(kind.n_shift - 2) / (4.0 * (kind.n_shift - 1));
      break;
    }
  }

  LinkPotential out;
  if (model.homogeneous_link) {
    out.constant = true;
    out.value = coeff * model.a2_const + s_shift;
  } else {
    out.constant = false;
    const double core_a2 = model.core_a2;
    out.fn = [coeff, s_shift, core_a2](double t) {
      const double c = std::cos(t);
      return coeff * core_a2 / (c * c) + s_shift;
    };
  }
  return out;
}

CrossSectionOperator cross_section(const ShiftedOperator& op, const ConeModel& model) {
  if (!(op.w > 0.0)) throw std::invalid_argument("cross_section: skin width must be > 0");
  if (op.lambda != 0.0 && model.homogeneous_link && model.a2_const == 0.0)
    throw std::invalid_argument("cross_section: zero skin field cannot carry a shift");

  CrossSectionOperator x;
  x.model = model;
  x.kind = op.kind;
  x.lambda = op.lambda;
  x.w = op.w;

  LinkPotential base = potential_on_link(op.kind, model);
  if (model.homogeneous_link) {
    const double sx = skin_cross_section(model, op.w, 0.0);
    x.homogeneous = true;
    x.potential.constant = true;
    x.potential.value = base.value - op.lambda * sx * sx;
  } else {
    x.homogeneous = false;
    x.potential.constant = false;
    const double lambda = op.lambda;
    const double w = op.w;
    const ConeModel m = model;
    x.potential.fn = [base, lambda, w, m](double t) {
      double v = base(t);
      if (lambda != 0.0) {
        const double sx = skin_cross_section(m, w, t);
        v -= lambda * sx * sx;
      }
      return v;
    };
  }
  return x;
}

FormValue quadratic_form(const ShiftedOperator& op, const ConeModel& model, const RadialGrid& grid,
                         const Eigen::VectorXd& f) {
  if (!model.homogeneous_link)
    throw std::invalid_argument("quadratic_form: homogeneous-link models only");
  if (f.size() != grid.n_nodes)
    throw std::invalid_argument("quadratic_form: test function size mismatch");
  const double scale = std::max(std::abs(f.maxCoeff()), std::abs(f.minCoeff()));
  if (scale > 0.0 && (std::abs(f[0]) > 1e-14 * scale || std::abs(f[f.size() - 1]) > 1e-14 * scale))
    throw std::invalid_argument("quadratic_form: test function must vanish at the window ends");

  const LinkPotential vx = potential_on_link(op.kind, model);
  const double sx = skin_cross_section(model, op.w, 0.0);
  const double veff = vx.value - op.lambda * sx * sx;
  const double exponent = model.n - 2;

  // log-radial reduction with volume weight e^{(n-2)s}; P1 elements
  const Eigen::VectorXd s = grid.s_nodes();
  double dirichlet = 0.0, potential = 0.0, skin_sq = 0.0;
  for (int e = 0; e + 1 < s.size(); ++e) {
    const double h = s[e + 1] - s[e];
    const double slope = (f[e + 1] - f[e]) / h;
    const double w_int = (std::exp(exponent * s[e + 1]) - std::exp(exponent * s[e])) /
                         (exponent != 0.0 ? exponent : 1.0);
    const double wq = exponent != 0.0 ? w_int : h;
    dirichlet += slope * slope * wq;
    // midpoint value of f^2 against the exact element weight
    const double fmid = 0.5 * (f[e] + f[e + 1]);
    potential += veff * fmid * fmid * wq;
    skin_sq += sx * sx * fmid * fmid * wq;
  }

  FormValue out;
  out.form = model.link_volume * (dirichlet + potential);
  out.skin_sq = model.link_volume * skin_sq;
  return out;
}

}  // namespace conespectra
