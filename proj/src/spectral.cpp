#include "conespectra/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conespectra/numeric.hpp"

namespace conespectra {

namespace {

// locate shared lattice nodes of a coarser member inside a finer one
std::vector<int> match_nodes(const Eigen::VectorXd& coarse, const Eigen::VectorXd& fine) {
  std::vector<int> map(coarse.size(), -1);
  int j = 0;
  for (int i = 0; i < coarse.size(); ++i) {
    while (j < fine.size() && fine[j] < coarse[i] - 1e-12) ++j;
    if (j < fine.size() && std::abs(fine[j] - coarse[i]) <= 1e-12) map[i] = j;
  }
  return map;
}

int midpoint_index(const Eigen::VectorXd& nodes, double mid) {
  int best = 0;
  for (int i = 1; i < nodes.size(); ++i)
    if (std::abs(nodes[i] - mid) < std::abs(nodes[best] - mid)) best = i;
  return best;
}

// Log-radial problem in window-relative coordinates. The volume weight
// e^{(n-2)s} enters only through e^{(n-2) span u}; the prefactor e^{(n-2) s_lo}
// cancels in the pencil, so congruent patches assemble to identical matrices
// and Neumann values are scaling invariant to the last bit.
SturmLiouvilleProblem log_radial_problem(const ConeModel& model, double v_const, double r_const,
                                         double span, int n_nodes, Boundary ends) {
  SturmLiouvilleProblem p;
  p.nodes = Eigen::VectorXd::LinSpaced(n_nodes, 0.0, 1.0);
  const double rate = (model.n - 2) * span;
  const double span2 = span * span;
  // centered exponent keeps the weight representable out to (n-2)*S = 600
  p.weight = [rate](double u) { return std::exp(rate * (u - 0.5)); };
  p.potential = [v_const, span2](double) { return v_const * span2; };
  p.rweight = [r_const, span2](double) { return r_const * span2; };
  p.left = ends;
  p.right = ends;
  return p;
}

}  // namespace

SpectralResult principal_eigen_link(const CrossSectionOperator& xop, int n_nodes) {
  SpectralResult out;
  if (xop.homogeneous) {
    // -Delta of a constant vanishes, so the ground state is constant and the
    // eigenvalue is the potential value
    out.mu = xop.potential.value;
    out.mu_extrapolated = out.mu;
    out.mu_sequence = {out.mu};
    out.nodes = Eigen::VectorXd::Zero(1);
    const double vol = std::sqrt(std::max(xop.model.link_volume, 1e-300));
    out.psi = Eigen::VectorXd::Constant(1, 1.0 / vol);
    out.psi_midpoint_one = Eigen::VectorXd::Ones(1);
    out.closed_form = true;
    return out;
  }
  ExhaustionSchedule def = ExhaustionSchedule::geometric(1e-2, 0.5, 6);
  return dirichlet_exhaustion(xop, def, n_nodes);
}

SpectralResult dirichlet_exhaustion(const CrossSectionOperator& xop,
                                    const ExhaustionSchedule& schedule, int n_nodes) {
  if (xop.homogeneous)
    throw std::invalid_argument("dirichlet_exhaustion: link has empty singular set");
  const ConeModel& model = xop.model;
  auto potential = [&xop](double t) { return xop.potential(t); };

  std::vector<LinkProblem> members = exhaustion(model, potential, schedule, n_nodes);

  SpectralResult out;
  for (const LinkProblem& member : members) {
    AssembledForms forms = assemble(member.sl);
    EigenPair pair = lowest_eigenpair(forms.pencil);
    out.mu_sequence.push_back(pair.value);
    out.iterations = pair.iterations;
    out.residual = pair.residual;
  }

  // ratio of consecutive truncation offsets drives the extrapolation
  double ratio = 2.0;
  if (schedule.eps_list.size() >= 2)
    ratio = schedule.eps_list[schedule.eps_list.size() - 2] / schedule.eps_list.back();
  out.measured_order = measured_order(out.mu_sequence, ratio);
  out.mu_extrapolated = richardson_tail(out.mu_sequence, out.measured_order, ratio);
  out.mu = out.mu_extrapolated;

  // The truncated states carry an O(eps / dist-to-boundary) defect from the
  // second Frobenius mode at the singular end. Sampling the ground state is
  // cheap, so extract it from an auxiliary refined pair well below the
  // scheduled offsets and cancel the leading defect across the pair.
  {
    const double eps_last = schedule.eps_list.back();
    ExhaustionSchedule aux;
    aux.eps_list = {eps_last / 8.0, eps_last / 16.0};
    std::vector<LinkProblem> refined = exhaustion(model, potential, aux, n_nodes);

    std::vector<Eigen::VectorXd> aux_dofs, aux_states;
    for (const LinkProblem& member : refined) {
      AssembledForms forms = assemble(member.sl);
      EigenPair pair = lowest_eigenpair(forms.pencil);
      aux_dofs.push_back(forms.dofs);
      aux_states.push_back(pair.vector);
    }

    const Eigen::VectorXd& base = aux_dofs[0];
    const double mid = (model.ef_m == 1) ? 0.0 : 0.5 * (model.angle_lo() + model.angle_hi());
    const int mi = midpoint_index(base, mid);
    std::vector<Eigen::VectorXd> normed;
    for (int i = 0; i < 2; ++i) {
      std::vector<int> map = match_nodes(base, aux_dofs[i]);
      Eigen::VectorXd v(base.size());
      for (int j = 0; j < base.size(); ++j) {
        if (map[j] < 0) throw std::logic_error("dirichlet_exhaustion: lattice mismatch");
        v[j] = aux_states[i][map[j]];
      }
      if (v[mi] == 0.0) throw SolverError("dirichlet_exhaustion: vanishing midpoint value");
      normed.push_back(v / v[mi]);
    }
    // the boundary defect of the truncated state is first order in eps
    Eigen::VectorXd psi = 2.0 * normed[1] - normed[0];

    out.nodes = base;
    out.psi_midpoint_one = psi;
    // weighted L2 normalization against the coarser auxiliary member's mass
    AssembledForms shared = assemble(refined[0].sl);
    const double norm = std::sqrt(shared.pencil.form_m(psi));
    out.psi = norm > 0.0 ? (psi / norm).eval() : psi;
  }
  return out;
}

WeightedEigenEstimate weighted_principal_eigenvalue(const OperatorKind& kind,
                                                    const ConeModel& model, double w,
                                                    const std::vector<double>& windows,
                                                    int n_nodes) {
  if (!model.homogeneous_link)
    throw std::invalid_argument(
        "weighted_principal_eigenvalue: composite windows on non-homogeneous links are not "
        "supported");
  if (model.a2_const == 0.0)
    throw std::invalid_argument("weighted_principal_eigenvalue: zero skin field (trivial gauge)");
  if (windows.empty())
    throw std::invalid_argument("weighted_principal_eigenvalue: need at least one window");
  for (std::size_t i = 1; i < windows.size(); ++i)
    if (!(windows[i] > windows[i - 1]))
      throw std::invalid_argument("weighted_principal_eigenvalue: windows must increase");

  const LinkPotential vx = potential_on_link(kind, model);
  const double sx = skin_cross_section(model, w, 0.0);

  WeightedEigenEstimate out;
  for (double S : windows) {
    if (!(S > 0.0) || (model.n - 2) * S > 600.0)
      throw std::invalid_argument("weighted_principal_eigenvalue: window out of range");
    SturmLiouvilleProblem p =
        log_radial_problem(model, vx.value, sx * sx, 2.0 * S, n_nodes, Boundary::Dirichlet);
    AssembledForms forms = assemble(p);
    EigenPair pair = lowest_eigenpair(forms.pencil);
    out.windows.push_back(S);
    out.values.push_back(pair.value);
  }

  // lambda(S) = lambda_inf + c / S^2
  if (out.values.size() >= 2) {
    const double s1 = out.windows[out.windows.size() - 2];
    const double s2 = out.windows.back();
    const double l1 = out.values[out.values.size() - 2];
    const double l2 = out.values.back();
    const double c = (l1 - l2) / (1.0 / (s1 * s1) - 1.0 / (s2 * s2));
    out.extrapolated = l2 - c / (s2 * s2);
  } else {
    out.extrapolated = out.values.back();
  }
  return out;
}

double neumann_eigenvalue(const ShiftedOperator& op, const ConeModel& model, double r_lo,
                          double r_hi, int n_nodes) {
  if (op.kind.tag != OperatorTag::ABLaplacian)
    throw std::invalid_argument("neumann_eigenvalue: operator must be the A+B Laplacian");
  if (!model.homogeneous_link)
    throw std::invalid_argument("neumann_eigenvalue: homogeneous-link patches only");
  if (model.a2_const == 0.0)
    throw std::invalid_argument("neumann_eigenvalue: skin vanishes, quotient undefined");
  if (!(r_lo > 0.0) || !(r_hi > r_lo))
    throw std::invalid_argument("neumann_eigenvalue: empty patch");

  const double sx = skin_cross_section(model, op.w, 0.0);
  const double span = std::log(r_hi / r_lo);  // ratio form keeps congruent patches bit-identical
  SturmLiouvilleProblem p =
      log_radial_problem(model, model.a2_const, sx * sx, span, n_nodes, Boundary::Natural);
  AssembledForms forms = assemble(p);
  return lowest_eigenpair(forms.pencil).value;
}

}  // namespace conespectra
