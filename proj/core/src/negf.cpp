#include "qwz/negf.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <thread>
#include <vector>

namespace qwz {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using quad::PanelDomain;
using quad::PanelNodes;

double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Adaptive partition refinement driven by a scalar envelope of the matrix
// integrand. Returns the final panel list; the envelope integral itself is
// discarded.
std::vector<PanelDomain> refine_partition(const std::function<double(double)>& envelope,
                                          std::vector<PanelDomain> start, double rel_tol,
                                          double abs_tol, int max_panels) {
  struct Entry {
    double error;
    long id;
    PanelDomain domain;
    double value;
    bool operator<(const Entry& other) const {
      return error < other.error || (error == other.error && id < other.id);
    }
  };
  long next_id = 0;
  auto evaluate = [&](const PanelDomain& d) {
    const PanelNodes nodes = quad::panel_nodes(d);
    double k15 = 0.0, g7 = 0.0;
    for (int i = 0; i < 15; ++i) {
      const double fi = envelope(nodes.omega[i]);
      k15 += nodes.w_kronrod[i] * fi;
      g7 += nodes.w_gauss[i] * fi;
    }
    return Entry{std::abs(k15 - g7), next_id++, d, k15};
  };

  std::priority_queue<Entry> heap;
  double total = 0.0, total_error = 0.0;
  for (const auto& d : start) {
    Entry e = evaluate(d);
    total += e.value;
    total_error += e.error;
    heap.push(e);
  }
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total)) &&
         static_cast<int>(heap.size()) < max_panels) {
    Entry worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_error -= worst.error;
    for (const auto& child : worst.domain.bisect()) {
      Entry e = evaluate(child);
      total += e.value;
      total_error += e.error;
      heap.push(e);
    }
  }

  std::vector<PanelDomain> out;
  out.reserve(heap.size());
  while (!heap.empty()) {
    out.push_back(heap.top().domain);
    heap.pop();
  }
  return out;
}

// Frequency window and panel seeds shared by the NESS and sum-rule solves.
struct WindowPlan {
  double lo = 0.0;
  double hi = 0.0;
  bool left_tail = false;
  bool right_tail = false;
  std::vector<double> breakpoints;
};

WindowPlan plan_window(const EffectiveHamiltonian& eff, const QuadratureSpec& quad,
                       double t_max, bool bosonic, double mu) {
  const VectorXd re = eff.eigenvalues.real();
  const double margin = quad.margin_or_default(eff.gamma_max, t_max);

  WindowPlan plan;
  plan.lo = re.minCoeff() - margin;
  plan.hi = re.maxCoeff() + margin;
  plan.left_tail = true;
  plan.right_tail = true;
  if (bosonic) {
    // The wide-band Bose integrand has an unphysical pole at ω = 0; all
    // spectral weight sits near the resonances, so the window is clamped
    // above half the lowest resonance frequency and carries no lower tail.
    plan.lo = std::max(plan.lo, 0.5 * re.minCoeff());
    plan.left_tail = false;
  }
  plan.breakpoints.assign(re.data(), re.data() + re.size());
  if (!bosonic) {
    plan.breakpoints.push_back(mu);
    plan.breakpoints.push_back(mu - 5.0 * t_max);
    plan.breakpoints.push_back(mu + 5.0 * t_max);
  }
  return plan;
}

// Globally adaptive Gauss-Kronrod accumulation of
//   Ĉ = ∫ dω/2π  K_h n̄_h(ω) ∘ (d d†) + K_c n̄_c(ω) ∘ (d d†),
// with d_j(ω) = 1/(ω - λ_j), in the eigenbasis of H_eff. The partition is
// first refined against a cheap scalar envelope, then panels accumulate
// Hermitian rank-1 updates; panels are re-refined if the matrix-valued
// Kronrod-Gauss deviation still exceeds the tolerance.
struct ModeBasisResult {
  MatrixXcd chat;
  QuadratureReport report;
};

ModeBasisResult integrate_mode_basis(const VectorXcd& lambda, const MatrixXcd& k_hot,
                                     const MatrixXcd& k_cold,
                                     const std::function<double(double)>& occ_hot,
                                     const std::function<double(double)>& occ_cold,
                                     const WindowPlan& plan, const QuadratureSpec& quad) {
  const int n = static_cast<int>(lambda.size());

  // Row-wise importance of each mode in the final Hadamard products.
  VectorXd kappa_hot(n), kappa_cold(n);
  for (int j = 0; j < n; ++j) {
    kappa_hot[j] = k_hot.row(j).cwiseAbs().maxCoeff();
    kappa_cold[j] = k_cold.row(j).cwiseAbs().maxCoeff();
  }

  auto envelope = [&](double omega) {
    double eh = 0.0, ec = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::complex<double> dj = 1.0 / (omega - lambda[j]);
      const double a2 = std::norm(dj);
      eh += kappa_hot[j] * a2;
      ec += kappa_cold[j] * a2;
    }
    return occ_hot(omega) * eh + occ_cold(omega) * ec;
  };

  auto panels = refine_partition(
      envelope, quad::initial_partition(plan.lo, plan.hi, plan.breakpoints, plan.left_tail, plan.right_tail),
      0.1 * quad.rel_tolerance, 0.1 * quad.abs_tolerance, quad.max_panels);

  QuadratureReport report;
  report.window_lo = plan.lo;
  report.window_hi = plan.hi;

  struct PanelValue {
    MatrixXcd chat_k15;
    double error;
    double norm;
  };
  MatrixXcd ih_k(n, n), ic_k(n, n), ih_g(n, n), ic_g(n, n);
  VectorXcd d(n);

  auto evaluate_panel = [&](const PanelDomain& dom, bool with_error) {
    const PanelNodes nodes = quad::panel_nodes(dom);
    ih_k.setZero();
    ic_k.setZero();
    if (with_error) {
      ih_g.setZero();
      ic_g.setZero();
    }
    for (int i = 0; i < 15; ++i) {
      const double omega = nodes.omega[i];
      d = (omega - lambda.array()).inverse();
      const double nh = occ_hot(omega);
      const double nc = occ_cold(omega);
      const double wk = nodes.w_kronrod[i];
      if (nh != 0.0) ih_k.selfadjointView<Eigen::Lower>().rankUpdate(d, wk * nh);
      if (nc != 0.0) ic_k.selfadjointView<Eigen::Lower>().rankUpdate(d, wk * nc);
      if (with_error && nodes.w_gauss[i] != 0.0) {
        const double wg = nodes.w_gauss[i];
        if (nh != 0.0) ih_g.selfadjointView<Eigen::Lower>().rankUpdate(d, wg * nh);
        if (nc != 0.0) ic_g.selfadjointView<Eigen::Lower>().rankUpdate(d, wg * nc);
      }
    }
    report.evaluations += 15;
    PanelValue value;
    value.chat_k15 = k_hot.cwiseProduct(MatrixXcd(ih_k.selfadjointView<Eigen::Lower>())) +
                     k_cold.cwiseProduct(MatrixXcd(ic_k.selfadjointView<Eigen::Lower>()));
    value.norm = max_abs(value.chat_k15);
    if (with_error) {
      const MatrixXcd chat_g7 =
          k_hot.cwiseProduct(MatrixXcd(ih_g.selfadjointView<Eigen::Lower>())) +
          k_cold.cwiseProduct(MatrixXcd(ic_g.selfadjointView<Eigen::Lower>()));
      value.error = max_abs(value.chat_k15 - chat_g7);
    } else {
      value.error = 0.0;
    }
    if (!std::isfinite(value.norm))
      throw IntegrationError("steady_correlation: non-finite integrand", value.norm);
    return value;
  };

  struct Entry {
    double error;
    long id;
    PanelDomain domain;
    bool operator<(const Entry& other) const {
      return error < other.error || (error == other.error && id < other.id);
    }
  };
  long next_id = 0;
  std::priority_queue<Entry> heap;
  MatrixXcd total = MatrixXcd::Zero(n, n);
  double total_error = 0.0;

  for (const auto& dom : panels) {
    PanelValue v = evaluate_panel(dom, true);
    total += v.chat_k15;
    total_error += v.error;
    if (dom.map != 0) report.tail_contribution += v.norm;
    heap.push(Entry{v.error, next_id++, dom});
  }

  while (total_error > std::max(quad.abs_tolerance, quad.rel_tolerance * max_abs(total))) {
    if (static_cast<int>(heap.size()) >= quad.max_panels)
      throw IntegrationError("steady_correlation: panel budget exhausted", total_error);
    Entry worst = heap.top();
    heap.pop();
    if (worst.error <= 0.0) break; // nothing left to refine
    total -= evaluate_panel(worst.domain, false).chat_k15;
    total_error -= worst.error;
    for (const auto& child : worst.domain.bisect()) {
      PanelValue v = evaluate_panel(child, true);
      total += v.chat_k15;
      total_error += v.error;
      heap.push(Entry{v.error, next_id++, child});
    }
  }

  report.panels = static_cast<int>(heap.size());
  report.error_estimate = total_error;

  ModeBasisResult result;
  result.chat = total / (2.0 * M_PI);
  report.tail_contribution /= 2.0 * M_PI;
  result.report = report;
  return result;
}

// Fallback for ill-conditioned eigenbases: accumulate directly in the site
// basis with one LU solve per frequency node.
ModeBasisResult integrate_direct(const EffectiveHamiltonian& eff, const SelfEnergyPair& se,
                                 const std::function<double(double)>& occ_hot,
                                 const std::function<double(double)>& occ_cold,
                                 const WindowPlan& plan, const QuadratureSpec& quad) {
  const int n = eff.dim();
  const VectorXcd& lambda = eff.eigenvalues;

  auto envelope = [&](double omega) {
    double a = 0.0;
    for (int j = 0; j < n; ++j) a += std::norm(1.0 / (omega - lambda[j]));
    return (occ_hot(omega) + occ_cold(omega)) * a;
  };
  auto panels = refine_partition(
      envelope, quad::initial_partition(plan.lo, plan.hi, plan.breakpoints, plan.left_tail, plan.right_tail),
      0.1 * quad.rel_tolerance, 0.1 * quad.abs_tolerance, quad.max_panels);

  QuadratureReport report;
  report.window_lo = plan.lo;
  report.window_hi = plan.hi;

  const MatrixXcd identity = MatrixXcd::Identity(n, n);
  auto node_value = [&](double omega) -> MatrixXcd {
    const MatrixXcd g = (omega * identity - eff.matrix).partialPivLu().solve(identity);
    const VectorXd filling =
        occ_hot(omega) * se.gamma_hot + occ_cold(omega) * se.gamma_cold;
    return g * filling.asDiagonal() * g.adjoint();
  };

  struct Entry {
    double error;
    long id;
    PanelDomain domain;
    bool operator<(const Entry& other) const {
      return error < other.error || (error == other.error && id < other.id);
    }
  };
  struct PanelValue {
    MatrixXcd k15;
    double error;
    double norm;
  };
  auto evaluate_panel = [&](const PanelDomain& dom) {
    const PanelNodes nodes = quad::panel_nodes(dom);
    MatrixXcd k15 = MatrixXcd::Zero(n, n), g7 = MatrixXcd::Zero(n, n);
    for (int i = 0; i < 15; ++i) {
      const MatrixXcd f = node_value(nodes.omega[i]);
      k15 += nodes.w_kronrod[i] * f;
      if (nodes.w_gauss[i] != 0.0) g7 += nodes.w_gauss[i] * f;
    }
    report.evaluations += 15;
    return PanelValue{k15, max_abs(k15 - g7), max_abs(k15)};
  };

  long next_id = 0;
  std::priority_queue<Entry> heap;
  MatrixXcd total = MatrixXcd::Zero(n, n);
  double total_error = 0.0;
  for (const auto& dom : panels) {
    PanelValue v = evaluate_panel(dom);
    total += v.k15;
    total_error += v.error;
    if (dom.map != 0) report.tail_contribution += v.norm;
    heap.push(Entry{v.error, next_id++, dom});
  }
  while (total_error > std::max(quad.abs_tolerance, quad.rel_tolerance * max_abs(total))) {
    if (static_cast<int>(heap.size()) >= quad.max_panels)
      throw IntegrationError("steady_correlation: panel budget exhausted", total_error);
    Entry worst = heap.top();
    heap.pop();
    if (worst.error <= 0.0) break;
    total -= evaluate_panel(worst.domain).k15;
    total_error -= worst.error;
    for (const auto& child : worst.domain.bisect()) {
      PanelValue v = evaluate_panel(child);
      total += v.k15;
      total_error += v.error;
      heap.push(Entry{v.error, next_id++, child});
    }
  }
  report.panels = static_cast<int>(heap.size());
  report.error_estimate = total_error;

  ModeBasisResult result;
  result.chat = total / (2.0 * M_PI);
  report.tail_contribution /= 2.0 * M_PI;
  result.report = report;
  return result;
}

NessSolution solve_correlation(const EffectiveHamiltonian& eff, const SelfEnergyPair& se,
                               const std::function<double(double)>& occ_hot,
                               const std::function<double(double)>& occ_cold,
                               const WindowPlan& plan, const QuadratureSpec& quad) {
  quad.validate();

  NessSolution solution;
  if (eff.use_direct_solve) {
    ModeBasisResult r = integrate_direct(eff, se, occ_hot, occ_cold, plan, quad);
    solution.correlation = std::move(r.chat);
    solution.report = r.report;
  } else {
    const MatrixXcd k_hot =
        eff.inverse_vectors * se.gamma_hot.asDiagonal() * eff.inverse_vectors.adjoint();
    const MatrixXcd k_cold =
        eff.inverse_vectors * se.gamma_cold.asDiagonal() * eff.inverse_vectors.adjoint();
    ModeBasisResult r =
        integrate_mode_basis(eff.eigenvalues, k_hot, k_cold, occ_hot, occ_cold, plan, quad);
    solution.correlation = eff.right_vectors * r.chat * eff.right_vectors.adjoint();
    solution.report = r.report;
  }

  const MatrixXcd anti = solution.correlation - solution.correlation.adjoint();
  solution.report.hermitization_defect = 0.5 * max_abs(anti);
  solution.correlation = 0.5 * (solution.correlation + solution.correlation.adjoint());
  return solution;
}

} // namespace

EffectiveHamiltonian effective_hamiltonian(const Eigen::MatrixXcd& hamiltonian,
                                           const SelfEnergyPair& se) {
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() != se.dim())
    throw ConfigError("negf", "Hamiltonian and self-energy dimensions disagree");

  EffectiveHamiltonian eff;
  eff.matrix = hamiltonian;
  const VectorXd total = se.total();
  eff.matrix -= std::complex<double>(0.0, 0.5) * MatrixXcd(total.asDiagonal());
  eff.gamma_max = total.size() > 0 ? total.maxCoeff() : 0.0;

  Eigen::ComplexEigenSolver<MatrixXcd> solver(eff.matrix);
  if (solver.info() != Eigen::Success)
    throw NumericalError("effective_hamiltonian: eigendecomposition failed");

  eff.eigenvalues = solver.eigenvalues();
  eff.right_vectors = solver.eigenvectors();
  eff.inverse_vectors = eff.right_vectors.partialPivLu().solve(
      MatrixXcd::Identity(eff.dim(), eff.dim()));
  eff.condition_estimate = eff.right_vectors.norm() * eff.inverse_vectors.norm();

  const double scale = std::max(1.0, max_abs(eff.matrix));
  const double reconstruction =
      max_abs(eff.right_vectors * eff.eigenvalues.asDiagonal() * eff.inverse_vectors -
              eff.matrix);
  if (eff.condition_estimate > 1e8 || reconstruction > 1e-10 * scale)
    eff.use_direct_solve = true;
  if (!std::isfinite(eff.condition_estimate))
    throw NumericalError("effective_hamiltonian: defective eigenbasis (condition estimate " +
                         std::to_string(eff.condition_estimate) + ")");

  eff.passivity_defect = std::max(0.0, eff.eigenvalues.imag().maxCoeff());
  if (eff.passivity_defect > 1e-12 * eff.gamma_max + 1e-13 * scale)
    throw NumericalError("effective_hamiltonian: positive decay rate Im λ = " +
                         std::to_string(eff.passivity_defect));
  return eff;
}

Eigen::MatrixXcd green_function(const EffectiveHamiltonian& eff, double omega) {
  const double gap = (omega - eff.eigenvalues.array()).abs().minCoeff();
  if (gap < 1e-14 * std::max(1.0, std::abs(omega)))
    throw SingularityError("green_function: ω lies on a real pole of the resolvent");

  if (eff.use_direct_solve) {
    const MatrixXcd identity = MatrixXcd::Identity(eff.dim(), eff.dim());
    return (omega * identity - eff.matrix).partialPivLu().solve(identity);
  }
  const VectorXcd d = (omega - eff.eigenvalues.array()).inverse();
  return eff.right_vectors * d.asDiagonal() * eff.inverse_vectors;
}

NessSolution steady_correlation(const EffectiveHamiltonian& eff, const SelfEnergyPair& se,
                                const BathSpec& bath, const QuadratureSpec& quad) {
  bath.validate();
  const bool bosonic = bath.statistics == Statistics::Boson;
  if (bosonic && eff.eigenvalues.real().minCoeff() <= 0.0)
    throw NumericalError("steady_correlation: bosonic solve requires Re λ_j > 0 "
                         "(divergent Bose occupation)");

  const double t_max = std::max(bath.t_hot, bath.t_cold);
  const WindowPlan plan = plan_window(eff, quad, t_max, bosonic, bath.mu);
  auto occ_hot = [&bath](double w) {
    return occupation(w, bath.t_hot, bath.mu, bath.statistics);
  };
  auto occ_cold = [&bath](double w) {
    return occupation(w, bath.t_cold, bath.mu, bath.statistics);
  };
  return solve_correlation(eff, se, occ_hot, occ_cold, plan, quad);
}

NessSolution spectral_sum_rule(const EffectiveHamiltonian& eff, const SelfEnergyPair& se,
                               const QuadratureSpec& quad) {
  const WindowPlan plan = plan_window(eff, quad, 0.0, false, 0.0);
  auto unit = [](double) { return 1.0; };
  // With n̄_h = n̄_c = 1 the integrand is G Γ G† = i(G - G†).
  return solve_correlation(eff, se, unit, unit, plan, quad);
}

TransmissionEvaluator::TransmissionEvaluator(const EffectiveHamiltonian& eff,
                                             const SelfEnergyPair& se)
    : eff_(&eff), se_(&se) {
  if (!eff.use_direct_solve) {
    const MatrixXcd k_hot =
        eff.inverse_vectors * se.gamma_hot.asDiagonal() * eff.inverse_vectors.adjoint();
    const MatrixXcd p_cold =
        eff.right_vectors.adjoint() * se.gamma_cold.asDiagonal() * eff.right_vectors;
    contraction_ = k_hot.cwiseProduct(p_cold.transpose());
  }
}

double TransmissionEvaluator::operator()(double omega) const {
  if (eff_->use_direct_solve) {
    const MatrixXcd g = green_function(*eff_, omega);
    const MatrixXcd product =
        se_->gamma_cold.asDiagonal() * g * se_->gamma_hot.asDiagonal() * g.adjoint();
    return product.trace().real();
  }
  // T(ω) = Σ_{jk} d_j K_h[j,k] P_c[k,j] d̄_k
  const VectorXcd db = (omega - eff_->eigenvalues.array()).inverse().conjugate();
  return db.dot(contraction_ * db).real();
}

double transmission(const EffectiveHamiltonian& eff, const SelfEnergyPair& se, double omega) {
  return TransmissionEvaluator(eff, se)(omega);
}

} // namespace qwz
