#ifndef QWZ_NEGF_HPP
#define QWZ_NEGF_HPP

#include <Eigen/Dense>

#include "qwz/baths.hpp"
#include "qwz/quadrature.hpp"

namespace qwz {

/// H_eff = H - (i/2)(Γ_h + Γ_c) with its eigendecomposition computed once
/// and cached. The resolvent G(ω) = V diag(1/(ω-λ)) V⁻¹ then costs one
/// diagonal scaling and two matrix multiplies per frequency. When the
/// eigenvector basis is too ill-conditioned (near an exceptional point),
/// use_direct_solve is set and consumers fall back to per-ω linear solves.
struct EffectiveHamiltonian {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right_vectors;   ///< V, columns are right eigenvectors
  Eigen::MatrixXcd inverse_vectors; ///< V⁻¹
  double condition_estimate = 1.0;  ///< ‖V‖_F ‖V⁻¹‖_F
  double passivity_defect = 0.0;    ///< max(0, max_j Im λ_j)
  double gamma_max = 0.0;           ///< largest damping rate on the diagonal
  bool use_direct_solve = false;

  int dim() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

EffectiveHamiltonian effective_hamiltonian(const Eigen::MatrixXcd& hamiltonian,
                                           const SelfEnergyPair& se);

/// Retarded Green function G(ω) = [ω - H_eff]⁻¹ at real ω.
Eigen::MatrixXcd green_function(const EffectiveHamiltonian& eff, double omega);

/// Diagnostics of one adaptive frequency integration.
struct QuadratureReport {
  double error_estimate = 0.0; ///< summed Kronrod-Gauss panel deviations
  int panels = 0;
  long evaluations = 0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double tail_contribution = 0.0;    ///< max-norm mass of the half-line panels
  double hermitization_defect = 0.0; ///< max |C - C†| removed at the end
};

struct NessSolution {
  Eigen::MatrixXcd correlation;
  QuadratureReport report;
};

/// Exact NESS correlation matrix
///   C = ∫ dω/2π G(ω) [Γ_h n̄_h(ω) + Γ_c n̄_c(ω)] G†(ω),
/// nonperturbative in γ. Fermions are integrated over the full real line
/// (the filled-sea tails are covered exactly by compactified half-line
/// panels); the bosonic window is clamped above half the lowest resonance
/// frequency, where the wide-band integrand ceases to be physical, and
/// requires Re λ_j > 0 for every mode.
NessSolution steady_correlation(const EffectiveHamiltonian& eff, const SelfEnergyPair& se,
                                const BathSpec& bath, const QuadratureSpec& quad = {});

/// ∫ dω/2π i(G - G†) over the full line, equal to the identity matrix by
/// the canonical (anti-)commutation relations. Computed with the same
/// machinery as steady_correlation at unit filling; a direct check of the
/// quadrature including its tail handling.
NessSolution spectral_sum_rule(const EffectiveHamiltonian& eff, const SelfEnergyPair& se,
                               const QuadratureSpec& quad = {});

/// Transmission function T(ω) = Tr[Γ_c G(ω) Γ_h G†(ω)] with the mode-basis
/// contraction precomputed once; cheap to evaluate at many frequencies.
class TransmissionEvaluator {
public:
  TransmissionEvaluator(const EffectiveHamiltonian& eff, const SelfEnergyPair& se);
  double operator()(double omega) const;

private:
  const EffectiveHamiltonian* eff_;
  const SelfEnergyPair* se_;
  Eigen::MatrixXcd contraction_; ///< K_h ∘ P_c^T
};

/// One-shot T(ω).
double transmission(const EffectiveHamiltonian& eff, const SelfEnergyPair& se, double omega);

} // namespace qwz

#endif
