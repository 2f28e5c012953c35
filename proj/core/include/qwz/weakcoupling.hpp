#ifndef QWZ_WEAKCOUPLING_HPP
#define QWZ_WEAKCOUPLING_HPP

#include <Eigen/Dense>

#include "qwz/baths.hpp"
#include "qwz/lattice.hpp"

namespace qwz {

/// Dimensionless boundary weights of each eigenmode on the hot and cold
/// columns: s_α = Σ_{y,σ} |U_{(1,y,σ),α}|², r_α the same on x = lx. They
/// control the weak-coupling NESS occupations and the secular Lindblad rates.
struct ModeCouplings {
  Eigen::VectorXd hot;  ///< s_α
  Eigen::VectorXd cold; ///< r_α
  bool degenerate = false; ///< some |ω_α - ω_β| < 1e-8 (secular form suspect)
};

ModeCouplings mode_couplings(const Spectrum& spectrum, const LatticeSpec& spec);

/// Closed-form weak-coupling NESS, diagonal in the energy eigenbasis:
///   n_α = [s_α n̄_h(ω_α) + r_α n̄_c(ω_α)] / (s_α + r_α),  C = U diag(n) U†.
/// Modes with s_α + r_α < 1e-14 fall back to the plain reservoir average and
/// raise decoupled_mode.
struct WeakCouplingSolution {
  Eigen::MatrixXcd correlation;
  Eigen::VectorXd occupations; ///< n_α in the order of spectrum.omega
  bool decoupled_mode = false;
};

WeakCouplingSolution weak_coupling_correlation(const Spectrum& spectrum,
                                               const ModeCouplings& couplings,
                                               const BathSpec& bath);

/// max |dC/dt| of the given correlation matrix under the secular Lindblad
/// generator, in the mode basis:
///   d n_α/dt   = γ s_α [n̄_h(ω_α) - n_α] + γ r_α [n̄_c(ω_α) - n_α],
///   d C_αβ/dt  = [-i(ω_α - ω_β) - (γ/2)(s_α + r_α + s_β + r_β)] C_αβ  (α≠β).
/// The weak-coupling solution is a fixed point: residual < 1e-12 γ.
double lindblad_residual(const Spectrum& spectrum, const ModeCouplings& couplings,
                         const BathSpec& bath, const Eigen::MatrixXcd& correlation);

/// Verifies numerically (on deterministic pseudo-random occupation vectors)
/// that the non-Hermitian-Hamiltonian part plus the quantum-jump terms of
/// the unraveled Lindblad equation reproduce the same mode-wise rate
/// equation as the dissipator form, to 1e-12.
bool jump_decomposition_check(const Spectrum& spectrum, const ModeCouplings& couplings,
                              const BathSpec& bath);

} // namespace qwz

#endif
