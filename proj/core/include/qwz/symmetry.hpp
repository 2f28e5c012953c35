#ifndef QWZ_SYMMETRY_HPP
#define QWZ_SYMMETRY_HPP

#include <Eigen/Dense>

#include "qwz/lattice.hpp"

namespace qwz {

enum class SymmetryKind {
  RotationPi,   ///< R_π: (x, y) -> (lx+1-x, ly+1-y)
  ReflectionY,  ///< Σ_y: (x, y) -> (lx+1-x, y)
  ReflectionX,  ///< Σ_x: (x, y) -> (x, ly+1-y); does not swap the baths
  FlavorRotation, ///< Π: a -> σ_z a per site
  FlavorSwap,     ///< S: a -> σ_x a per site
  GPH,            ///< generalized particle-hole: flavor swap ∘ conjugation
  Composite,
};

/// A discrete transformation as a matrix action on flat indices. The checked
/// relation is W H^(*) W† = sign · (H - shift·1), with conjugation applied
/// iff antiunitary (Θ is complex conjugation in the fixed site/flavor basis).
struct SymmetryAction {
  SymmetryKind kind = SymmetryKind::Composite;
  Eigen::MatrixXcd matrix;
  bool antiunitary = false;
  int sign = +1;
  double shift = 0.0;
};

SymmetryAction rotation_pi(const LatticeSpec& spec);
SymmetryAction reflection_y(const LatticeSpec& spec);
SymmetryAction reflection_x(const LatticeSpec& spec);
SymmetryAction flavor_rotation(const LatticeSpec& spec);
SymmetryAction flavor_swap(const LatticeSpec& spec);
/// GPH action for fermions at μ = ω₀: antiunitary flavor swap with sign -1
/// on the Hamiltonian shifted by -ω₀.
SymmetryAction gph(const LatticeSpec& spec);

/// Composition "apply b first, then a". All actions here have real matrices,
/// so the antiunitary flags simply combine by parity.
SymmetryAction compose(const SymmetryAction& a, const SymmetryAction& b);

/// The two NESS-relevant symmetries of the clean lattice.
SymmetryAction pi_r_pi(const LatticeSpec& spec);          ///< Π R_π (unitary)
SymmetryAction pi_theta_sigma_y(const LatticeSpec& spec); ///< Π Θ Σ_y (antiunitary)

/// Residual ‖W (H-shift)^(*) W† - sign (H-shift)‖_max.
double check_hamiltonian_symmetry(const Eigen::MatrixXcd& hamiltonian,
                                  const SymmetryAction& action);

/// Residual of the fermionic GPH state relation, ‖C - (1 - S C* S)‖_max.
double check_gph_state(const Eigen::MatrixXcd& correlation, const LatticeSpec& spec);

struct ImpurityClassification {
  bool sigma_y_symmetric = false;
  bool r_pi_symmetric = false;
};

/// True flags iff the impurity site set is invariant under x -> lx+1-x
/// resp. (x, y) -> (lx+1-x, ly+1-y).
ImpurityClassification classify_impurities(const ImpuritySet& impurities,
                                           const LatticeSpec& spec);

} // namespace qwz

#endif
