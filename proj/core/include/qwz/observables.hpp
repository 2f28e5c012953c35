#ifndef QWZ_OBSERVABLES_HPP
#define QWZ_OBSERVABLES_HPP

#include <Eigen/Dense>

#include "qwz/lattice.hpp"
#include "qwz/negf.hpp"

namespace qwz {

/// Mean bond currents of the NESS. jx(x-1, y-1) is the current flowing from
/// site (x, y) to (x+1, y) for x in 1..lx-1; jy(x-1, y-1) flows from (x, y)
/// to (x, y+1). Positive x-current points from the hot to the cold bath.
struct CurrentField {
  Eigen::MatrixXd jx; ///< (lx-1) x ly
  Eigen::MatrixXd jy; ///< lx x (ly-1)
  double imag_residue = 0.0; ///< largest imaginary part discarded

  double max_abs() const;
};

CurrentField bond_currents(const Eigen::MatrixXcd& correlation, const LatticeSpec& spec);

/// Averaged edge/bulk diagnostics:
///   J_edge = 1/(2 lx) Σ_x (J^X_{x,ly} - J^X_{x,1})   over the lx-1 bonds,
///   J_bulk = 1/ly Σ_y J^X_{x_mid,y} with x_mid = floor(lx/2),
///   J_tot  = ly J_bulk.
struct CurrentDiagnostics {
  double edge = 0.0;
  double bulk = 0.0;
  double total = 0.0;
  int bulk_column = 0; ///< x_mid
};

CurrentDiagnostics edge_bulk_diagnostics(const CurrentField& field, const LatticeSpec& spec);

/// Landauer total current J_tot = ∫ dω/2π T(ω) [n̄_h(ω) - n̄_c(ω)], the
/// independent route to the column sums of J^X.
double landauer_total(const EffectiveHamiltonian& eff, const SelfEnergyPair& se,
                      const BathSpec& bath, const QuadratureSpec& quad = {});

/// Occupations of the single-particle eigenmodes, n_α = [U† C U]_αα.
struct ModeOccupation {
  Eigen::VectorXd omega;
  Eigen::VectorXd occupation;
  double imag_residue = 0.0;
};

ModeOccupation mode_occupations(const Eigen::MatrixXcd& correlation, const Spectrum& spectrum);

/// Largest interior-site continuity violation |Σ inflow - Σ outflow|;
/// sites on the bath columns x = 1, lx exchange particles with the
/// reservoirs and are exempt.
double continuity_residual(const CurrentField& field, const LatticeSpec& spec);

/// Σ_y J^X_{x,y} for each bond column x = 1..lx-1; constant across x and
/// equal to J_tot by particle conservation.
Eigen::VectorXd column_sums(const CurrentField& field);

} // namespace qwz

#endif
