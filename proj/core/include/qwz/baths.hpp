#ifndef QWZ_BATHS_HPP
#define QWZ_BATHS_HPP

#include <Eigen/Dense>

#include "qwz/lattice.hpp"

namespace qwz {

enum class Statistics { Boson, Fermion };

/// Two thermal reservoirs in the wide-band limit: a hot bath attached to
/// every site of the x = 1 column and a cold bath attached to x = lx, both
/// with the same frequency-independent coupling rate gamma.
struct BathSpec {
  double t_hot = 1.0;   ///< T_h, units of t
  double t_cold = 0.01; ///< T_c
  double mu = 0.0;      ///< chemical potential (must be 0 for bosons)
  double gamma = 0.005; ///< coupling rate
  Statistics statistics = Statistics::Boson;

  void validate() const;
};

/// Equilibrium occupation (e^{(omega-mu)/T} +- 1)^{-1}; + for fermions,
/// - for bosons. Bosons require omega > mu. Values below 1e-300 are flushed
/// to exactly 0.
double occupation(double omega, double temperature, double mu, Statistics statistics);

/// Diagonal wide-band self-energy rate matrices. gamma_hot carries the rate
/// gamma on every flat index of sites with x = 1 (both flavors), gamma_cold
/// on x = lx; the retarded self-energy is -i*(gamma_hot+gamma_cold)/2 with
/// no Lamb-shift part.
struct SelfEnergyPair {
  Eigen::VectorXd gamma_hot;
  Eigen::VectorXd gamma_cold;

  Eigen::VectorXd total() const { return gamma_hot + gamma_cold; }
  int dim() const noexcept { return static_cast<int>(gamma_hot.size()); }
};

/// Requires lx >= 2 so the two supports are disjoint.
SelfEnergyPair build_self_energies(const LatticeSpec& spec, const BathSpec& bath);

} // namespace qwz

#endif
