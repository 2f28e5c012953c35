#include "qwz/baths.hpp"

#include <cmath>
#include <string>

namespace qwz {

void BathSpec::validate() const {
  if (!(t_hot > 0.0)) throw ConfigError("bath.T_h", "must be > 0");
  if (!(t_cold > 0.0)) throw ConfigError("bath.T_c", "must be > 0");
  if (!(gamma > 0.0)) throw ConfigError("bath.gamma", "must be > 0");
  if (!std::isfinite(mu)) throw ConfigError("bath.mu", "must be finite");
  if (statistics == Statistics::Boson && mu != 0.0)
    throw ConfigError("bath.mu", "bosonic chemical potential must be zero");
}

double occupation(double omega, double temperature, double mu, Statistics statistics) {
  const double x = (omega - mu) / temperature;
  if (statistics == Statistics::Fermion) {
    if (x >= 0.0) {
      const double e = std::exp(-x);
      return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
  }
  if (!(x > 0.0))
    throw NumericalError("occupation: Bose distribution diverges for omega <= mu (omega-mu = " +
                         std::to_string(omega - mu) + ")");
  const double n = 1.0 / std::expm1(x);
  return n < 1e-300 ? 0.0 : n;
}

SelfEnergyPair build_self_energies(const LatticeSpec& spec, const BathSpec& bath) {
  spec.validate();
  bath.validate();
  if (spec.lx < 2)
    throw ConfigError("lattice.L_X",
                      "must be >= 2 so hot and cold bath supports are disjoint");

  SelfEnergyPair se;
  se.gamma_hot = Eigen::VectorXd::Zero(spec.dim());
  se.gamma_cold = Eigen::VectorXd::Zero(spec.dim());
  for (int y = 1; y <= spec.ly; ++y) {
    for (int f = 0; f < 2; ++f) {
      se.gamma_hot[flat_index({1, y, static_cast<Flavor>(f)}, spec)] = bath.gamma;
      se.gamma_cold[flat_index({spec.lx, y, static_cast<Flavor>(f)}, spec)] = bath.gamma;
    }
  }
  return se;
}

} // namespace qwz
