#include "qwz/weakcoupling.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace qwz {

ModeCouplings mode_couplings(const Spectrum& spectrum, const LatticeSpec& spec) {
  if (spectrum.dim() != spec.dim())
    throw ConfigError("weakcoupling", "spectrum does not match the lattice");

  ModeCouplings mc;
  mc.hot = Eigen::VectorXd::Zero(spectrum.dim());
  mc.cold = Eigen::VectorXd::Zero(spectrum.dim());
  for (int y = 1; y <= spec.ly; ++y) {
    for (int f = 0; f < 2; ++f) {
      const int hot_row = flat_index({1, y, static_cast<Flavor>(f)}, spec);
      const int cold_row = flat_index({spec.lx, y, static_cast<Flavor>(f)}, spec);
      mc.hot += spectrum.modes.row(hot_row).cwiseAbs2().transpose();
      mc.cold += spectrum.modes.row(cold_row).cwiseAbs2().transpose();
    }
  }
  for (int alpha = 0; alpha + 1 < spectrum.dim(); ++alpha)
    if (spectrum.omega[alpha + 1] - spectrum.omega[alpha] < 1e-8) mc.degenerate = true;
  return mc;
}

WeakCouplingSolution weak_coupling_correlation(const Spectrum& spectrum,
                                               const ModeCouplings& couplings,
                                               const BathSpec& bath) {
  bath.validate();
  if (bath.statistics == Statistics::Boson && spectrum.omega.minCoeff() <= 0.0)
    throw NumericalError("weak_coupling_correlation: bosonic solve requires ω_α > 0");

  WeakCouplingSolution sol;
  sol.occupations.resize(spectrum.dim());
  for (int alpha = 0; alpha < spectrum.dim(); ++alpha) {
    const double w = spectrum.omega[alpha];
    const double nh = occupation(w, bath.t_hot, bath.mu, bath.statistics);
    const double nc = occupation(w, bath.t_cold, bath.mu, bath.statistics);
    const double s = couplings.hot[alpha];
    const double r = couplings.cold[alpha];
    if (s + r < 1e-14) {
      // Occupation of a mode invisible to both baths is set by higher-order
      // processes the model omits; fall back to the plain average.
      sol.occupations[alpha] = 0.5 * (nh + nc);
      sol.decoupled_mode = true;
    } else {
      sol.occupations[alpha] = (s * nh + r * nc) / (s + r);
    }
  }
  sol.correlation = spectrum.modes * sol.occupations.asDiagonal() * spectrum.modes.adjoint();
  return sol;
}

double lindblad_residual(const Spectrum& spectrum, const ModeCouplings& couplings,
                         const BathSpec& bath, const Eigen::MatrixXcd& correlation) {
  if (correlation.rows() != spectrum.dim())
    throw ConfigError("weakcoupling", "correlation and spectrum dimensions disagree");

  const Eigen::MatrixXcd in_modes =
      spectrum.modes.adjoint() * (correlation * spectrum.modes);
  const double gamma = bath.gamma;

  double residual = 0.0;
  for (int a = 0; a < spectrum.dim(); ++a) {
    const double nh = occupation(spectrum.omega[a], bath.t_hot, bath.mu, bath.statistics);
    const double nc = occupation(spectrum.omega[a], bath.t_cold, bath.mu, bath.statistics);
    const double na = in_modes(a, a).real();
    const double rate = gamma * couplings.hot[a] * (nh - na) +
                        gamma * couplings.cold[a] * (nc - na);
    residual = std::max(residual, std::abs(rate));
    for (int b = 0; b < a; ++b) {
      const std::complex<double> decay(
          -0.5 * gamma *
              (couplings.hot[a] + couplings.cold[a] + couplings.hot[b] + couplings.cold[b]),
          -(spectrum.omega[a] - spectrum.omega[b]));
      residual = std::max(residual, std::abs(decay * in_modes(a, b)));
    }
  }
  return residual;
}

namespace {

// Mode-wise dn/dt from the dissipator form of the master equation.
double rate_dissipator(double n, double nh, double nc, double gamma, double s, double r) {
  return gamma * s * (nh - n) + gamma * r * (nc - n);
}

// The same rate from the non-Hermitian Hamiltonian plus quantum jumps,
// using Wick factorization of <n̂²>, <c n̂ c†> and <c† n̂ c> for a Gaussian
// mode. The split differs between statistics; the sum must not.
double rate_decomposed(double n, double nh, double nc, double gamma, double s, double r,
                       Statistics statistics) {
  const double pump = gamma * (s * nh + r * nc);
  if (statistics == Statistics::Boson) {
    const double drain = gamma * (s * (1.0 + nh) + r * (1.0 + nc));
    const double n_sq = 2.0 * n * n + n;
    const double non_hermitian = -pump * n - (pump + drain) * n_sq;
    const double jumps = pump * (2.0 * n * n + 3.0 * n + 1.0) + drain * 2.0 * n * n;
    return non_hermitian + jumps;
  }
  const double drain = gamma * (s * (1.0 - nh) + r * (1.0 - nc));
  const double non_hermitian = -pump * n - (drain - pump) * n;
  const double jumps = pump * (1.0 - n);
  return non_hermitian + jumps;
}

} // namespace

bool jump_decomposition_check(const Spectrum& spectrum, const ModeCouplings& couplings,
                              const BathSpec& bath) {
  std::mt19937 rng(20240915u); // fixed seed, deterministic check
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::uniform_real_distribution<double> wide(0.05, 5.0);

  double worst = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    for (int a = 0; a < spectrum.dim(); ++a) {
      const double n =
          bath.statistics == Statistics::Fermion ? unit(rng) : wide(rng);
      const double nh = occupation(spectrum.omega[a], bath.t_hot, bath.mu, bath.statistics);
      const double nc = occupation(spectrum.omega[a], bath.t_cold, bath.mu, bath.statistics);
      const double s = couplings.hot[a];
      const double r = couplings.cold[a];
      const double direct = rate_dissipator(n, nh, nc, bath.gamma, s, r);
      const double split = rate_decomposed(n, nh, nc, bath.gamma, s, r, bath.statistics);
      worst = std::max(worst, std::abs(direct - split));
    }
  }
  return worst <= 1e-12 * std::max(1.0, bath.gamma);
}

} // namespace qwz
