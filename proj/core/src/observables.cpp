#include "qwz/observables.hpp"

#include <cmath>
#include <complex>

namespace qwz {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

constexpr std::complex<double> kI{0.0, 1.0};

// Flavor contraction of one directed bond: Im Σ_{σ'σ} M_{σ'σ} C[(from,σ),(to,σ')]
// with M the hopping flavor matrix of the bond direction. <J> = 2 Re[(t/2i) z]
// = t Im z.
double bond_value(const MatrixXcd& c, const Eigen::Matrix2cd& hop_matrix, int from, int to,
                  double amplitude) {
  std::complex<double> z = 0.0;
  for (int sp = 0; sp < 2; ++sp)
    for (int s = 0; s < 2; ++s) z += hop_matrix(sp, s) * c(from + s, to + sp);
  return amplitude * z.imag();
}

} // namespace

double CurrentField::max_abs() const {
  double m = 0.0;
  if (jx.size() > 0) m = std::max(m, jx.cwiseAbs().maxCoeff());
  if (jy.size() > 0) m = std::max(m, jy.cwiseAbs().maxCoeff());
  return m;
}

CurrentField bond_currents(const Eigen::MatrixXcd& correlation, const LatticeSpec& spec) {
  if (correlation.rows() != spec.dim() || correlation.cols() != spec.dim())
    throw ConfigError("observables", "correlation matrix does not match the lattice");

  Eigen::Matrix2cd sigma_z, sigma_y, sigma_x;
  sigma_z << 1, 0, 0, -1;
  sigma_y << 0, -kI, kI, 0;
  sigma_x << 0, 1, 1, 0;
  const Eigen::Matrix2cd hop_x = sigma_z + kI * sigma_y;
  const Eigen::Matrix2cd hop_y = sigma_z + kI * sigma_x;

  CurrentField field;
  field.jx = MatrixXd::Zero(std::max(spec.lx - 1, 0), spec.ly);
  field.jy = MatrixXd::Zero(spec.lx, std::max(spec.ly - 1, 0));

  auto cell = [&](int x, int y) { return 2 * ((y - 1) * spec.lx + (x - 1)); };

  for (int y = 1; y <= spec.ly; ++y)
    for (int x = 1; x < spec.lx; ++x)
      field.jx(x - 1, y - 1) =
          bond_value(correlation, hop_x, cell(x, y), cell(x + 1, y), spec.tx);
  for (int y = 1; y < spec.ly; ++y)
    for (int x = 1; x <= spec.lx; ++x)
      field.jy(x - 1, y - 1) =
          bond_value(correlation, hop_y, cell(x, y), cell(x, y + 1), spec.ty);

  // The bond expectation is Hermitian by construction; any imaginary dust in
  // C shows up through its anti-Hermitian part instead.
  field.imag_residue =
      0.5 * (correlation - correlation.adjoint()).cwiseAbs().maxCoeff();
  return field;
}

CurrentDiagnostics edge_bulk_diagnostics(const CurrentField& field, const LatticeSpec& spec) {
  if (field.jx.rows() != spec.lx - 1 || field.jx.cols() != spec.ly)
    throw ConfigError("observables", "current field does not match the lattice");

  CurrentDiagnostics diag;
  diag.bulk_column = spec.lx / 2;
  // Eq. (5) normalization 1/(2 lx) over the lx-1 existing bonds.
  for (int x = 1; x < spec.lx; ++x)
    diag.edge += field.jx(x - 1, spec.ly - 1) - field.jx(x - 1, 0);
  diag.edge /= 2.0 * spec.lx;
  diag.bulk = field.jx.row(diag.bulk_column - 1).mean();
  diag.total = spec.ly * diag.bulk;
  return diag;
}

double landauer_total(const EffectiveHamiltonian& eff, const SelfEnergyPair& se,
                      const BathSpec& bath, const QuadratureSpec& quad) {
  bath.validate();
  quad.validate();
  const bool bosonic = bath.statistics == Statistics::Boson;
  if (bosonic && eff.eigenvalues.real().minCoeff() <= 0.0)
    throw NumericalError("landauer_total: bosonic solve requires Re λ_j > 0");

  const Eigen::VectorXd re = eff.eigenvalues.real();
  const double t_max = std::max(bath.t_hot, bath.t_cold);
  const double margin = quad.margin_or_default(eff.gamma_max, t_max);
  double lo = re.minCoeff() - margin;
  const double hi = re.maxCoeff() + margin;
  if (bosonic) lo = std::max(lo, 0.5 * re.minCoeff());

  std::vector<double> breakpoints(re.data(), re.data() + re.size());
  if (!bosonic) breakpoints.push_back(bath.mu);

  const TransmissionEvaluator trans(eff, se);
  double min_transmission = 0.0;
  auto integrand = [&](double w) {
    const double t = trans(w);
    min_transmission = std::min(min_transmission, t);
    return t * (occupation(w, bath.t_hot, bath.mu, bath.statistics) -
                occupation(w, bath.t_cold, bath.mu, bath.statistics));
  };

  const auto result = quad::integrate_scalar(
      integrand, quad::initial_partition(lo, hi, breakpoints, false, false),
      quad.rel_tolerance, quad.abs_tolerance, quad.max_panels);

  if (min_transmission < -1e-10 * std::max(1.0, eff.gamma_max))
    throw NumericalError("landauer_total: negative transmission " +
                         std::to_string(min_transmission));
  return result.value / (2.0 * M_PI);
}

ModeOccupation mode_occupations(const Eigen::MatrixXcd& correlation, const Spectrum& spectrum) {
  if (correlation.rows() != spectrum.dim())
    throw ConfigError("observables", "correlation and spectrum dimensions disagree");

  ModeOccupation occ;
  occ.omega = spectrum.omega;
  occ.occupation.resize(spectrum.dim());
  const Eigen::MatrixXcd in_modes =
      spectrum.modes.adjoint() * (correlation * spectrum.modes);
  for (int alpha = 0; alpha < spectrum.dim(); ++alpha) {
    occ.occupation[alpha] = in_modes(alpha, alpha).real();
    occ.imag_residue = std::max(occ.imag_residue, std::abs(in_modes(alpha, alpha).imag()));
  }
  return occ;
}

double continuity_residual(const CurrentField& field, const LatticeSpec& spec) {
  double residual = 0.0;
  for (int y = 1; y <= spec.ly; ++y) {
    for (int x = 2; x < spec.lx; ++x) { // bath columns are exempt
      double net = field.jx(x - 2, y - 1) - field.jx(x - 1, y - 1);
      if (y > 1) net += field.jy(x - 1, y - 2);
      if (y < spec.ly) net -= field.jy(x - 1, y - 1);
      residual = std::max(residual, std::abs(net));
    }
  }
  return residual;
}

Eigen::VectorXd column_sums(const CurrentField& field) {
  return field.jx.rowwise().sum();
}

} // namespace qwz
