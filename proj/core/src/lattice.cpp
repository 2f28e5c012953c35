#include "qwz/lattice.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>
#include <string>

namespace qwz {

namespace {

using Block2 = Eigen::Matrix2cd;
constexpr std::complex<double> kI{0.0, 1.0};

Block2 sigma_z() {
  Block2 s;
  s << 1, 0, 0, -1;
  return s;
}

Block2 sigma_y() {
  Block2 s;
  s << 0, -kI, kI, 0;
  return s;
}

Block2 sigma_x() {
  Block2 s;
  s << 0, 1, 1, 0;
  return s;
}

} // namespace

void LatticeSpec::validate() const {
  if (lx < 1) throw ConfigError("lattice.L_X", "must be >= 1");
  if (ly < 1) throw ConfigError("lattice.L_Y", "must be >= 1");
  if (!(tx > 0.0)) throw ConfigError("lattice.t_X", "must be > 0");
  if (!(ty > 0.0)) throw ConfigError("lattice.t_Y", "must be > 0");
  if (!std::isfinite(m)) throw ConfigError("lattice.m", "must be finite");
  if (!std::isfinite(omega0)) throw ConfigError("lattice.omega0", "must be finite");
}

bool LatticeSpec::topologically_nontrivial() const {
  const double t = 0.5 * (tx + ty);
  return std::abs(m) > 0.0 && std::abs(m) < 2.0 * t;
}

void ImpuritySet::validate(const LatticeSpec& spec) const {
  if (delta < 0.0) throw ConfigError("impurities.delta", "must be >= 0");
  std::set<std::pair<int, int>> seen;
  for (const auto& [x, y] : sites) {
    if (x < 1 || x > spec.lx || y < 1 || y > spec.ly)
      throw ConfigError("impurities.sites",
                        "site (" + std::to_string(x) + "," + std::to_string(y) +
                            ") outside the " + std::to_string(spec.lx) + "x" +
                            std::to_string(spec.ly) + " lattice");
    if (!seen.insert({x, y}).second)
      throw ConfigError("impurities.sites", "duplicate site (" + std::to_string(x) +
                                                "," + std::to_string(y) + ")");
  }
}

int flat_index(const SiteIndex& site, const LatticeSpec& spec) {
  if (site.x < 1 || site.x > spec.lx || site.y < 1 || site.y > spec.ly)
    throw ConfigError("site", "coordinates (" + std::to_string(site.x) + "," +
                                  std::to_string(site.y) + ") out of range");
  return 2 * ((site.y - 1) * spec.lx + (site.x - 1)) + static_cast<int>(site.flavor);
}

SiteIndex site_at(int flat, const LatticeSpec& spec) {
  if (flat < 0 || flat >= spec.dim())
    throw ConfigError("site", "flat index " + std::to_string(flat) + " out of range");
  SiteIndex s;
  s.flavor = static_cast<Flavor>(flat & 1);
  const int cell = flat / 2;
  s.x = cell % spec.lx + 1;
  s.y = cell / spec.lx + 1;
  return s;
}

Eigen::MatrixXcd build_hamiltonian(const LatticeSpec& spec, const ImpuritySet& impurities) {
  spec.validate();
  impurities.validate(spec);

  const int n = spec.dim();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);

  const Block2 onsite = spec.omega0 * Block2::Identity() + spec.m * sigma_z();
  const Block2 hop_x = 0.5 * spec.tx * (sigma_z() + kI * sigma_y());
  const Block2 hop_y = 0.5 * spec.ty * (sigma_z() + kI * sigma_x());

  auto cell = [&](int x, int y) { return 2 * ((y - 1) * spec.lx + (x - 1)); };

  for (int y = 1; y <= spec.ly; ++y)
    for (int x = 1; x <= spec.lx; ++x)
      h.block<2, 2>(cell(x, y), cell(x, y)) = onsite;

  for (const auto& [x, y] : impurities.sites)
    h.block<2, 2>(cell(x, y), cell(x, y)) += impurities.delta * Block2::Identity();

  // Creation on the shifted site acts from the left, so the forward bond
  // block sits at (row = x+1, col = x); the adjoint fills the reverse bond.
  for (int y = 1; y <= spec.ly; ++y)
    for (int x = 1; x < spec.lx; ++x) {
      h.block<2, 2>(cell(x + 1, y), cell(x, y)) = hop_x;
      h.block<2, 2>(cell(x, y), cell(x + 1, y)) = hop_x.adjoint();
    }
  for (int y = 1; y < spec.ly; ++y)
    for (int x = 1; x <= spec.lx; ++x) {
      h.block<2, 2>(cell(x, y + 1), cell(x, y)) = hop_y;
      h.block<2, 2>(cell(x, y), cell(x, y + 1)) = hop_y.adjoint();
    }

  return h;
}

Spectrum single_particle_spectrum(const Eigen::MatrixXcd& hamiltonian) {
  const double scale = hamiltonian.cwiseAbs().maxCoeff();
  const double defect = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && defect > 1e-12 * scale)
    throw NumericalError("single_particle_spectrum: matrix is not Hermitian (defect " +
                         std::to_string(defect) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
  if (solver.info() != Eigen::Success)
    throw NumericalError("single_particle_spectrum: eigensolver failed");

  Spectrum s;
  s.omega = solver.eigenvalues();
  s.modes = solver.eigenvectors();
  return s;
}

} // namespace qwz
