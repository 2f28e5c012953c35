#include "qwz/symmetry.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

namespace qwz {

namespace {

using Eigen::MatrixXcd;

// Permutation action (P ψ)[τ(site)] = ψ[site] for a site map τ, flavors kept.
MatrixXcd site_permutation(const LatticeSpec& spec,
                           const std::function<std::pair<int, int>(int, int)>& tau) {
  MatrixXcd p = MatrixXcd::Zero(spec.dim(), spec.dim());
  for (int y = 1; y <= spec.ly; ++y)
    for (int x = 1; x <= spec.lx; ++x) {
      const auto [xt, yt] = tau(x, y);
      for (int f = 0; f < 2; ++f) {
        const int from = flat_index({x, y, static_cast<Flavor>(f)}, spec);
        const int to = flat_index({xt, yt, static_cast<Flavor>(f)}, spec);
        p(to, from) = 1.0;
      }
    }
  return p;
}

MatrixXcd flavor_block_diagonal(const LatticeSpec& spec, double up_up, double up_down,
                                double down_up, double down_down) {
  MatrixXcd m = MatrixXcd::Zero(spec.dim(), spec.dim());
  for (int cell = 0; cell < spec.sites(); ++cell) {
    m(2 * cell, 2 * cell) = up_up;
    m(2 * cell, 2 * cell + 1) = up_down;
    m(2 * cell + 1, 2 * cell) = down_up;
    m(2 * cell + 1, 2 * cell + 1) = down_down;
  }
  return m;
}

} // namespace

SymmetryAction rotation_pi(const LatticeSpec& spec) {
  return {SymmetryKind::RotationPi,
          site_permutation(spec, [&](int x, int y) {
            return std::pair{spec.lx + 1 - x, spec.ly + 1 - y};
          }),
          false, +1, 0.0};
}

SymmetryAction reflection_y(const LatticeSpec& spec) {
  return {SymmetryKind::ReflectionY,
          site_permutation(spec, [&](int x, int y) { return std::pair{spec.lx + 1 - x, y}; }),
          false, +1, 0.0};
}

SymmetryAction reflection_x(const LatticeSpec& spec) {
  return {SymmetryKind::ReflectionX,
          site_permutation(spec, [&](int x, int y) { return std::pair{x, spec.ly + 1 - y}; }),
          false, +1, 0.0};
}

SymmetryAction flavor_rotation(const LatticeSpec& spec) {
  return {SymmetryKind::FlavorRotation, flavor_block_diagonal(spec, 1, 0, 0, -1), false, +1,
          0.0};
}

SymmetryAction flavor_swap(const LatticeSpec& spec) {
  return {SymmetryKind::FlavorSwap, flavor_block_diagonal(spec, 0, 1, 1, 0), false, +1, 0.0};
}

SymmetryAction gph(const LatticeSpec& spec) {
  SymmetryAction a = flavor_swap(spec);
  a.kind = SymmetryKind::GPH;
  a.antiunitary = true;
  a.sign = -1;
  a.shift = spec.omega0;
  return a;
}

SymmetryAction compose(const SymmetryAction& a, const SymmetryAction& b) {
  SymmetryAction c;
  c.kind = SymmetryKind::Composite;
  c.matrix = a.matrix * b.matrix;
  c.antiunitary = a.antiunitary != b.antiunitary;
  c.sign = a.sign * b.sign;
  c.shift = a.shift + b.shift;
  return c;
}

SymmetryAction pi_r_pi(const LatticeSpec& spec) {
  return compose(flavor_rotation(spec), rotation_pi(spec));
}

SymmetryAction pi_theta_sigma_y(const LatticeSpec& spec) {
  SymmetryAction a = compose(flavor_rotation(spec), reflection_y(spec));
  a.antiunitary = true;
  return a;
}

double check_hamiltonian_symmetry(const Eigen::MatrixXcd& hamiltonian,
                                  const SymmetryAction& action) {
  if (hamiltonian.rows() != action.matrix.rows())
    throw ConfigError("symmetry", "action and Hamiltonian dimensions disagree");
  const MatrixXcd shifted =
      hamiltonian - action.shift * MatrixXcd::Identity(hamiltonian.rows(), hamiltonian.cols());
  const MatrixXcd source = action.antiunitary ? shifted.conjugate() : shifted;
  const MatrixXcd transformed = action.matrix * source * action.matrix.adjoint();
  return (transformed - static_cast<double>(action.sign) * shifted).cwiseAbs().maxCoeff();
}

double check_gph_state(const Eigen::MatrixXcd& correlation, const LatticeSpec& spec) {
  if (correlation.rows() != spec.dim())
    throw ConfigError("symmetry", "correlation matrix does not match the lattice");
  const MatrixXcd s = flavor_swap(spec).matrix;
  const MatrixXcd expected =
      MatrixXcd::Identity(spec.dim(), spec.dim()) - s * correlation.conjugate() * s;
  return (correlation - expected).cwiseAbs().maxCoeff();
}

ImpurityClassification classify_impurities(const ImpuritySet& impurities,
                                           const LatticeSpec& spec) {
  impurities.validate(spec);
  std::set<std::pair<int, int>> sites(impurities.sites.begin(), impurities.sites.end());

  auto invariant_under = [&](auto&& tau) {
    return std::all_of(sites.begin(), sites.end(),
                       [&](const auto& s) { return sites.count(tau(s.first, s.second)) > 0; });
  };

  ImpurityClassification cls;
  cls.sigma_y_symmetric = invariant_under(
      [&](int x, int y) { return std::pair{spec.lx + 1 - x, y}; });
  cls.r_pi_symmetric = invariant_under(
      [&](int x, int y) { return std::pair{spec.lx + 1 - x, spec.ly + 1 - y}; });
  return cls;
}

} // namespace qwz
