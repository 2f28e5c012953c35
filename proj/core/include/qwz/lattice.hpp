#ifndef QWZ_LATTICE_HPP
#define QWZ_LATTICE_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qwz/errors.hpp"

namespace qwz {

/// Geometry and couplings of the two-flavor square lattice. All energies are
/// in units of the tunnelling amplitude t (tx = ty = 1 for the isotropic
/// case studied throughout).
struct LatticeSpec {
  int lx = 8;          ///< sites along x
  int ly = 8;          ///< sites along y
  double tx = 1.0;     ///< tunnelling amplitude, x direction (> 0)
  double ty = 1.0;     ///< tunnelling amplitude, y direction (> 0)
  double m = 1.0;      ///< flavor energy splitting
  double omega0 = 10.0; ///< on-site energy

  int sites() const noexcept { return lx * ly; }
  int dim() const noexcept { return 2 * lx * ly; }

  /// Throws ConfigError on invalid geometry or non-positive tunnelling.
  void validate() const;

  /// Band-structure classification for the isotropic lattice:
  /// nontrivial Chern phase iff 0 < |m| < 2t.
  bool topologically_nontrivial() const;
};

/// On-site defects: a common energy shift delta added to both flavor
/// components of each listed site. Coordinates are 1-based.
struct ImpuritySet {
  std::vector<std::pair<int, int>> sites;
  double delta = 1e4;

  bool empty() const noexcept { return sites.empty(); }
  /// Throws ConfigError on out-of-range coordinates, duplicates or delta < 0.
  void validate(const LatticeSpec& spec) const;
};

enum class Flavor : int { Up = 0, Down = 1 };

/// A lattice site with flavor, 1-based coordinates as in the Hamiltonian sums.
struct SiteIndex {
  int x = 1;
  int y = 1;
  Flavor flavor = Flavor::Up;
};

/// Flat matrix index of a site. The convention is frozen project-wide:
/// flavor fastest, then x, then y, i.e.
///   flat = 2*((y-1)*lx + (x-1)) + flavor.
/// Every matrix in this library (Hamiltonian, self-energies, correlation
/// matrices, symmetry actions) is expressed in this basis.
int flat_index(const SiteIndex& site, const LatticeSpec& spec);

/// Inverse of flat_index.
SiteIndex site_at(int flat, const LatticeSpec& spec);

/// Complex Hermitian single-particle Hamiltonian of dimension 2*lx*ly.
/// On-site blocks omega0*I + m*sigma_z (+ delta*I on impurity sites),
/// x bonds (tx/2)(sigma_z + i sigma_y) from (x,y) to (x+1,y), y bonds
/// (ty/2)(sigma_z + i sigma_x), open boundaries.
Eigen::MatrixXcd build_hamiltonian(const LatticeSpec& spec,
                                   const ImpuritySet& impurities = {});

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix;
/// modes.col(alpha) is the eigenvector of omega(alpha).
struct Spectrum {
  Eigen::VectorXd omega;
  Eigen::MatrixXcd modes;

  int dim() const noexcept { return static_cast<int>(omega.size()); }
};

Spectrum single_particle_spectrum(const Eigen::MatrixXcd& hamiltonian);

} // namespace qwz

#endif
