#ifndef QWZ_SEMICLASSICAL_HPP
#define QWZ_SEMICLASSICAL_HPP

#include <Eigen/Dense>
#include <functional>

#include "qwz/lattice.hpp"

namespace qwz {

enum class Band : int { Lower = -1, Upper = +1 };

/// Periodic-boundary Bloch data at quasimomentum k:
/// h(k) = [ty sin k_y, tx sin k_x, m + tx cos k_x + ty cos k_y],
/// band energies ω₀ ± |h(k)|.
struct BlochPoint {
  double kx = 0.0;
  double ky = 0.0;
  Eigen::Vector3d h;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
};

BlochPoint bloch_point(double kx, double ky, const LatticeSpec& spec);

/// Berry curvature of the chosen band from the isotropic closed form
///   F_±(k) = ±[cos kx + cos ky + (m/t) cos kx cos ky] /
///            (2 [sin²kx + sin²ky + ((m/t) + cos kx + cos ky)²]^{3/2}).
/// Requires tx = ty and a gapped point (|h| > 1e-12).
double berry_curvature(double kx, double ky, Band band, const LatticeSpec& spec);

/// Independent oracle: F_± = ∓(1/2) n·(∂_kx n × ∂_ky n) with n = h/|h|,
/// evaluated from the analytic derivatives of h. Valid for anisotropic
/// tunnelling too.
double berry_curvature_geometric(double kx, double ky, Band band, const LatticeSpec& spec);

/// Second numerical oracle: link-variable (plaquette) Berry flux through the
/// square [kx, kx+dk) x [ky, ky+dk), from the Bloch eigenvectors. Approaches
/// F(k)·dk² as dk -> 0.
double plaquette_berry_flux(double kx, double ky, double dk, Band band,
                            const LatticeSpec& spec);

struct ChernResult {
  int chern = 0;
  double deviation = 0.0; ///< |grid sum - nearest integer| before rounding
};

/// Uniform-grid Chern number of the band: (1/2π) Σ F(k) Δk² on a midpoint
/// grid symmetric under k -> -k. Throws if the pre-rounding deviation
/// exceeds 0.1 (suspected gap closing).
ChernResult chern_number(Band band, const LatticeSpec& spec, int grid_n);

/// Confining potential V(x,y) = (x/scale_x)^p + (y/scale_y)^p on the
/// lattice-centered plane; gradient by central differences with step
/// grad_step.
struct PotentialSpec {
  double scale_x = 8.0;
  double scale_y = 8.0;
  int exponent = 10;
  double grad_step = 1e-4;

  double value(double x, double y) const;
  Eigen::Vector2d gradient(double x, double y) const;
};

/// Uniform sample grid for the semiclassical field, lattice-centered:
/// points x,y in [-half_extent, half_extent] with (2*points_per_side+1)
/// samples per axis.
struct FieldGrid {
  double half_extent = 10.0;
  int points_per_side = 10;
};

/// Planar vector field sampled on the grid.
struct PlanarField {
  Eigen::VectorXd x, y;   ///< sample coordinates (row-major over the grid)
  Eigen::VectorXd ix, iy; ///< field components
};

/// Brillouin-zone weight of the edge term,
///   S = ∫ d²k {n[ω_-(k)] - n[ω_+(k)]} F_-(k),
/// by midpoint-grid Riemann sum. The occupation must depend on energy only.
double semiclassical_weight(const LatticeSpec& spec,
                            const std::function<double(double)>& occupation, int grid_n);

/// Semiclassical edge current field I(x,y) = S · (∇V × ẑ), i.e. the
/// confining force rotated by 90°, scaled by the BZ weight. The bulk
/// band-velocity term integrates to zero by parity and is omitted.
PlanarField semiclassical_current_field(const LatticeSpec& spec,
                                        const std::function<double(double)>& occupation,
                                        const PotentialSpec& potential, const FieldGrid& grid,
                                        int grid_n = 200);

/// ‖∫ d²k {n[ω_-]-n[ω_+]} ∂_k ω_-‖₂ — the bulk term that parity kills on a
/// symmetric grid. symmetric_grid=false uses an offset (non ±k paired) grid
/// to expose the O(1/grid_n) residual instead.
double bulk_cancellation_check(const LatticeSpec& spec,
                               const std::function<double(double)>& occupation, int grid_n,
                               bool symmetric_grid = true);

} // namespace qwz

#endif
