#include "qwz/semiclassical.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

namespace qwz {

namespace {

constexpr double kGapFloor = 1e-12;

void require_isotropic(const LatticeSpec& spec) {
  if (std::abs(spec.tx - spec.ty) > 1e-12 * (spec.tx + spec.ty))
    throw ConfigError("lattice", "the Bloch analysis assumes tx = ty");
}

Eigen::Vector3d bloch_h(double sin_kx, double cos_kx, double sin_ky, double cos_ky,
                        const LatticeSpec& spec) {
  return {spec.ty * sin_ky, spec.tx * sin_kx, spec.m + spec.tx * cos_kx + spec.ty * cos_ky};
}

// d h / d kx and d h / d ky from the analytic derivatives.
Eigen::Vector3d bloch_dhx(double sin_kx, double cos_kx, const LatticeSpec& spec) {
  return {0.0, spec.tx * cos_kx, -spec.tx * sin_kx};
}
Eigen::Vector3d bloch_dhy(double sin_ky, double cos_ky, const LatticeSpec& spec) {
  return {spec.ty * cos_ky, 0.0, -spec.ty * sin_ky};
}

// Midpoint BZ grid, symmetric under k -> -k: the mirrored half reuses the
// negated values so parity cancellations are exact in floating point.
struct BzGrid {
  std::vector<double> sin_k, cos_k;

  explicit BzGrid(int n, double offset = 0.5) {
    sin_k.resize(n);
    cos_k.resize(n);
    const double dk = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) {
      if (offset == 0.5 && 2 * i + 1 > n) {
        sin_k[i] = -sin_k[n - 1 - i];
        cos_k[i] = cos_k[n - 1 - i];
      } else {
        const double k = -M_PI + (i + offset) * dk;
        sin_k[i] = std::sin(k);
        cos_k[i] = std::cos(k);
      }
    }
  }
};

} // namespace

BlochPoint bloch_point(double kx, double ky, const LatticeSpec& spec) {
  BlochPoint p;
  p.kx = kx;
  p.ky = ky;
  p.h = bloch_h(std::sin(kx), std::cos(kx), std::sin(ky), std::cos(ky), spec);
  const double hn = p.h.norm();
  p.omega_plus = spec.omega0 + hn;
  p.omega_minus = spec.omega0 - hn;
  return p;
}

double berry_curvature(double kx, double ky, Band band, const LatticeSpec& spec) {
  require_isotropic(spec);
  const double t = spec.tx;
  const double mt = spec.m / t;
  const double sx = std::sin(kx), cx = std::cos(kx);
  const double sy = std::sin(ky), cy = std::cos(ky);
  const double base = sx * sx + sy * sy + (mt + cx + cy) * (mt + cx + cy);
  if (base <= kGapFloor * kGapFloor)
    throw SingularityError("berry_curvature: gap closes at this quasimomentum");
  const double numerator = cx + cy + mt * cx * cy;
  return static_cast<double>(band) * numerator / (2.0 * std::pow(base, 1.5));
}

double berry_curvature_geometric(double kx, double ky, Band band, const LatticeSpec& spec) {
  const double sx = std::sin(kx), cx = std::cos(kx);
  const double sy = std::sin(ky), cy = std::cos(ky);
  const Eigen::Vector3d h = bloch_h(sx, cx, sy, cy, spec);
  const double hn = h.norm();
  if (hn <= kGapFloor)
    throw SingularityError("berry_curvature_geometric: gap closes at this quasimomentum");
  const Eigen::Vector3d n = h / hn;
  const Eigen::Vector3d dhx = bloch_dhx(sx, cx, spec);
  const Eigen::Vector3d dhy = bloch_dhy(sy, cy, spec);
  const Eigen::Vector3d dnx = (dhx - n * n.dot(dhx)) / hn;
  const Eigen::Vector3d dny = (dhy - n * n.dot(dhy)) / hn;
  // F_± = ∓ (1/2) n · (∂_kx n × ∂_ky n)
  return -static_cast<double>(band) * 0.5 * n.dot(dnx.cross(dny));
}

double plaquette_berry_flux(double kx, double ky, double dk, Band band,
                            const LatticeSpec& spec) {
  auto eigenvector = [&](double qx, double qy) -> Eigen::Vector2cd {
    const BlochPoint p = bloch_point(qx, qy, spec);
    Eigen::Matrix2cd hk;
    const std::complex<double> off(p.h.x(), -p.h.y());
    hk << p.h.z(), off, std::conj(off), -p.h.z();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(hk);
    return solver.eigenvectors().col(band == Band::Lower ? 0 : 1);
  };

  const Eigen::Vector2cd u1 = eigenvector(kx, ky);
  const Eigen::Vector2cd u2 = eigenvector(kx + dk, ky);
  const Eigen::Vector2cd u3 = eigenvector(kx + dk, ky + dk);
  const Eigen::Vector2cd u4 = eigenvector(kx, ky + dk);

  const std::complex<double> loop =
      u1.dot(u2) * u2.dot(u3) * u3.dot(u4) * u4.dot(u1);
  return -std::arg(loop);
}

ChernResult chern_number(Band band, const LatticeSpec& spec, int grid_n) {
  require_isotropic(spec);
  if (grid_n < 50) throw ConfigError("chern_number", "grid_n must be >= 50");

  const BzGrid grid(grid_n);
  const double t = spec.tx;
  const double mt = spec.m / t;
  double sum = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double sx = grid.sin_k[i], cx = grid.cos_k[i];
      const double sy = grid.sin_k[j], cy = grid.cos_k[j];
      const double base = sx * sx + sy * sy + (mt + cx + cy) * (mt + cx + cy);
      if (base <= kGapFloor * kGapFloor)
        throw SingularityError("chern_number: gap closes on the grid");
      sum += (cx + cy + mt * cx * cy) / (2.0 * std::pow(base, 1.5));
    }
  }
  const double dk = 2.0 * M_PI / grid_n;
  const double value = static_cast<double>(band) * sum * dk * dk / (2.0 * M_PI);
  ChernResult result;
  result.chern = static_cast<int>(std::lround(value));
  result.deviation = std::abs(value - result.chern);
  if (result.deviation >= 0.1)
    throw NumericalError("chern_number: grid sum " + std::to_string(value) +
                         " is far from an integer (gap closing?)");
  return result;
}

double PotentialSpec::value(double x, double y) const {
  return std::pow(x / scale_x, exponent) + std::pow(y / scale_y, exponent);
}

Eigen::Vector2d PotentialSpec::gradient(double x, double y) const {
  const double h = grad_step;
  return {(value(x + h, y) - value(x - h, y)) / (2.0 * h),
          (value(x, y + h) - value(x, y - h)) / (2.0 * h)};
}

double semiclassical_weight(const LatticeSpec& spec,
                            const std::function<double(double)>& occupation, int grid_n) {
  require_isotropic(spec);
  const BzGrid grid(grid_n);
  const double mt = spec.m / spec.tx;
  double sum = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double sx = grid.sin_k[i], cx = grid.cos_k[i];
      const double sy = grid.sin_k[j], cy = grid.cos_k[j];
      const double base = sx * sx + sy * sy + (mt + cx + cy) * (mt + cx + cy);
      const double hn = spec.tx * std::sqrt(base);
      const double weight =
          occupation(spec.omega0 - hn) - occupation(spec.omega0 + hn);
      const double curvature_minus = -(cx + cy + mt * cx * cy) / (2.0 * std::pow(base, 1.5));
      sum += weight * curvature_minus;
    }
  }
  const double dk = 2.0 * M_PI / grid_n;
  return sum * dk * dk;
}

PlanarField semiclassical_current_field(const LatticeSpec& spec,
                                        const std::function<double(double)>& occupation,
                                        const PotentialSpec& potential, const FieldGrid& grid,
                                        int grid_n) {
  const double s = semiclassical_weight(spec, occupation, grid_n);

  const int side = 2 * grid.points_per_side + 1;
  const double step = grid.half_extent / grid.points_per_side;
  PlanarField field;
  field.x.resize(side * side);
  field.y.resize(side * side);
  field.ix.resize(side * side);
  field.iy.resize(side * side);
  int idx = 0;
  for (int iy = -grid.points_per_side; iy <= grid.points_per_side; ++iy) {
    for (int ix = -grid.points_per_side; ix <= grid.points_per_side; ++ix, ++idx) {
      const double x = ix * step;
      const double y = iy * step;
      const Eigen::Vector2d grad = potential.gradient(x, y);
      field.x[idx] = x;
      field.y[idx] = y;
      // I = S (∇V × ẑ)
      field.ix[idx] = s * grad.y();
      field.iy[idx] = -s * grad.x();
    }
  }
  return field;
}

double bulk_cancellation_check(const LatticeSpec& spec,
                               const std::function<double(double)>& occupation, int grid_n,
                               bool symmetric_grid) {
  require_isotropic(spec);
  const BzGrid grid(grid_n, symmetric_grid ? 0.5 : 0.3);
  const double dk = 2.0 * M_PI / grid_n;

  auto term = [&](double sx, double cx, double sy, double cy) -> Eigen::Vector2d {
    const Eigen::Vector3d h = bloch_h(sx, cx, sy, cy, spec);
    const double hn = h.norm();
    const double weight =
        occupation(spec.omega0 - hn) - occupation(spec.omega0 + hn);
    // ∂_k ω_- = -∂_k |h| = -(h·∂_k h)/|h|
    const double vx = -h.dot(bloch_dhx(sx, cx, spec)) / hn;
    const double vy = -h.dot(bloch_dhy(sy, cy, spec)) / hn;
    return weight * Eigen::Vector2d(vx, vy);
  };

  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  if (symmetric_grid) {
    // Accumulate ±k pairs together; the integrand is odd, so each pair
    // cancels exactly (the mirrored points reuse negated sines). Only the
    // self-mirrored center point of an odd grid is unpaired, and there the
    // velocity vanishes by parity.
    for (int i = 0; i < grid_n; ++i) {
      for (int j = 0; j < grid_n; ++j) {
        const int mi = grid_n - 1 - i, mj = grid_n - 1 - j;
        if (j > mj || (j == mj && i > mi)) continue; // covered by its partner
        const double sx = grid.sin_k[i], cx = grid.cos_k[i];
        const double sy = grid.sin_k[j], cy = grid.cos_k[j];
        if (i == mi && j == mj) {
          sum += term(sx, cx, sy, cy);
        } else {
          sum += term(sx, cx, sy, cy) + term(-sx, cx, -sy, cy);
        }
      }
    }
  } else {
    for (int i = 0; i < grid_n; ++i)
      for (int j = 0; j < grid_n; ++j)
        sum += term(grid.sin_k[i], grid.cos_k[i], grid.sin_k[j], grid.cos_k[j]);
  }
  return (sum * dk * dk).norm();
}

} // namespace qwz
