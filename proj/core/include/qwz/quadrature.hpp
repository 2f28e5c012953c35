#ifndef QWZ_QUADRATURE_HPP
#define QWZ_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

#include "qwz/errors.hpp"

namespace qwz {

/// Tolerances and frequency-window policy for the steady-state integrals.
struct QuadratureSpec {
  double rel_tolerance = 1e-9;
  double abs_tolerance = 1e-12;
  /// Margin W added on both sides of the resonance span [min Re λ, max Re λ].
  /// Negative means automatic: 20 γ + 10 max(T_h, T_c) + 2 t.
  double window_margin = -1.0;
  int max_panels = 200000;

  void validate() const;
  double margin_or_default(double gamma, double t_max) const;
};

namespace quad {

/// A quadrature panel in mapped coordinates. map = 0 integrates f(ω) on
/// ω ∈ [lo, hi] directly. map = -1 covers the half-line ω ∈ (-∞, edge] via
/// ω = edge - u/(1-u) with u ∈ [lo, hi] ⊂ [0, 1); map = +1 covers
/// [edge, +∞) via ω = edge + u/(1-u). The rational change of variables
/// turns 1/ω² resolvent tails into smooth integrands.
struct PanelDomain {
  double lo = 0.0;
  double hi = 1.0;
  int map = 0;
  double edge = 0.0;

  std::array<PanelDomain, 2> bisect() const {
    const double mid = 0.5 * (lo + hi);
    return {PanelDomain{lo, mid, map, edge}, PanelDomain{mid, hi, map, edge}};
  }
};

/// The 15 evaluation points of a Gauss-Kronrod 15(7) rule on a panel,
/// already mapped to ω, with Kronrod and embedded-Gauss weights that
/// include the jacobian of the panel map. w_gauss is zero on the eight
/// Kronrod-only nodes.
struct PanelNodes {
  std::array<double, 15> omega;
  std::array<double, 15> w_kronrod;
  std::array<double, 15> w_gauss;
};

PanelNodes panel_nodes(const PanelDomain& panel);

/// Initial partition of the window [lo, hi] split at the interior
/// breakpoints (deduplicated, clipped), with optional half-line tail panels
/// attached beyond the window edges.
std::vector<PanelDomain> initial_partition(double lo, double hi,
                                           std::vector<double> breakpoints,
                                           bool left_tail, bool right_tail);

struct ScalarResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  int panels = 0;
};

/// Globally adaptive Gauss-Kronrod integration of a scalar integrand over
/// the given starting partition. Subdivides the largest-error panel until
/// the summed error estimate falls below max(abs_tol, rel_tol * |value|).
ScalarResult integrate_scalar(const std::function<double(double)>& f,
                              std::vector<PanelDomain> partition,
                              double rel_tol, double abs_tol, int max_panels);

} // namespace quad
} // namespace qwz

#endif
