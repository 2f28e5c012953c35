#include "qwz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace qwz {

void QuadratureSpec::validate() const {
  if (!(rel_tolerance > 0.0))
    throw ConfigError("quadrature.rel_tolerance", "must be > 0");
  if (!(abs_tolerance > 0.0))
    throw ConfigError("quadrature.abs_tolerance", "must be > 0");
  if (window_margin >= 0.0 && !(window_margin > 0.0))
    throw ConfigError("quadrature.window_margin", "must be > 0 (or negative for automatic)");
  if (max_panels < 1) throw ConfigError("quadrature.max_panels", "must be >= 1");
}

double QuadratureSpec::margin_or_default(double gamma, double t_max) const {
  if (window_margin > 0.0) return window_margin;
  return 20.0 * gamma + 10.0 * t_max + 2.0;
}

namespace quad {

namespace {

// Gauss-Kronrod 15(7) abscissae and weights (QUADPACK dqk15 constants).
constexpr std::array<double, 8> kAbscissae = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

} // namespace

PanelNodes panel_nodes(const PanelDomain& panel) {
  PanelNodes nodes{};
  const double center = 0.5 * (panel.lo + panel.hi);
  const double half = 0.5 * (panel.hi - panel.lo);

  for (int i = 0; i < 15; ++i) {
    const int k = i < 8 ? i : 14 - i;       // abscissa index
    const double xi = i < 8 ? -kAbscissae[k] : kAbscissae[k];
    const double u = center + half * xi;
    double jac = half;
    double omega = u;
    if (panel.map != 0) {
      const double s = 1.0 - u;
      omega = panel.edge + panel.map * u / s;
      jac *= 1.0 / (s * s);
    }
    nodes.omega[i] = omega;
    nodes.w_kronrod[i] = jac * kKronrodWeights[k];
    // Gauss nodes are the odd-index abscissae plus the center.
    nodes.w_gauss[i] = (k % 2 == 1) ? jac * kGaussWeights[k / 2]
                       : (k == 7)   ? jac * kGaussWeights[3]
                                    : 0.0;
  }
  return nodes;
}

std::vector<PanelDomain> initial_partition(double lo, double hi,
                                           std::vector<double> breakpoints,
                                           bool left_tail, bool right_tail) {
  if (!(hi > lo)) throw NumericalError("initial_partition: empty window");

  std::vector<double> cuts;
  cuts.push_back(lo);
  std::sort(breakpoints.begin(), breakpoints.end());
  const double min_gap = (hi - lo) * 1e-12;
  for (double b : breakpoints) {
    if (b <= lo + min_gap || b >= hi - min_gap) continue;
    if (b - cuts.back() > min_gap) cuts.push_back(b);
  }
  cuts.push_back(hi);

  std::vector<PanelDomain> panels;
  panels.reserve(cuts.size() + 1);
  if (left_tail) panels.push_back(PanelDomain{0.0, 1.0, -1, lo});
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    panels.push_back(PanelDomain{cuts[i], cuts[i + 1], 0, 0.0});
  if (right_tail) panels.push_back(PanelDomain{0.0, 1.0, +1, hi});
  return panels;
}

ScalarResult integrate_scalar(const std::function<double(double)>& f,
                              std::vector<PanelDomain> partition,
                              double rel_tol, double abs_tol, int max_panels) {
  struct Entry {
    double error;
    long id;
    PanelDomain domain;
    double value;
    bool operator<(const Entry& other) const {
      return error < other.error || (error == other.error && id < other.id);
    }
  };

  ScalarResult result;
  long next_id = 0;

  auto evaluate = [&](const PanelDomain& d) {
    const PanelNodes nodes = panel_nodes(d);
    double k15 = 0.0, g7 = 0.0;
    for (int i = 0; i < 15; ++i) {
      const double fi = f(nodes.omega[i]);
      k15 += nodes.w_kronrod[i] * fi;
      g7 += nodes.w_gauss[i] * fi;
    }
    result.evaluations += 15;
    return Entry{std::abs(k15 - g7), next_id++, d, k15};
  };

  std::priority_queue<Entry> heap;
  double total = 0.0, total_error = 0.0;
  for (const auto& d : partition) {
    Entry e = evaluate(d);
    total += e.value;
    total_error += e.error;
    heap.push(e);
  }

  while (total_error > std::max(abs_tol, rel_tol * std::abs(total)) && !heap.empty()) {
    if (static_cast<int>(heap.size()) >= max_panels)
      throw IntegrationError("integrate_scalar: panel budget exhausted", total_error);
    Entry worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_error -= worst.error;
    for (const auto& child : worst.domain.bisect()) {
      Entry e = evaluate(child);
      total += e.value;
      total_error += e.error;
      heap.push(e);
    }
  }

  result.value = total;
  result.error = total_error;
  result.panels = static_cast<int>(heap.size());
  return result;
}

} // namespace quad
} // namespace qwz
