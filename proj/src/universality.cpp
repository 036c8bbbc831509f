#include "rmt/universality.hpp"

#include "rmt/detail/parallel.hpp"
#include "rmt/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace rmt {

std::string_view to_string(ScalingMode m)
{
  switch (m) {
  case ScalingMode::Bulk: return "bulk";
  case ScalingMode::Edge: return "edge";
  case ScalingMode::Hard: return "hard";
  case ScalingMode::Origin: return "origin";
  }
  return "unknown";
}

std::optional<ScalingMode> parse_scaling_mode(std::string_view name)
{
  for (auto m : {ScalingMode::Bulk, ScalingMode::Edge, ScalingMode::Hard, ScalingMode::Origin}) {
    if (to_string(m) == name) { return m; }
  }
  return std::nullopt;
}

Potential default_potential(ScalingMode mode, double alpha)
{
  switch (mode) {
  case ScalingMode::Hard: return Potential{{0.0, 1.0}, true, alpha};
  case ScalingMode::Origin: return Potential{{0.0, 0.0, 0.5}, false, alpha};
  default: return Potential{{0.0, 0.0, 0.5}};
  }
}

ScalingWindow universality_window(EquilibriumMeasure const &mu, ScalingMode mode, std::vector<double> const &grid,
                                  std::optional<double> x_star)
{
  ScalingWindow w;
  w.u = grid;
  w.v = grid;
  switch (mode) {
  case ScalingMode::Bulk:
    w.center = x_star.value_or(0.5 * (mu.a + mu.b));
    if (!(w.center > mu.a && w.center < mu.b)) { throw std::invalid_argument("bulk point outside the support"); }
    w.c = density(mu, w.center);
    break;
  case ScalingMode::Edge:
    if (mu.potential.hard_edge) { throw std::invalid_argument("edge mode needs a soft right edge"); }
    w.center   = mu.b;
    w.c        = soft_edge_constant(mu);
    w.exponent = 2.0 / 3.0;
    break;
  case ScalingMode::Hard:
    if (!mu.potential.hard_edge) { throw std::invalid_argument("hard mode needs a hard-edge potential"); }
    w.center   = 0.0;
    w.c        = hard_edge_constant(mu);
    w.exponent = 2.0;
    break;
  case ScalingMode::Origin:
    if (!(mu.a < 0.0 && mu.b > 0.0)) { throw std::invalid_argument("origin mode needs 0 inside the support"); }
    w.center = 0.0;
    w.c      = density(mu, 0.0);
    break;
  }
  if (!(w.c > 0.0)) { throw std::invalid_argument("scaling constant vanishes"); }
  return w;
}

double universal_kernel(ScalingMode mode, double alpha, double u, double v)
{
  switch (mode) {
  case ScalingMode::Bulk: return sine_kernel(u, v);
  case ScalingMode::Edge: return airy_kernel(u, v);
  case ScalingMode::Hard: return bessel_hard_kernel(alpha, u, v);
  case ScalingMode::Origin: return bessel_origin_kernel(alpha, u, v);
  }
  return 0.0;
}

UniversalityError universality_error(RecurrenceTable const &t, WeightSpec const &w, EquilibriumMeasure const &mu,
                                     ScalingMode mode, int n, std::vector<double> const &grid,
                                     std::optional<double> x_star, int workers)
{
  if (grid.size() < 2) { throw std::invalid_argument("grid needs at least two points"); }
  double const alpha  = w.potential.singularity_alpha;
  auto const   window = universality_window(mu, mode, grid, x_star);
  int const    m      = static_cast<int>(grid.size());

  std::vector<double> sup(m, 0.0), sum(m, 0.0);
  detail::parallel_for(m, workers, [&](int i) {
    ScalingWindow row = window;
    row.u             = {grid[i]};
    auto const values = rescaled_kernel(t, w, n, row);
    for (int j = 0; j < m; ++j) {
      double const e = std::abs(values[j] - universal_kernel(mode, alpha, grid[i], grid[j]));
      sup[i]         = std::max(sup[i], e);
      sum[i] += e;
    }
  });

  double const      h = (grid.back() - grid.front()) / (m - 1);
  UniversalityError r;
  for (int i = 0; i < m; ++i) {
    r.sup = std::max(r.sup, sup[i]);
    r.l1 += sum[i] * h * h;
  }
  return r;
}

UniversalityError universality_error(Potential const &V, ScalingMode mode, int n, std::vector<double> const &grid,
                                     std::optional<double> x_star, int workers)
{
  auto const       mu = solve_equilibrium(V);
  WeightSpec const w{V, n};
  auto const       t = recurrence_table(w, n);
  return universality_error(t, w, mu, mode, n, grid, x_star, workers);
}

std::vector<double> linspace(double lo, double hi, int count)
{
  if (count < 1) { throw std::invalid_argument("linspace needs a positive count"); }
  std::vector<double> x(count);
  for (int i = 0; i < count; ++i) { x[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
  return x;
}

} // namespace rmt
