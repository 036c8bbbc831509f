#include "rmt/quadrature.hpp"
#include "rmt/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rmt {

namespace {

constexpr double kTableLo    = -40.0;
constexpr double kTableHi    = 30.0; // Ai integral beyond here is below 1e-60
constexpr double kTableStep  = 0.25;
constexpr int    kPanelOrder = 20;

double integrate_ai(double lo, double hi)
{
  auto const  &g = gauss_legendre(kPanelOrder);
  double const c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double       s = 0;
  for (int i = 0; i < kPanelOrder; ++i) { s += g.weights[i] * airy(c + h * g.nodes[i]).value; }
  return s * h;
}

// tail[j] = \int_{x_j}^\infty Ai, x_j = kTableLo + j * kTableStep
std::vector<double> const &tail_table()
{
  static std::vector<double> const table = [] {
    int const           count = static_cast<int>(std::lround((kTableHi - kTableLo) / kTableStep));
    std::vector<double> t(count + 1, 0.0);
    for (int j = count - 1; j >= 0; --j) {
      double const lo = kTableLo + j * kTableStep;
      t[j]            = t[j + 1] + integrate_ai(lo, lo + kTableStep);
    }
    return t;
  }();
  return table;
}

} // namespace

double airy_tail(double x)
{
  if (x < kTableLo) { throw std::domain_error("airy_tail: argument below -40"); }
  if (x >= kTableHi) { return integrate_ai(x, x + 10.0); }
  auto const  &t  = tail_table();
  int const    j  = static_cast<int>(std::floor((x - kTableLo) / kTableStep));
  double const xj = kTableLo + j * kTableStep;
  return t[j] - integrate_ai(xj, x);
}

} // namespace rmt
