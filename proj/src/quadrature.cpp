#include "rmt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace rmt {

namespace {

GaussRule make_rule(int n)
{
  GaussRule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double const p2 = p1;
        p1              = p0;
        p0              = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp               = n * (z * p0 - p1) / (z * z - 1.0);
      double const dz  = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) { break; }
    }
    r.nodes[i]             = -z;
    r.nodes[n - 1 - i]     = z;
    r.weights[i]           = 2.0 / ((1.0 - z * z) * dp * dp);
    r.weights[n - 1 - i]   = r.weights[i];
  }
  return r;
}

double panel(std::function<double(double)> const &f, double lo, double hi)
{
  auto const  &g = gauss_legendre(16);
  double const c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double       s = 0;
  for (int i = 0; i < 16; ++i) { s += g.weights[i] * f(c + h * g.nodes[i]); }
  return s * h;
}

double adapt(std::function<double(double)> const &f, double lo, double hi, double whole, double tol, int depth)
{
  double const mid   = 0.5 * (lo + hi);
  double const left  = panel(f, lo, mid);
  double const right = panel(f, mid, hi);
  double const both  = left + right;
  if (std::abs(both - whole) <= tol) { return both; }
  if (depth == 0) { throw std::runtime_error("integrate_adaptive: no convergence"); }
  return adapt(f, lo, mid, left, 0.5 * tol, depth - 1) + adapt(f, mid, hi, right, 0.5 * tol, depth - 1);
}

} // namespace

GaussRule const &gauss_legendre(int n)
{
  static std::mutex                lock;
  static std::map<int, GaussRule>  cache;
  std::scoped_lock                 guard(lock);
  auto                             it = cache.find(n);
  if (it == cache.end()) { it = cache.emplace(n, make_rule(n)).first; }
  return it->second;
}

GaussRule composite_gauss_legendre(double lo, double hi, int panels, int order)
{
  auto const &g = gauss_legendre(order);
  GaussRule   r{Eigen::VectorXd(panels * order), Eigen::VectorXd(panels * order)};
  double const width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double const c = lo + (p + 0.5) * width;
    r.nodes.segment(p * order, order)   = (c + 0.5 * width * g.nodes.array()).matrix();
    r.weights.segment(p * order, order) = 0.5 * width * g.weights;
  }
  return r;
}

double integrate_adaptive(std::function<double(double)> const &f, double lo, double hi, double tol, int max_depth)
{
  if (lo == hi) { return 0.0; }
  return adapt(f, lo, hi, panel(f, lo, hi), tol, max_depth);
}

} // namespace rmt
