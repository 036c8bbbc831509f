#pragma once

#include <Eigen/Core>

#include <functional>

namespace rmt {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule
{
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Rules are computed once per size and cached; the reference stays valid.
GaussRule const &gauss_legendre(int n);

// Composite Gauss-Legendre on [lo, hi] with `panels` equal panels of `order` points.
GaussRule composite_gauss_legendre(double lo, double hi, int panels, int order = 16);

// Adaptive Gauss-Kronrod-free scheme: recursive bisection comparing 16-pt and
// 2x16-pt panel sums. Returns the integral; throws std::runtime_error when the
// recursion depth is exhausted without meeting tol.
double integrate_adaptive(std::function<double(double)> const &f, double lo, double hi, double tol = 1e-13,
                          int max_depth = 30);

} // namespace rmt
