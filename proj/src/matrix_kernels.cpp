#include "rmt/kernels.hpp"
#include "rmt/specfun.hpp"

#include <stdexcept>

namespace rmt {

namespace {

void check_beta(int beta)
{
  if (beta != 1 && beta != 4) { throw std::invalid_argument("matrix kernel: beta must be 1 or 4"); }
}

} // namespace

MatrixKernelValue matrix_kernel_bulk(int beta, double x, double y)
{
  check_beta(beta);
  double const    u = x - y;
  MatrixKernelValue k;
  if (beta == 1) {
    double const s = sinc(u);
    k << -sine_kernel_dx(x, y), s, -s, sinc_integral(u) - 0.5 * sgn(u);
  } else {
    // sin 2 pi u / (2 pi u) and its x-derivative
    double const s  = sinc(2.0 * u);
    double const ds = 2.0 * sine_kernel_dx(2.0 * u, 0.0);
    k << -ds, s, -s, 0.5 * sinc_integral(2.0 * u);
  }
  return k;
}

// K21(x, y) is taken as -K12(y, x) so that the assembled block matrix is
// skew-symmetric.
MatrixKernelValue matrix_kernel_edge(int beta, double x, double y)
{
  check_beta(beta);
  double const ax = airy(x).value;
  double const ay = airy(y).value;
  double const tx = airy_tail(x);
  double const ty = airy_tail(y);
  double const kk = airy_kernel(x, y);
  double const dy = airy_kernel_dy(x, y);
  double const f  = airy_kernel_tail(x, y);
  MatrixKernelValue k;
  if (beta == 1) {
    k(0, 0) = dy + 0.5 * ax * ay;
    k(0, 1) = kk + 0.5 * ax * (1.0 - ty);
    k(1, 0) = -kk - 0.5 * ay * (1.0 - tx);
    k(1, 1) = -f - 0.5 * (tx - ty) + 0.5 * tx * ty - 0.5 * sgn(x - y);
  } else {
    k(0, 0) = 0.5 * dy + 0.25 * ax * ay;
    k(0, 1) = 0.5 * kk - 0.25 * ax * ty;
    k(1, 0) = -0.5 * kk + 0.25 * ay * tx;
    k(1, 1) = -0.5 * f + 0.25 * tx * ty;
  }
  return k;
}

} // namespace rmt
