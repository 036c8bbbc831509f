#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace rmt {

enum class KernelFamily
{
  Sine,
  Airy,
  BesselHard,
  BesselOrigin,
  Pearcey,
  SineBeta1,
  SineBeta4,
  AiryBeta1,
  AiryBeta4,
};

enum class KernelArity
{
  Scalar,
  Matrix2x2,
};

std::string_view     to_string(KernelFamily f);
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

/// A named universal kernel with its parameters. Construct through the named
/// factories so that parameter presence matches the family.
class KernelHandle
{
public:
  static KernelHandle sine();
  static KernelHandle airy();
  static KernelHandle bessel_hard(double alpha);   // alpha > -1
  static KernelHandle bessel_origin(double alpha); // alpha > -1/2
  static KernelHandle pearcey(double s);
  static KernelHandle sine_beta(int beta); // beta in {1, 4}
  static KernelHandle airy_beta(int beta); // beta in {1, 4}

  KernelFamily          family() const { return family_; }
  KernelArity           arity() const;
  std::optional<double> alpha() const { return alpha_; }
  std::optional<double> s() const { return s_; }

  // Scalar families only.
  double operator()(double x, double y) const;
  // Matrix families only.
  Eigen::Matrix2d matrix(double x, double y) const;

private:
  KernelHandle(KernelFamily f, std::optional<double> alpha, std::optional<double> s)
    : family_(f), alpha_(alpha), s_(s)
  {
  }

  KernelFamily          family_;
  std::optional<double> alpha_;
  std::optional<double> s_;
};

// 2x2 value of a matrix kernel at (x, y); K(y, x) = -K(x, y)^T.
using MatrixKernelValue = Eigen::Matrix2d;

double sine_kernel(double x, double y);
// d/dx of sin(pi(x-y))/(pi(x-y)).
double sine_kernel_dx(double x, double y);

double airy_kernel(double x, double y);
// d/dy of the Airy kernel.
double airy_kernel_dy(double x, double y);
// \int_x^\infty K^Ai(t, y) dt
double airy_kernel_tail(double x, double y);

double bessel_hard_kernel(double alpha, double x, double y);
double bessel_origin_kernel(double alpha, double x, double y);

// sgn with sgn(0) = 0.
inline double sgn(double t) { return (t > 0) - (t < 0); }

MatrixKernelValue matrix_kernel_bulk(int beta, double x, double y);
MatrixKernelValue matrix_kernel_edge(int beta, double x, double y);

// det [K(x_i, x_j)] for a scalar kernel, 1 <= k <= 12.
double correlation_det(KernelHandle const &kernel, std::span<double const> points);

// Block matrix [K(x_i, x_j)] of size 2k x 2k for a matrix kernel.
Eigen::MatrixXd assemble_matrix_kernel(KernelHandle const &kernel, std::span<double const> points);

// Pf [K(x_i, x_j)] for a matrix kernel, 1 <= k <= 8. Throws
// std::runtime_error when the assembled matrix is not skew-symmetric to 1e-8.
double correlation_pfaffian(KernelHandle const &kernel, std::span<double const> points);

} // namespace rmt
