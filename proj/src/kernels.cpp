#include "rmt/kernels.hpp"

#include "rmt/pearcey.hpp"
#include "rmt/pfaffian.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/specfun.hpp"

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this separation the Airy kernel is summed as a Taylor series in y - x.
constexpr double kAirySeriesRadius = 0.05;
constexpr int    kAirySeriesTerms  = 40;

// d_k = Ai(x) Ai^{(k+1)}(x) - Ai'(x) Ai^{(k)}(x), k = 0..kAirySeriesTerms
std::array<double, kAirySeriesTerms + 1> airy_wronskian_series(double x)
{
  std::array<double, kAirySeriesTerms + 2> ai{};
  airy_derivatives(x, kAirySeriesTerms + 1, ai.data());
  std::array<double, kAirySeriesTerms + 1> d{};
  for (int k = 0; k <= kAirySeriesTerms; ++k) { d[k] = ai[0] * ai[k + 1] - ai[1] * ai[k]; }
  return d;
}

// K(x, x + h) and d/dh K(x, x + h) from the series
//   K(x, x + h) = -sum_{k>=1} d_k h^{k-1} / k!
std::pair<double, double> airy_kernel_series(double x, double h)
{
  auto const d = airy_wronskian_series(x);
  double     k0 = 0, k1 = 0;
  double     hp = 1.0; // h^{k-1}/k!
  double     hq = 1.0; // h^{k-2}/(k-1)!... tracked via hp
  for (int k = 1; k <= kAirySeriesTerms; ++k) {
    hp = (k == 1) ? 1.0 : hp * h / k;
    k0 -= d[k] * hp;
    if (k >= 2) {
      // d/dh of h^{k-1}/k! = (k-1) h^{k-2}/k!
      hq = (k == 2) ? 0.5 : hq * h / k;
      k1 -= d[k] * (k - 1) * hq;
    }
  }
  return {k0, k1};
}

double sinc_prime(double u) // d/du sin(pi u)/(pi u)
{
  double const a = kPi * u;
  if (std::abs(a) < 1e-3) {
    double const a2 = a * a;
    return kPi * a * (-1.0 / 3.0 + a2 / 30.0 - a2 * a2 / 840.0);
  }
  return (a * std::cos(a) - std::sin(a)) / (kPi * u * u);
}

void require_positive(double x, double y, char const *who)
{
  if (!(x > 0.0) || !(y > 0.0)) { throw std::domain_error(std::string(who) + ": arguments must be positive"); }
}

double bessel_hard_diagonal(double alpha, double x)
{
  auto const j = bessel_j(alpha, std::sqrt(x));
  return 0.25 * (j.derivative * j.derivative + j.value * j.value * (1.0 - alpha * alpha / x));
}

double bessel_origin_diagonal(double alpha, double x)
{
  double const z  = kPi * x;
  double const ja = bessel_j(alpha + 0.5, z).value;
  double const jb = bessel_j(alpha - 0.5, z).value;
  return 0.5 * kPi * kPi * x * (ja * ja + jb * jb - 2.0 * alpha / z * ja * jb);
}

} // namespace

std::string_view to_string(KernelFamily f)
{
  switch (f) {
  case KernelFamily::Sine: return "sine";
  case KernelFamily::Airy: return "airy";
  case KernelFamily::BesselHard: return "bessel-hard";
  case KernelFamily::BesselOrigin: return "bessel-origin";
  case KernelFamily::Pearcey: return "pearcey";
  case KernelFamily::SineBeta1: return "sine-beta1";
  case KernelFamily::SineBeta4: return "sine-beta4";
  case KernelFamily::AiryBeta1: return "airy-beta1";
  case KernelFamily::AiryBeta4: return "airy-beta4";
  }
  return "unknown";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name)
{
  for (auto f : {KernelFamily::Sine, KernelFamily::Airy, KernelFamily::BesselHard, KernelFamily::BesselOrigin,
                 KernelFamily::Pearcey, KernelFamily::SineBeta1, KernelFamily::SineBeta4, KernelFamily::AiryBeta1,
                 KernelFamily::AiryBeta4}) {
    if (to_string(f) == name) { return f; }
  }
  return std::nullopt;
}

KernelHandle KernelHandle::sine() { return {KernelFamily::Sine, std::nullopt, std::nullopt}; }
KernelHandle KernelHandle::airy() { return {KernelFamily::Airy, std::nullopt, std::nullopt}; }

KernelHandle KernelHandle::bessel_hard(double alpha)
{
  if (!(alpha > -1.0)) { throw std::domain_error("bessel_hard: alpha must exceed -1"); }
  return {KernelFamily::BesselHard, alpha, std::nullopt};
}

KernelHandle KernelHandle::bessel_origin(double alpha)
{
  if (!(alpha > -0.5)) { throw std::domain_error("bessel_origin: alpha must exceed -1/2"); }
  return {KernelFamily::BesselOrigin, alpha, std::nullopt};
}

KernelHandle KernelHandle::pearcey(double s) { return {KernelFamily::Pearcey, std::nullopt, s}; }

KernelHandle KernelHandle::sine_beta(int beta)
{
  if (beta != 1 && beta != 4) { throw std::invalid_argument("sine_beta: beta must be 1 or 4"); }
  return {beta == 1 ? KernelFamily::SineBeta1 : KernelFamily::SineBeta4, std::nullopt, std::nullopt};
}

KernelHandle KernelHandle::airy_beta(int beta)
{
  if (beta != 1 && beta != 4) { throw std::invalid_argument("airy_beta: beta must be 1 or 4"); }
  return {beta == 1 ? KernelFamily::AiryBeta1 : KernelFamily::AiryBeta4, std::nullopt, std::nullopt};
}

KernelArity KernelHandle::arity() const
{
  switch (family_) {
  case KernelFamily::Sine:
  case KernelFamily::Airy:
  case KernelFamily::BesselHard:
  case KernelFamily::BesselOrigin:
  case KernelFamily::Pearcey: return KernelArity::Scalar;
  default: return KernelArity::Matrix2x2;
  }
}

double KernelHandle::operator()(double x, double y) const
{
  switch (family_) {
  case KernelFamily::Sine: return sine_kernel(x, y);
  case KernelFamily::Airy: return airy_kernel(x, y);
  case KernelFamily::BesselHard: return bessel_hard_kernel(*alpha_, x, y);
  case KernelFamily::BesselOrigin: return bessel_origin_kernel(*alpha_, x, y);
  case KernelFamily::Pearcey: return pearcey_kernel(x, y, *s_);
  default: throw std::logic_error("KernelHandle: matrix kernel evaluated as scalar");
  }
}

Eigen::Matrix2d KernelHandle::matrix(double x, double y) const
{
  switch (family_) {
  case KernelFamily::SineBeta1: return matrix_kernel_bulk(1, x, y);
  case KernelFamily::SineBeta4: return matrix_kernel_bulk(4, x, y);
  case KernelFamily::AiryBeta1: return matrix_kernel_edge(1, x, y);
  case KernelFamily::AiryBeta4: return matrix_kernel_edge(4, x, y);
  default: throw std::logic_error("KernelHandle: scalar kernel evaluated as matrix");
  }
}

double sine_kernel(double x, double y) { return sinc(x - y); }

double sine_kernel_dx(double x, double y) { return sinc_prime(x - y); }

double airy_kernel(double x, double y)
{
  double const h = y - x;
  if (std::abs(h) < kAirySeriesRadius) {
    // expand around the point nearer the origin so both orders agree
    return std::abs(x) <= std::abs(y) ? airy_kernel_series(x, h).first : airy_kernel_series(y, -h).first;
  }
  auto const ax = airy(x);
  auto const ay = airy(y);
  return (ax.value * ay.derivative - ax.derivative * ay.value) / (x - y);
}

double airy_kernel_dy(double x, double y)
{
  double const h = y - x;
  if (std::abs(h) < kAirySeriesRadius) { return airy_kernel_series(x, h).second; }
  auto const   ax = airy(x);
  auto const   ay = airy(y);
  double const n  = ax.value * ay.derivative - ax.derivative * ay.value;
  double const dn = ax.value * y * ay.value - ax.derivative * ay.derivative;
  return dn / (x - y) + n / ((x - y) * (x - y));
}

double airy_kernel_tail(double x, double y)
{
  constexpr double kPanel = 0.5;
  constexpr int    kOrder = 20;
  auto const      &g      = gauss_legendre(kOrder);
  auto const       ay     = airy(y);
  double const     past   = std::max({x, y, 0.0});
  double           sum    = 0.0;
  for (double lo = x;; lo += kPanel) {
    double const c = lo + 0.5 * kPanel;
    double       s = 0.0, peak = 0.0;
    for (int i = 0; i < kOrder; ++i) {
      double const t = c + 0.5 * kPanel * g.nodes[i];
      double       k;
      if (std::abs(t - y) < kAirySeriesRadius) {
        k = airy_kernel(t, y);
      } else {
        auto const at = airy(t);
        k             = (at.value * ay.derivative - at.derivative * ay.value) / (t - y);
      }
      s += g.weights[i] * k;
      peak = std::max(peak, std::abs(k));
    }
    sum += 0.5 * kPanel * s;
    if (lo > past && peak < 1e-17) { break; }
    if (lo > past + 40.0) { throw std::runtime_error("airy_kernel_tail: no convergence"); }
  }
  return sum;
}

double bessel_hard_kernel(double alpha, double x, double y)
{
  require_positive(x, y, "bessel_hard_kernel");
  if (std::abs(x - y) < 1e-5 * (1.0 + x)) { return bessel_hard_diagonal(alpha, 0.5 * (x + y)); }
  double const u  = std::sqrt(x);
  double const v  = std::sqrt(y);
  auto const   ju = bessel_j(alpha, u);
  auto const   jv = bessel_j(alpha, v);
  return (ju.value * v * jv.derivative - u * ju.derivative * jv.value) / (2.0 * (x - y));
}

double bessel_origin_kernel(double alpha, double x, double y)
{
  require_positive(x, y, "bessel_origin_kernel");
  if (!(alpha > -0.5)) { throw std::domain_error("bessel_origin_kernel: alpha must exceed -1/2"); }
  if (std::abs(x - y) < 1e-5 * (1.0 + x)) { return bessel_origin_diagonal(alpha, 0.5 * (x + y)); }
  double const ax = bessel_j(alpha + 0.5, kPi * x).value;
  double const bx = bessel_j(alpha - 0.5, kPi * x).value;
  double const ay = bessel_j(alpha + 0.5, kPi * y).value;
  double const by = bessel_j(alpha - 0.5, kPi * y).value;
  return kPi * std::sqrt(x * y) * (ax * by - bx * ay) / (2.0 * (x - y));
}

double correlation_det(KernelHandle const &kernel, std::span<double const> points)
{
  if (kernel.arity() != KernelArity::Scalar) { throw std::invalid_argument("correlation_det: scalar kernel required"); }
  auto const k = static_cast<Eigen::Index>(points.size());
  if (k < 1 || k > 12) { throw std::invalid_argument("correlation_det: need 1 <= k <= 12 points"); }
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) { m(i, j) = kernel(points[i], points[j]); }
  }
  return m.partialPivLu().determinant();
}

Eigen::MatrixXd assemble_matrix_kernel(KernelHandle const &kernel, std::span<double const> points)
{
  if (kernel.arity() != KernelArity::Matrix2x2) { throw std::invalid_argument("assemble: matrix kernel required"); }
  auto const      k = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) { m.block<2, 2>(2 * i, 2 * j) = kernel.matrix(points[i], points[j]); }
  }
  return m;
}

double correlation_pfaffian(KernelHandle const &kernel, std::span<double const> points)
{
  if (points.empty() || points.size() > 8) { throw std::invalid_argument("correlation_pfaffian: need 1 <= k <= 8"); }
  Eigen::MatrixXd const m = assemble_matrix_kernel(kernel, points);
  if (skew_defect(m) > 1e-8) { throw std::runtime_error("correlation_pfaffian: assembled matrix is not skew-symmetric"); }
  return pfaffian(m);
}

} // namespace rmt
