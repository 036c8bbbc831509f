#include "doctest.h"
#include "rmt/kernels.hpp"
#include "rmt/pearcey.hpp"
#include "rmt/pfaffian.hpp"
#include "rmt/specfun.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace rmt;

namespace {

constexpr double kPi = std::numbers::pi;

double near(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("sine kernel values")
{
  CHECK(sine_kernel(0.7, 0.7) == 1.0);
  CHECK(sine_kernel(0.0, 0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
  CHECK(std::abs(sine_kernel(0.0, 1.0)) < 1e-15);
  CHECK(sine_kernel_dx(1.0, 1.0) == 0.0);
  // derivative against a central difference
  for (double u : {1e-5, 1e-3, 0.2, 1.7}) {
    double const h  = 1e-6;
    double const fd = (sine_kernel(u + h, 0) - sine_kernel(u - h, 0)) / (2 * h);
    CHECK(std::abs(sine_kernel_dx(u, 0) - fd) < 1e-8);
  }
}

TEST_CASE("airy kernel against quadrature-free references")
{
  // mpmath, 30 digits
  CHECK(near(airy_kernel(0.5, -1), 0.078732763397670285) < 1e-13);
  CHECK(near(airy_kernel(-3, 2.5), -0.0009085615830167395) < 1e-13);
  CHECK(near(airy_kernel(1, 1.02), 0.0068427259174539537) < 1e-13);
  CHECK(near(airy_kernel(-10, -10.01), 1.0085768396488399) < 1e-13);
  CHECK(airy_kernel(0, 0) == doctest::Approx(0.066987483779663974).epsilon(1e-14));
  CHECK(airy_kernel(4, 4) == doctest::Approx(2.1437932013787153e-7).epsilon(1e-10));
  CHECK(airy_kernel(5, 5) < 1e-6);
  CHECK(airy_kernel(1.3, -0.7) == airy_kernel(-0.7, 1.3));

  CHECK(near(airy_kernel_dy(0.5, -1), -0.031758991803183656) < 1e-12);
  CHECK(near(airy_kernel_dy(-3, 2.5), 0.0013715403410891839) < 1e-12);
  CHECK(near(airy_kernel_dy(1, 1.02), -0.0089627842649122512) < 1e-12);
  // (d/dx + d/dy) K = -Ai(x) Ai(y) on the diagonal gives d_y K(x, x) = -Ai(x)^2 / 2
  for (double x : {-7.0, 0.0, 2.0}) {
    double const a = airy(x).value;
    CHECK(airy_kernel_dy(x, x) == doctest::Approx(-0.5 * a * a).epsilon(1e-12));
  }

  CHECK(near(airy_kernel_tail(0.5, -1), 0.05691463163288277) < 1e-11);
  CHECK(near(airy_kernel_tail(-2, 1), 0.094501446136656016) < 1e-11);
  CHECK(near(airy_kernel_tail(1, 1), 0.0047060512952363811) < 1e-11);
  CHECK(near(airy_kernel_tail(-5, -4), 0.83518135024932051) < 1e-11);
  // F(x, x) = tail(x)^2 / 2
  for (double x : {-6.0, 0.0, 1.5}) {
    double const t = airy_tail(x);
    CHECK(airy_kernel_tail(x, x) == doctest::Approx(0.5 * t * t).epsilon(1e-10));
  }
}

TEST_CASE("bessel kernels")
{
  CHECK(near(bessel_hard_kernel(0.5, 1, 2), 0.093178733578871344) < 1e-12);
  CHECK(near(bessel_hard_kernel(0, 0.3, 7), 0.085009359904598229) < 1e-12);
  CHECK(near(bessel_hard_kernel(2.5, 10, 11), 0.021442622657296221) < 1e-12);
  CHECK(near(bessel_hard_kernel(2, 3, 3), 0.008016618208199092) < 1e-12);
  CHECK(bessel_hard_kernel(0.5, 1.0, 2.5) == bessel_hard_kernel(0.5, 2.5, 1.0));
  CHECK(bessel_hard_kernel(8, 0.01, 0.01) < bessel_hard_kernel(0, 0.01, 0.01));

  // first zero of J0 by bisection on bessel_j itself
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 80; ++i) {
    double const mid = 0.5 * (lo + hi);
    (bessel_j(0, mid).value > 0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(2.404825557695773).epsilon(1e-14));
  double const jp = bessel_j(0, lo).derivative;
  CHECK(bessel_hard_kernel(0, lo * lo, lo * lo) == doctest::Approx(jp * jp / 4).epsilon(1e-12));

  CHECK(near(bessel_origin_kernel(1, 0.5, 1.5), 0.13509491152311703) < 1e-12);
  CHECK(near(bessel_origin_kernel(0.3, 2, 3.7), -0.15101876169658084) < 1e-12);
  CHECK(near(bessel_origin_kernel(1, 0.8, 0.8), 0.94530373749478873) < 1e-12);
  CHECK(bessel_origin_kernel(1, 0.4, 2.2) == bessel_origin_kernel(1, 2.2, 0.4));
  CHECK(bessel_origin_kernel(1, 0.05, 0.05) < 1.0);

  double worst = 0;
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      double const x = 0.37 * i, y = 0.41 * j;
      worst          = std::max(worst, std::abs(bessel_origin_kernel(0, x, y) - sine_kernel(x, y)));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(std::abs(bessel_origin_kernel(0, 0.3, 1.1) - sine_kernel(0.3, 1.1)) <= 1e-12);

  CHECK_THROWS_AS(bessel_hard_kernel(0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_origin_kernel(0, 1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(KernelHandle::bessel_hard(-1.0), std::domain_error);
  CHECK_THROWS_AS(KernelHandle::bessel_origin(-0.5), std::domain_error);
}

TEST_CASE("scalar kernels are symmetric and continuous at the diagonal switch")
{
  std::mt19937_64                        rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0), pos(0.05, 30.0);
  for (int i = 0; i < 200; ++i) {
    double const x = u(rng), y = u(rng);
    CHECK(std::abs(sine_kernel(x, y) - sine_kernel(y, x)) <= 1e-10);
    CHECK(std::abs(airy_kernel(x, y) - airy_kernel(y, x)) <= 1e-10);
    double const p = pos(rng), q = pos(rng);
    CHECK(std::abs(bessel_hard_kernel(1.5, p, q) - bessel_hard_kernel(1.5, q, p)) <= 1e-10);
    CHECK(std::abs(bessel_origin_kernel(0.7, p, q) - bessel_origin_kernel(0.7, q, p)) <= 1e-10);
  }
  double const eps = 1e-4;
  for (double x : {0.3, 1.0, 4.0, 12.0}) {
    CHECK(std::abs(sine_kernel(x, x + eps) - sine_kernel(x, x)) <= 10 * eps);
    CHECK(std::abs(airy_kernel(-x, -x + eps) - airy_kernel(-x, -x)) <= 10 * eps);
    CHECK(std::abs(bessel_hard_kernel(0.5, x, x + eps) - bessel_hard_kernel(0.5, x, x)) <= 10 * eps);
    CHECK(std::abs(bessel_origin_kernel(0.5, x, x + eps) - bessel_origin_kernel(0.5, x, x)) <= 10 * eps);
    // across the series radius of the Airy kernel
    for (double h : {0.05 - 1e-9, 0.05 + 1e-9}) {
      double const a = airy_kernel(-x, -x + h);
      double const b = airy_kernel(-x, -x + h + 1e-9);
      CHECK(std::abs(b - a - 1e-9 * airy_kernel_dy(-x, -x + h)) < 1e-13);
    }
  }
}

TEST_CASE("correlation determinants")
{
  auto const   sine = KernelHandle::sine();
  double const one[] = {0.0};
  CHECK(correlation_det(sine, one) == doctest::Approx(1.0));
  double const two[] = {0.0, 0.5};
  CHECK(correlation_det(sine, two) == doctest::Approx(1 - 4 / (kPi * kPi)).epsilon(1e-14));
  double const close[] = {0.0, 1e-6};
  CHECK(correlation_det(sine, close) < 1e-10);

  std::mt19937_64                        rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  auto const                             airy = KernelHandle::airy();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pts(1 + trial % 4);
    for (auto &p : pts) { p = u(rng); }
    CHECK(correlation_det(sine, pts) >= -1e-10);
    CHECK(correlation_det(airy, pts) >= -1e-10);
  }
  std::vector<double> many(13, 0.0);
  CHECK_THROWS_AS(correlation_det(sine, many), std::invalid_argument);
  CHECK_THROWS_AS(correlation_det(KernelHandle::sine_beta(1), one), std::invalid_argument);
}

TEST_CASE("pfaffian")
{
  Eigen::Matrix2d a;
  a << 0, 3.5, -3.5, 0;
  CHECK(pfaffian(a) == 3.5);

  std::mt19937_64                        rng(3);
  std::normal_distribution<double>       g;
  for (int n : {4, 6, 8, 10, 14}) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = 0;
      for (int j = i + 1; j < n; ++j) {
        m(i, j) = g(rng);
        m(j, i) = -m(i, j);
      }
    }
    double const pf  = pfaffian(m);
    double const det = m.determinant();
    CAPTURE(n);
    CHECK(std::abs(pf * pf - det) <= 1e-10 * std::max(1.0, std::abs(det)));
    CHECK(std::abs(pfaffian_parlett_reid(m) - pf) <= 1e-10 * std::max(1.0, std::abs(pf)));
  }
}

TEST_CASE("bulk matrix kernels")
{
  for (int beta : {1, 4}) {
    auto const k = matrix_kernel_bulk(beta, 0.4, 0.4);
    CHECK(k(0, 1) == doctest::Approx(1.0));
    CHECK(k(1, 1) == 0.0);
    CHECK(k(0, 0) == 0.0);
    auto const a = matrix_kernel_bulk(beta, 0.2, 1.9);
    auto const b = matrix_kernel_bulk(beta, 1.9, 0.2);
    CHECK((a + b.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
  double const pts[] = {0.0, 0.7};
  auto const   m     = assemble_matrix_kernel(KernelHandle::sine_beta(1), pts);
  double const pf    = correlation_pfaffian(KernelHandle::sine_beta(1), pts);
  CHECK(std::abs(pf * pf - m.determinant()) < 1e-8);
  double const zero[] = {0.0};
  CHECK(correlation_pfaffian(KernelHandle::sine_beta(4), zero) == doctest::Approx(1.0));
}

TEST_CASE("edge matrix kernels")
{
  for (int beta : {1, 4}) {
    // K21(x, y) = -K12(y, x) makes the block matrix skew
    auto const a = matrix_kernel_edge(beta, 0.5, -1.0);
    auto const b = matrix_kernel_edge(beta, -1.0, 0.5);
    CHECK((a + b.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    auto const d = matrix_kernel_edge(beta, 1.2, 1.2);
    CHECK(std::abs(d(0, 0)) < 1e-12);
    CHECK(std::abs(d(1, 1)) < 1e-10);
    CHECK(d(1, 0) == doctest::Approx(-d(0, 1)).epsilon(1e-12));
  }
  auto const far = matrix_kernel_edge(1, 8.0, 9.0);
  CHECK(std::abs(far(0, 0)) < 1e-6);
  CHECK(std::abs(far(0, 1)) < 1e-6);
  CHECK(std::abs(far(1, 0)) < 1e-6);
  CHECK(std::abs(far(1, 1) - 0.5) < 1e-6);

  // beta = 4 K11 on the diagonal against a finite difference of the Airy kernel
  double const h  = 1e-4;
  double const fd = (airy_kernel(0, h) - airy_kernel(0, -h)) / (2 * h);
  double const a0 = airy(0.0).value;
  auto const   k  = matrix_kernel_edge(4, 0.0, 0.0);
  CHECK(std::abs(k(0, 0) - (0.5 * fd + 0.25 * a0 * a0)) < 1e-8);

  std::mt19937_64                        rng(5);
  std::uniform_real_distribution<double> u(-6.0, 4.0);
  for (int beta : {1, 4}) {
    std::vector<double> pts(3);
    for (auto &p : pts) { p = u(rng); }
    auto const m = assemble_matrix_kernel(KernelHandle::airy_beta(beta), pts);
    CHECK(skew_defect(m) < 1e-8);
    double const pf = correlation_pfaffian(KernelHandle::airy_beta(beta), pts);
    CHECK(std::abs(pf * pf - m.determinant()) < 1e-8);
  }
}

TEST_CASE("kernel handles")
{
  auto const p = KernelHandle::pearcey(0.5);
  CHECK(p.arity() == KernelArity::Scalar);
  CHECK(p.s().value() == 0.5);
  CHECK_FALSE(p.alpha().has_value());
  CHECK(KernelHandle::airy_beta(4).arity() == KernelArity::Matrix2x2);
  CHECK(parse_kernel_family("bessel-hard") == KernelFamily::BesselHard);
  CHECK_FALSE(parse_kernel_family("nope").has_value());
  CHECK_THROWS_AS(KernelHandle::sine_beta(2), std::invalid_argument);
  CHECK_THROWS_AS(KernelHandle::sine()(0, 0) + KernelHandle::sine_beta(1)(0, 0), std::logic_error);
}

TEST_CASE("pearcey kernel")
{
  double const k0 = pearcey_kernel(0, 0, 0);
  double const k1 = pearcey_kernel(0, 0, 0, PearceyContour::Hyperbolic);
  CHECK(std::abs(k0 - k1) < 1e-8);
  CHECK(k0 > 0);
  // the one-point density grows like sqrt(3)/(2 pi) |x|^{1/3} away from the cusp
  double const far = pearcey_kernel(15, 15, 0);
  CHECK(far > k0);
  CHECK(std::abs(far / (std::sqrt(3.0) / (2 * kPi) * std::cbrt(15.0)) - 1) < 0.02);

  // saddle-point contours agree with the double integral where both are well conditioned,
  // and the public entry point stays finite at the corners of its domain
  for (auto [x, y, s] : {std::array{0.0, 0.0, 0.0}, std::array{0.1, 0.05, -1.0}, std::array{5.0, 5.0, 0.0},
                         std::array{3.0, -4.0, -6.0}, std::array{1.0, -1.0, 1.0}}) {
    CHECK(std::abs(pearcey_kernel_saddle(x, y, s) - pearcey_kernel(x, y, s, PearceyContour::Hyperbolic)) < 1e-9);
  }
  for (double s : {-10.0, 10.0}) {
    for (double x : {-20.0, 20.0}) {
      for (double y : {-20.0, 20.0}) { CHECK(std::isfinite(pearcey_kernel(x, y, s))); }
    }
  }
  CHECK(pearcey_kernel(20, 20, -10) == doctest::Approx(pearcey_kernel(-20, -20, -10)).epsilon(1e-9));

  // off the diagonal the single-integral form agrees with the double integral
  for (auto [x, y, s] : {std::array{0.5, -0.7, 0.0}, std::array{1.5, 2.0, -1.0}, std::array{-2.0, 1.0, 2.0}}) {
    CAPTURE(x);
    CAPTURE(y);
    CHECK(std::abs(pearcey_kernel(x, y, s) - pearcey_kernel_pq(x, y, s)) < 1e-8);
  }

  // contour-defined p solves p''' = s p' - x p; q solves q''' = y q + s q'
  for (double s : {-2.0, 0.0, 1.5}) {
    for (double x : {-3.0, 0.0, 2.5}) {
      auto const p = pearcey_p(x, s);
      CHECK(std::abs(p[3] - (s * p[1] - x * p[0])) < 1e-10);
      auto const q = pearcey_q(x, s);
      CHECK(std::abs(q[3] - (x * q[0] + s * q[1])) < 1e-10);
      // and p' from the integral matches a finite difference
      double const h = 1e-4;
      CHECK(std::abs((pearcey_p(x + h, s)[0] - pearcey_p(x - h, s)[0]) / (2 * h) - p[1]) < 1e-7);
    }
  }
}
