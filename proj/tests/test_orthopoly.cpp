#include "doctest.h"
#include "rmt/kernels.hpp"
#include "rmt/orthopoly.hpp"
#include "rmt/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace rmt;

namespace {

constexpr double kPi = std::numbers::pi;

Potential const kGaussian{{0, 0, 0.5}};
Potential const kQuartic{{0, 0, 0.5, 0, 1.0 / 12}};

WeightSpec gaussian_weight(int N, double alpha = 0.0)
{
  Potential V         = kGaussian;
  V.singularity_alpha = alpha;
  return WeightSpec{V, N};
}

double sup_density_error(int n)
{
  auto const   w  = gaussian_weight(n);
  auto const   t  = recurrence_table(w, n);
  double       worst = 0.0;
  for (int i = 0; i <= 360; ++i) {
    double const x   = -1.8 + 3.6 * i / 360;
    double const rho = std::sqrt(4 - x * x) / (2 * kPi);
    worst            = std::max(worst, std::abs(cd_kernel(t, w, n, x, x) / n - rho));
  }
  return worst;
}

} // namespace

TEST_CASE("Hermite recurrence")
{
  auto const w = gaussian_weight(16);
  auto const t = recurrence_table(w, 40);
  CHECK(t.truncation > 0);
  for (int k = 0; k <= 30; ++k) {
    CHECK(std::abs(t.b[k]) <= 1e-12);
    if (k > 0) { CHECK(std::abs(t.a[k] - k / 16.0) <= 1e-11); }
  }
  CHECK(std::abs(t.gamma_sq[0] - std::sqrt(2 * kPi / 16)) <= 1e-11);
  // gamma_k^2 = gamma_0^2 k! / N^k
  double g = t.gamma_sq[0];
  for (int k = 1; k <= 20; ++k) {
    g *= k / 16.0;
    CHECK(std::abs(t.gamma_sq[k] / g - 1) <= 1e-11);
  }
}

TEST_CASE("Laguerre recurrence at a hard edge")
{
  WeightSpec const w{Potential{{0, 1.0}, true}, 8};
  auto const       t = recurrence_table(w, 24);
  for (int k = 0; k <= 20; ++k) {
    CHECK(std::abs(t.b[k] - (2 * k + 1) / 8.0) <= 1e-10);
    if (k > 0) { CHECK(std::abs(t.a[k] - k * k / 64.0) <= 1e-10); }
  }
}

TEST_CASE("generalized Laguerre recurrence")
{
  // x^alpha e^{-x}: b_k = 2k + alpha + 1, a_k = k (k + alpha)
  double const     alpha = -0.5;
  WeightSpec const w{Potential{{0, 1.0}, true, alpha}, 1};
  auto const       t = recurrence_table(w, 20);
  for (int k = 0; k <= 15; ++k) {
    CHECK(std::abs(t.b[k] - (2 * k + alpha + 1)) <= 1e-9 * (2 * k + 1));
    if (k > 0) { CHECK(std::abs(t.a[k] / (k * (k + alpha)) - 1) <= 1e-9); }
  }
  CHECK(std::abs(t.gamma_sq[0] - std::tgamma(alpha + 1)) <= 1e-10);
}

TEST_CASE("large tables stay finite")
{
  auto const w = gaussian_weight(512);
  auto const t = recurrence_table(w, 512);
  CHECK(std::abs(t.a[512] - 1.0) <= 1e-10);
  auto const phi = weighted_polys(t, w, 1.9, 512);
  for (double v : phi) { CHECK(std::isfinite(v)); }
  CHECK(std::abs(cd_kernel(t, w, 512, 0.0, 0.0) / 512 - 1 / kPi) <= 1e-3);
}

TEST_CASE("weighted polynomials")
{
  auto const w   = gaussian_weight(4);
  auto const t   = recurrence_table(w, 30);
  auto const phi = weighted_polys(t, w, 0.3, 24);
  CHECK(std::abs(phi[0] - std::exp(-4 * 0.045 / 2) / std::sqrt(t.gamma_sq[0])) <= 1e-14);
  double s = 0.0;
  for (double v : phi) { s += v * v; }
  CHECK(std::abs(s - cd_kernel(t, w, 24, 0.3, 0.3)) <= 1e-9);

  auto const q = composite_gauss_legendre(-t.truncation, t.truncation, 64, 32);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(11, 11);
  for (Eigen::Index i = 0; i < q.nodes.size(); ++i) {
    auto const f = weighted_polys(t, w, q.nodes(i), 11);
    for (int j = 0; j < 11; ++j) {
      for (int k = 0; k < 11; ++k) { gram(j, k) += q.weights(i) * f[j] * f[k]; }
    }
  }
  CHECK((gram - Eigen::MatrixXd::Identity(11, 11)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("Christoffel-Darboux kernel")
{
  WeightSpec const weights[] = {gaussian_weight(10), WeightSpec{kQuartic, 20}, gaussian_weight(12, 1.0),
                                WeightSpec{Potential{{0, 1.0}, true}, 8}};
  for (auto const &w : weights) {
    auto const t  = recurrence_table(w, 30);
    double const lo = w.potential.hard_edge ? 0.05 : -1.6;
    for (int n : {1, 7, 30}) {
      double worst = 0.0;
      for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) {
          double const x = lo + 0.27 * i, y = lo + 0.27 * j + 0.01 * (i == j ? 0 : 1);
          worst = std::max(worst, std::abs(cd_kernel(t, w, n, x, y) - cd_kernel_sum(t, w, n, x, y)));
        }
      }
      CHECK(worst <= 1e-10);
    }
    auto const phi = weighted_polys(t, w, 0.7, 1);
    auto const psi = weighted_polys(t, w, 0.2, 1);
    CHECK(std::abs(cd_kernel(t, w, 1, 0.7, 0.2) - phi[0] * psi[0]) <= 1e-15);
  }
}

TEST_CASE("kernel is a rank-n projection")
{
  auto const w = gaussian_weight(16);
  auto const t = recurrence_table(w, 20);
  auto const q = composite_gauss_legendre(-t.truncation, t.truncation, 64, 32);
  double     trace = 0.0, reproduced = 0.0;
  for (Eigen::Index i = 0; i < q.nodes.size(); ++i) {
    double const s = q.nodes(i);
    trace += q.weights(i) * cd_kernel(t, w, 16, s, s);
    reproduced += q.weights(i) * cd_kernel(t, w, 12, 0.1, s) * cd_kernel(t, w, 12, s, -0.4);
  }
  CHECK(std::abs(trace - 16) <= 1e-8);
  CHECK(std::abs(reproduced - cd_kernel(t, w, 12, 0.1, -0.4)) <= 1e-8);
}

TEST_CASE("diagonal matches the nearby off-diagonal values")
{
  auto const w = gaussian_weight(24);
  auto const t = recurrence_table(w, 24);
  double const d = cd_kernel(t, w, 24, 0.4, 0.4);
  CHECK(std::abs(cd_kernel(t, w, 24, 0.4, 0.4 + 2e-7) - d) <= 1e-8 * d);
  CHECK(std::abs(cd_kernel(t, w, 24, 0.4, 0.4 + 5e-8) - d) <= 1e-8 * d);
}

TEST_CASE("density converges to the semicircle")
{
  double const e64  = sup_density_error(64);
  double const e128 = sup_density_error(128);
  CHECK(e128 / e64 <= 0.7);
}

TEST_CASE("spectral singularity leaves the global density unchanged")
{
  auto const w0 = gaussian_weight(128);
  auto const w1 = gaussian_weight(128, 1.0);
  auto const t0 = recurrence_table(w0, 128);
  auto const t1 = recurrence_table(w1, 128);
  double     s0 = 0.0, s1 = 0.0;
  for (int i = 0; i < 41; ++i) {
    double const x = 0.9 + 0.2 * i / 40;
    s0 += cd_kernel(t0, w0, 128, x, x) / 128 / 41;
    s1 += cd_kernel(t1, w1, 128, x, x) / 128 / 41;
  }
  CHECK(std::abs(s0 - s1) <= 2e-2);
  CHECK(std::abs(s0 - std::sqrt(3.0) / (2 * kPi)) <= 2e-2);
}

TEST_CASE("kernel matrices are positive semidefinite")
{
  auto const   w = WeightSpec{kQuartic, 12};
  auto const   t = recurrence_table(w, 12);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pick(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    for (int k = 1; k <= 5; ++k) {
      Eigen::MatrixXd m(k, k);
      std::vector<double> x(k);
      for (auto &xi : x) { xi = pick(rng); }
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) { m(i, j) = cd_kernel(t, w, 12, x[i], x[j]); }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("single particle density is Gaussian")
{
  auto const w = gaussian_weight(1);
  auto const t = recurrence_table(w, 2);
  for (double x : {-2.0, -0.5, 0.0, 1.3, 3.0}) {
    CHECK(std::abs(cd_kernel(t, w, 1, x, x) - std::exp(-x * x / 2) / std::sqrt(2 * kPi)) <= 1e-10);
  }
}

TEST_CASE("rescaled kernels")
{
  auto const w = gaussian_weight(64);
  auto const t = recurrence_table(w, 64);

  ScalingWindow bulk{0.0, 1 / kPi, 1.0, false, {0.0}, {0.0}};
  CHECK(std::abs(rescaled_kernel(t, w, 64, bulk)[0] - 1) <= 0.03);

  ScalingWindow raw{0.0, 1.0 / 64, 1.0, false, {0.3, -0.2}, {0.1}};
  auto const    g = rescaled_kernel(t, w, 64, raw);
  CHECK(g[0] == doctest::Approx(cd_kernel(t, w, 64, 0.3, 0.1)).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(cd_kernel(t, w, 64, -0.2, 0.1)).epsilon(1e-14));

  ScalingWindow outside{0.0, 1.0 / 64, 1.0, false, {100.0}, {0.0}};
  CHECK_THROWS_AS(rescaled_kernel(t, w, 64, outside), std::out_of_range);
  ScalingWindow odd{0.0, 1.0, 0.5, false, {0.0}, {0.0}};
  CHECK_THROWS_AS(rescaled_kernel(t, w, 64, odd), std::invalid_argument);

  // soft edges on both sides; the Gaussian constant is 1
  auto const mu = solve_equilibrium(kGaussian);
  CHECK(soft_edge_constant(mu) == doctest::Approx(1.0).epsilon(1e-10));
  ScalingWindow right{2.0, soft_edge_constant(mu), 2.0 / 3, false, {0.5}, {0.5}};
  ScalingWindow left{-2.0, soft_edge_constant(mu, false), 2.0 / 3, true, {0.5}, {0.5}};
  double const  ka = airy_kernel(0.5, 0.5);
  CHECK(std::abs(rescaled_kernel(t, w, 64, right)[0] - ka) <= 0.05 * ka);
  CHECK(std::abs(rescaled_kernel(t, w, 64, left)[0] - ka) <= 0.05 * ka);
}

TEST_CASE("hard edge Bessel limit")
{
  Potential const V{{0, 1.0}, true};
  WeightSpec const w{V, 128};
  auto const       t  = recurrence_table(w, 128);
  auto const       mu = solve_equilibrium(V);
  double const     c  = hard_edge_constant(mu);
  CHECK(c == doctest::Approx(2.0).epsilon(1e-10));
  ScalingWindow hard{0.0, c, 2.0, false, {1.0}, {1.0}};
  CHECK(std::abs(rescaled_kernel(t, w, 128, hard)[0] - bessel_hard_kernel(0.0, 1.0, 1.0)) <= 0.05);
}

TEST_CASE("argument checks")
{
  auto const w = gaussian_weight(4);
  CHECK_THROWS_AS(recurrence_table(w, 513), std::invalid_argument);
  auto const t = recurrence_table(w, 8);
  CHECK_THROWS_AS(weighted_polys(t, w, 0.0, 9), std::invalid_argument);
  CHECK(cd_kernel(t, w, 0, 0.1, 0.2) == 0.0);
}
