#include "doctest.h"
#include "rmt/kernels.hpp"
#include "rmt/orthopoly.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/rh.hpp"
#include "rmt/specfun.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

using namespace rmt;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

EquilibriumMeasure const &semicircle()
{
  static EquilibriumMeasure const mu = solve_equilibrium(Potential{{0, 0, 0.5}});
  return mu;
}

Matrix2x2C matrix(cd a, cd b, cd c, cd d)
{
  Matrix2x2C m;
  m << a, b, c, d;
  return m;
}

} // namespace

TEST_CASE("descent context")
{
  auto const ctx = make_descent_context(semicircle(), 64, 0.1);
  CHECK(ctx.delta == 0.1);
  for (int k = 0; k < 64; ++k) { CHECK(phi(ctx, lens_lip(ctx, (k + 0.5) / 64)).real() < 0.0); }
  CHECK_THROWS_AS(make_descent_context(semicircle(), 64, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_descent_context(solve_equilibrium(Potential{{0, 1.0}, true}), 64), std::invalid_argument);
}

TEST_CASE("g function")
{
  auto const ctx = make_descent_context(semicircle(), 64, 0.1);
  cd const   z(1000.0, 0.0);
  CHECK(std::abs(g_function(ctx, z) - std::log(z)) <= 2e-3);
  cd const w(1.0, 2.0);
  CHECK(std::abs(g_function(ctx, std::conj(w)) - std::conj(g_function(ctx, w))) <= 1e-14);
  double const eps = 1e-3;
  cd const     dg  = (g_function(ctx, z + eps) - g_function(ctx, z - eps)) / (2 * eps);
  CHECK(std::abs(z * dg - 1.0) <= 2e-3);
  CHECK_THROWS_AS(g_function(ctx, cd(0.5, 1e-12)), std::domain_error);
  CHECK_THROWS_AS(g_function(ctx, cd(-3.0, 0.0)), std::domain_error);
}

TEST_CASE("phi")
{
  auto const   ctx = make_descent_context(semicircle(), 64, 0.1);
  double const h   = 1e-5, x = 0.5;
  cd const     d   = (phi(ctx, x + h) - phi(ctx, x - h)) / (2 * h);
  CHECK(std::abs(d - cd(0.0, kPi * density(semicircle(), x))) <= 1e-7);
  CHECK(std::abs(phi(ctx, 2.0)) == 0.0);
  CHECK(phi(ctx, 2.5).real() > 0.0);
  CHECK(std::abs(phi(ctx, 2.5).imag()) <= 1e-15);
  CHECK(phi(ctx, -2.5, PhiVariant::Left).real() > 0.0);
  // boundary values on (a, b) are conjugate
  CHECK(std::abs(phi(ctx, 0.3, PhiVariant::Right, Side::Minus) + phi(ctx, 0.3)) <= 1e-14);
}

TEST_CASE("outer parametrix")
{
  auto const ctx = make_descent_context(semicircle(), 64, 0.1);
  CHECK(std::abs(outer_parametrix(ctx, cd(0.3, 0.01)).determinant() - 1.0) <= 1e-12);
  CHECK((outer_parametrix(ctx, 1000.0) - Matrix2x2C::Identity()).norm() <= 2e-3);
  Matrix2x2C const j = matrix(0.0, 1.0, -1.0, 0.0);
  Matrix2x2C const r = outer_parametrix(ctx, cd(0, 1e-6)) - outer_parametrix(ctx, cd(0, -1e-6)) * j;
  CHECK(r.norm() <= 1e-6);
  CHECK_THROWS_AS(outer_parametrix(ctx, 0.5), std::domain_error);
  for (cd z : {cd(0.7, 0.4), cd(-3.0, 0.2), cd(2.5, -1.0)}) {
    CHECK(std::abs(outer_parametrix(ctx, z).determinant() - 1.0) <= 1e-12);
  }
}

TEST_CASE("Airy model problem")
{
  CHECK(std::abs(airy_model(cd(1, 1)).determinant() - 1.0) <= 1e-8);
  for (cd z : {cd(-2, 0.5), cd(-1, -3), cd(0.3, -0.2)}) { CHECK(std::abs(airy_model(z).determinant() - 1.0) <= 1e-8); }
  CHECK_THROWS_AS(airy_model(cd(2.0, 0.0)), std::domain_error);

  // rays with (+ sector, - sector, jump)
  struct Ray
  {
    double     angle;
    int        plus, minus;
    Matrix2x2C jump;
  };
  Ray const rays[] = {
      {0.0, 0, 3, matrix(1.0, 1.0, 0.0, 1.0)},
      {2 * kPi / 3, 0, 1, matrix(1.0, 0.0, 1.0, 1.0)},
      {-2 * kPi / 3, 2, 3, matrix(1.0, 0.0, 1.0, 1.0)},
      {kPi, 1, 2, matrix(0.0, 1.0, -1.0, 0.0)},
  };
  for (auto const &ray : rays) {
    for (double r : {0.7, 2.0}) {
      cd const         z = std::polar(r, ray.angle);
      Matrix2x2C const d = airy_model_sector(z, ray.plus) - airy_model_sector(z, ray.minus) * ray.jump;
      CHECK(d.norm() <= 1e-8);
    }
  }

  CHECK(airy_model_asymptotic_residual(20.0) <= 1e-2);
  double const r10 = airy_model_asymptotic_residual(10.0);
  double const r40 = airy_model_asymptotic_residual(40.0);
  CHECK(r40 / r10 <= std::pow(0.25, 1.5) * 1.5);
  CHECK(airy_model_asymptotic_residual(std::polar(10.0, 0.8 * kPi)) <= 1e-2);
}

TEST_CASE("conformal map")
{
  auto const   ctx = make_descent_context(semicircle(), 64, 0.1);
  double const h   = 1e-5;
  CHECK(conformal_f(ctx, 2.0) == cd(0.0));
  double const fp = (conformal_f(ctx, 2.0 + h) - conformal_f(ctx, 2.0 - h)).real() / (2 * h);
  CHECK(std::abs(fp - 1.0) <= 1e-6);
  cd const f = conformal_f(ctx, 1.95);
  CHECK(f.real() < 0.0);
  CHECK(std::abs(f.imag()) <= 1e-8);
  CHECK(conformal_f(ctx, 2.05).real() > 0.0);
}

TEST_CASE("local parametrix")
{
  auto const ctx64  = make_descent_context(semicircle(), 64, 0.1);
  auto const ctx128 = make_descent_context(semicircle(), 128, 0.1);
  for (auto at : {Endpoint::Right, Endpoint::Left}) {
    double const e64 = matching_error(ctx64, at), e128 = matching_error(ctx128, at);
    CHECK(e64 <= 1.0);
    CHECK(e128 / e64 >= 0.4);
    CHECK(e128 / e64 <= 0.65);
  }
  CHECK(prefactor_residue(ctx64, 0.05) <= 1e-8);

  double const     x  = 2.0 + ctx64.delta / 2;
  Matrix2x2C const pp = local_parametrix(ctx64, cd(x, 1e-9));
  Matrix2x2C const pm = local_parametrix(ctx64, cd(x, -1e-9));
  Matrix2x2C const j  = matrix(1.0, std::exp(-2.0 * 64 * phi(ctx64, x)), 0.0, 1.0);
  CHECK((pp - pm * j).norm() <= 1e-6);

  for (int k = 2; k <= 8; ++k) {
    cd const z = 2.0 + std::polar(std::pow(10.0, -k), kPi / 3);
    CHECK(local_parametrix(ctx64, z).norm() <= 1e3);
  }
}

TEST_CASE("lens factorization of the T jump")
{
  auto const ctx = make_descent_context(semicircle(), 64, 0.1);
  for (double x : {-1.2, 0.3, 1.7}) { CHECK(t_jump_factorization_residual(ctx, x) <= 1e-10); }
}

TEST_CASE("bulk kernel approximation")
{
  auto const ctx = make_descent_context(semicircle(), 128, 0.1);
  CHECK(bulk_kernel_approx(ctx, 0.4, 0.4) == doctest::Approx(128 * density(semicircle(), 0.4)).epsilon(1e-12));
  CHECK_THROWS_AS(bulk_kernel_approx(ctx, 1.95, 0.0), std::domain_error);

  WeightSpec const w{semicircle().potential, 128};
  auto const       t = recurrence_table(w, 128);
  double           worst = 0.0, peak = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      double const x = -1.85 + 3.7 * i / 15, y = -1.85 + 3.7 * j / 15;
      double const k = cd_kernel(t, w, 128, x, y);
      worst          = std::max(worst, std::abs(bulk_kernel_approx(ctx, x, y) - k));
      peak           = std::max(peak, std::abs(k));
    }
  }
  CHECK(worst / peak <= 2e-2);

  auto const   ctx256 = make_descent_context(semicircle(), 256, 0.1);
  double const cn     = 256 / kPi;
  for (auto [u, v] : {std::pair{0.3, -0.5}, std::pair{1.0, 2.5}, std::pair{-1.5, 0.2}}) {
    CHECK(std::abs(bulk_kernel_approx(ctx256, u / cn, v / cn) / cn - sine_kernel(u, v)) <= 1e-3);
  }

  // the approximate density integrates to at most n over the window
  auto const q    = composite_gauss_legendre(-1.9, 1.9, 16, 32);
  double     mass = 0.0;
  for (Eigen::Index i = 0; i < q.nodes.size(); ++i) {
    mass += q.weights(i) * bulk_kernel_approx(ctx, q.nodes(i), q.nodes(i));
  }
  // exact semicircle mass of [-1.9, 1.9]
  double const exact = (1.9 * std::sqrt(4 - 1.9 * 1.9) / 2 + 2 * std::asin(0.95)) / kPi;
  CHECK(mass <= 128.0);
  CHECK(std::abs(mass - 128 * exact) <= 1e-8);
}

TEST_CASE("Airy kernel from the model problem")
{
  CHECK(std::abs(edge_kernel_from_A(1.0, 0.5) - airy_kernel(1.0, 0.5)) <= 1e-8);
  CHECK(std::abs(edge_kernel_from_A(-1.0, 0.5) - airy_kernel(-1.0, 0.5)) <= 1e-8);
  CHECK(std::abs(edge_kernel_from_A(0.5, -1.0) - airy_kernel(0.5, -1.0)) <= 1e-8);
  CHECK(std::abs(edge_kernel_from_A(-1.0, -0.3) - airy_kernel(-1.0, -0.3)) <= 1e-8);
  double const ap = airy(0.0).derivative;
  CHECK(std::abs(edge_kernel_from_A(0.0, 1e-5) - ap * ap) <= 1e-5);
}

TEST_CASE("asymptotic recurrence coefficients")
{
  auto const ctx = make_descent_context(semicircle(), 128, 0.1);
  auto const [a_inf, b_inf] = asymptotic_recurrence(ctx);
  CHECK(a_inf == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(b_inf) <= 1e-10);

  WeightSpec const w{semicircle().potential, 128};
  auto const       t = recurrence_table(w, 128);
  CHECK(std::abs(t.a[128] - a_inf) <= 0.5 / 128);

  auto const shifted = make_descent_context(solve_equilibrium(Potential{{0.5, -1.0, 0.5}}), 64);
  CHECK(asymptotic_recurrence(shifted).second == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Airy jump residual helper")
{
  for (int ray = 0; ray < 4; ++ray) { CHECK(airy_model_jump_residual(ray, 1.3) <= 1e-8); }
  CHECK_THROWS_AS(airy_model_jump_residual(4, 1.0), std::invalid_argument);
}
