#include "doctest.h"
#include "rmt/equilibrium.hpp"

#include <cmath>
#include <numbers>

using namespace rmt;

namespace {

constexpr double kPi = std::numbers::pi;

Potential const kGaussian{{0, 0, 0.5}};
Potential const kCriticalQuartic{{0, 0, -1, 0, 0.25}};
Potential const kMixed{{0, 0, 0.5, 0, 1.0 / 12}};

// sup over the grid cells of |grid density - cell average of the solver density|
double grid_distance(EquilibriumMeasure const &mu, DiscreteMeasure const &d)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    double avg = 0.0;
    for (int k = 0; k < 64; ++k) { avg += density(mu, d.nodes[i] + d.spacing * ((k + 0.5) / 64 - 0.5)) / 64; }
    worst = std::max(worst, std::abs(d.density_at(i) - avg));
  }
  return worst;
}

} // namespace

TEST_CASE("potential validation")
{
  CHECK_NOTHROW(kGaussian.validate());
  CHECK_THROWS_AS((Potential{{1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Potential{{0, 1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Potential{{0, 0, 0, 1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Potential{{0, 0, -1.0}}.validate()), std::invalid_argument);
  CHECK_NOTHROW((Potential{{0, 1.0}, true}.validate()));
  CHECK_THROWS_AS((Potential{{0, -1.0, 1.0}, true}.validate()), std::invalid_argument);
}

TEST_CASE("semicircle")
{
  auto const mu = solve_equilibrium(kGaussian);
  CHECK(std::abs(mu.a + 2) < 1e-10);
  CHECK(std::abs(mu.b - 2) < 1e-10);
  REQUIRE(mu.h.size() == 1);
  CHECK(mu.h[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(density(mu, 0.0) == doctest::Approx(1 / kPi).epsilon(1e-12));
  CHECK(density(mu, 2.5) == 0.0);
  CHECK(density(mu, -3.0) == 0.0);
  for (double x : {-3.0, -2.0, 0.0, 1.3, 2.0, 5.0}) { CHECK(qv(kGaussian, mu, x) == doctest::Approx(x * x / 4 - 1)); }
  CHECK(std::abs(effective_potential(mu, kGaussian, 0.0)) < 1e-8);
  CHECK(std::abs(effective_potential(mu, kGaussian, 2.0)) < 1e-6);
  CHECK(effective_potential(mu, kGaussian, 3.0) > 0.1);
  // ell for the semicircle is 1 + log 1 ... from V(0) + 2 * \int log|y| rho = 0 + 1
  CHECK(mu.ell == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(classify(mu, kGaussian).empty());
}

TEST_CASE("critical quartic")
{
  auto const mu = solve_equilibrium(kCriticalQuartic);
  CHECK(std::abs(mu.a + 2) < 1e-10);
  CHECK(std::abs(mu.b - 2) < 1e-10);
  REQUIRE(mu.h.size() == 3);
  CHECK(std::abs(mu.h[0]) < 1e-9);
  CHECK(std::abs(mu.h[1]) < 1e-9);
  CHECK(mu.h[2] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(mu.moments[2] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(density(mu, 0.0)) < 1e-6);
  CHECK(std::abs(qv(kCriticalQuartic, mu, 0.0)) < 1e-10);
  double const h = 1e-4;
  CHECK(std::abs(qv(kCriticalQuartic, mu, h) - qv(kCriticalQuartic, mu, -h)) / (2 * h) < 1e-6);
  // (1/2 pi) x^2 sqrt(4 - x^2)
  for (double x : {-1.5, -0.4, 0.7, 1.9}) {
    CHECK(density_h(mu, x) == doctest::Approx(x * x * std::sqrt(4 - x * x) / (2 * kPi)).epsilon(1e-8));
  }
  auto const sing = classify(mu, kCriticalQuartic);
  REQUIRE(sing.size() == 1);
  CHECK(sing[0].type == SingularType::InteriorSingular);
  CHECK(sing[0].k == 1);
  CHECK(std::abs(sing[0].location) < 1e-6);
}

TEST_CASE("perturbed quartics on either side of criticality")
{
  // shallower well: one cut, density positive at 0, nothing singular
  Potential const one{{0, 0, -0.999, 0, 0.25}};
  auto const      mu = solve_equilibrium(one);
  CHECK(density(mu, 0.0) > 0.0);
  double qmin = 1e300;
  for (double x = mu.a + 0.01; x < mu.b; x += 0.01) { qmin = std::min(qmin, qv(one, mu, x)); }
  CHECK(qmin < -1e-9);
  CHECK(classify(mu, one).empty());
  // deeper well: the gap opens at 0
  Potential const two{{0, 0, -1.001, 0, 0.25}};
  try {
    solve_equilibrium(two);
    FAIL("expected a multi-cut rejection");
  } catch (MultiCutError const &e) {
    CHECK(e.intervals() == 2);
  }
}

TEST_CASE("hard edge with linear potential")
{
  Potential const V{{0, 1.0}, true};
  auto const      mu = solve_equilibrium(V);
  CHECK(mu.a == 0.0);
  CHECK(std::abs(mu.b - 4) < 1e-10);
  for (double x : {0.01, 0.5, 2.0, 3.9}) {
    double const exact = std::sqrt((4 - x) / x) / (2 * kPi);
    CHECK(density(mu, x) == doctest::Approx(exact).epsilon(1e-9));
    CHECK(density_h(mu, x) == doctest::Approx(exact).epsilon(1e-9));
  }
  CHECK_THROWS_AS(qv(V, mu, 0.0), std::domain_error);
  CHECK(qv(V, mu, 2.0) == doctest::Approx(0.25 - 0.5));
  CHECK(std::abs(effective_potential(mu, V, 1.0)) < 1e-8);
  CHECK(effective_potential(mu, V, 6.0) > 0.0);
  CHECK(classify(mu, V).empty());
}

TEST_CASE("measure invariants")
{
  for (auto const &V : {kGaussian, kCriticalQuartic, kMixed, Potential{{0.3, -1, 0.5, 0.2, 0.1}},
                        Potential{{0, 0.5, 0.3}, true}}) {
    auto const mu = solve_equilibrium(V);
    // moments of (1/pi) sqrt(q^-) reproduce the solver's moments (Gauss-Chebyshev)
    int const           n = 4000;
    std::vector<double> m(mu.moments.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      double const th = kPi * (i + 0.5) / n;
      double       x, w;
      if (V.hard_edge) {
        x = 0.5 * mu.b * (1 - std::cos(th));
        w = density_h(mu, x) * 0.5 * mu.b * std::sin(th) * kPi / n;
      } else {
        x = 0.5 * (mu.a + mu.b) + 0.5 * (mu.b - mu.a) * std::cos(th);
        w = density_h(mu, x) * 0.5 * (mu.b - mu.a) * std::sin(th) * kPi / n;
      }
      double p = w;
      for (auto &mk : m) {
        mk += p;
        p *= x;
      }
    }
    for (std::size_t k = 0; k < m.size(); ++k) { CHECK(std::abs(m[k] - mu.moments[k]) < 1e-9); }
    CHECK(std::abs(m[0] - 1) < 1e-10);
    // q_V has degree 2(deg V - 1)
    auto const q = qv_polynomial(V, mu.moments);
    CHECK(poly::degree(q) == 2 * (V.degree() - 1) + (V.hard_edge ? 1 : 0));
    // Euler-Lagrange: equality on the support, inequality off it
    for (int i = 1; i < 20; ++i) {
      double const x = mu.a + (mu.b - mu.a) * i / 20.0;
      CHECK(std::abs(effective_potential(mu, V, x)) < 1e-8);
      CHECK(density_h(mu, x) >= 0.0);
      // the square-root form is ill-conditioned where rho has a double zero,
      // so compare squares there
      double const rh = density_h(mu, x);
      if (rh > 1e-3) {
        CHECK(std::abs(rh - density(mu, x)) < 1e-8);
      } else {
        CHECK(std::abs(kPi * kPi * rh * rh + qv(V, mu, x)) < 1e-12);
      }
    }
    for (double off : {0.05, 0.5, 2.0}) {
      CHECK(effective_potential(mu, V, mu.b + off) >= -1e-8);
      if (!V.hard_edge) { CHECK(effective_potential(mu, V, mu.a - off) >= -1e-8); }
    }
  }
}

TEST_CASE("scaling covariance")
{
  // V(2x) has support scaled by 1/2
  auto const mu  = solve_equilibrium(kMixed);
  auto       c2  = kMixed.coefficients;
  for (std::size_t k = 0; k < c2.size(); ++k) { c2[k] *= std::pow(2.0, k); }
  auto const mu2 = solve_equilibrium(Potential{c2});
  CHECK(mu2.a == doctest::Approx(mu.a / 2).epsilon(1e-10));
  CHECK(mu2.b == doctest::Approx(mu.b / 2).epsilon(1e-10));
}

TEST_CASE("grid energy oracle")
{
  auto const d = grid_energy_minimize(kGaussian, 800, -3, 3);
  double     total = 0.0;
  for (double w : d.weights) { total += w; }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < d.energy_history.size(); ++i) {
    CHECK(d.energy_history[i] <= d.energy_history[i - 1] + 1e-14 * std::abs(d.energy_history[i - 1]));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    double const x = d.nodes[i];
    worst = std::max(worst, std::abs(d.density_at(i) - std::sqrt(std::max(4 - x * x, 0.0)) / (2 * kPi)));
  }
  CHECK(worst <= 5e-3);

  struct Case
  {
    Potential V;
    double    lo, hi;
  };
  for (auto const &c : {Case{kGaussian, -3, 3}, Case{kCriticalQuartic, -3, 3}, Case{kMixed, -3, 3}}) {
    auto const mu = solve_equilibrium(c.V);
    auto const g  = grid_energy_minimize(c.V, 800, c.lo, c.hi);
    CHECK(grid_distance(mu, g) <= 1e-2);
  }
  CHECK_THROWS_AS(grid_energy_minimize(kGaussian, 2001, -3, 3), std::invalid_argument);
}
