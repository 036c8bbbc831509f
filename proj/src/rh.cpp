#include "rmt/rh.hpp"

#include "rmt/quadrature.hpp"
#include "rmt/specfun.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmt {

namespace {

using cd = std::complex<double>;

constexpr double pi = std::numbers::pi;
constexpr cd     I1{0.0, 1.0};

cd const omega = std::polar(1.0, 2.0 * pi / 3.0);

// Principal square root; on the negative axis the side picks +-i sqrt|w|.
cd sqrt_side(cd w, Side side)
{
  if (w.imag() == 0.0 && w.real() < 0.0) {
    double const r = std::sqrt(-w.real());
    return side == Side::Plus ? cd(0.0, r) : cd(0.0, -r);
  }
  return std::sqrt(w);
}

cd integrand(EquilibriumMeasure const &mu, cd s, Side side)
{
  return poly::evaluate(mu.h, s) * sqrt_side(s - mu.b, side) * sqrt_side(s - mu.a, side);
}

// \int_{s0}^{s1} along the segment; the cosine map clusters nodes at both
// ends, where the square roots vanish.
cd segment(EquilibriumMeasure const &mu, cd s0, cd s1, Side side)
{
  auto const &g   = gauss_legendre(96);
  cd          sum = 0.0;
  for (Eigen::Index i = 0; i < g.nodes.size(); ++i) {
    double const tau = 0.5 * (1.0 + g.nodes(i));
    cd const     s   = s0 + (s1 - s0) * (0.5 * (1.0 - std::cos(pi * tau)));
    double const jac = 0.5 * pi * std::sin(pi * tau) * 0.5 * g.weights(i);
    sum += integrand(mu, s, side) * jac;
  }
  return sum * (s1 - s0);
}

cd phi_measure(EquilibriumMeasure const &mu, cd z, PhiVariant variant, Side side)
{
  double const start = variant == PhiVariant::Right ? mu.b : mu.a;
  if (z.imag() == 0.0) {
    double const x = z.real();
    if (variant == PhiVariant::Right && x < mu.a) {
      return segment(mu, mu.b, mu.a, side) + segment(mu, mu.a, x, side);
    }
    if (variant == PhiVariant::Left && x > mu.b) {
      return segment(mu, mu.a, mu.b, side) + segment(mu, mu.b, x, side);
    }
  }
  return segment(mu, start, z, side);
}

Matrix2x2C diag(cd p, cd q)
{
  Matrix2x2C m;
  m << p, 0.0, 0.0, q;
  return m;
}

Matrix2x2C const sigma3 = diag(1.0, -1.0);

// x -> a + b - x applied to the density factor.
EquilibriumMeasure reflected(EquilibriumMeasure const &mu)
{
  EquilibriumMeasure r = mu;
  poly::Poly         acc{0.0};
  for (auto it = mu.h.rbegin(); it != mu.h.rend(); ++it) {
    acc = poly::add(poly::multiply(acc, {mu.a + mu.b, -1.0}), {*it});
  }
  r.h = poly::trim(acc);
  return r;
}

// f(z)/(z - b), analytic and positive at b.
cd f_ratio(DescentContext const &ctx, cd z)
{
  auto const &mu = ctx.measure;
  cd          w  = z - mu.b;
  if (std::abs(w) < 1e-12 * (mu.b - mu.a)) { w = 1e-12 * (mu.b - mu.a); }
  cd const p   = phi_measure(mu, mu.b + w, PhiVariant::Right, Side::Plus);
  cd const psi = 1.5 * p / (w * sqrt_side(w, Side::Plus));
  return std::pow(psi, 2.0 / 3.0);
}

Matrix2x2C right_parametrix(DescentContext const &ctx, cd z)
{
  double const n    = ctx.n;
  cd const     zeta = std::pow(n, 2.0 / 3.0) * conformal_f(ctx, z);
  cd const     nphi = n * phi_measure(ctx.measure, z, PhiVariant::Right, Side::Plus);
  if (std::abs(nphi.real()) > 700.0) { throw std::overflow_error("local_parametrix: e^{n phi} out of range"); }
  return prefactor_e(ctx, z) * airy_model(zeta) * diag(std::exp(nphi), std::exp(-nphi));
}

} // namespace

DescentContext make_descent_context(EquilibriumMeasure const &mu, int n, double delta)
{
  if (mu.potential.hard_edge) { throw std::invalid_argument("make_descent_context: soft edges only"); }
  if (n < 1) { throw std::invalid_argument("make_descent_context: n must be positive"); }
  double const width = mu.b - mu.a;
  if (delta <= 0.0) { delta = std::min(0.1, width / 8); }
  if (delta >= width / 4) { throw std::invalid_argument("make_descent_context: delta must be below (b - a)/4"); }
  DescentContext ctx{mu, n, delta, 0.5};
  for (int attempt = 0; attempt < 30; ++attempt, ctx.lens_height *= 0.5) {
    bool ok = true;
    for (int k = 0; k < 64 && ok; ++k) { ok = phi(ctx, lens_lip(ctx, (k + 0.5) / 64)).real() < 0.0; }
    if (ok) { return ctx; }
  }
  throw NonConvergence("make_descent_context: no lens with Re phi < 0 on the lips");
}

cd lens_lip(DescentContext const &ctx, double t)
{
  double const w = ctx.measure.b - ctx.measure.a;
  return cd(ctx.measure.a + w * t, 2.0 * ctx.lens_height * w * t * (1.0 - t));
}

cd g_function(DescentContext const &ctx, cd z)
{
  auto const  &mu   = ctx.measure;
  double const dist = z.real() <= mu.b ? std::abs(z.imag()) : std::abs(z - mu.b);
  if (dist < 1e-10) { throw std::domain_error("g_function: too close to the branch cut"); }
  int const    m = 4000;
  double const c = 0.5 * (mu.a + mu.b), r = 0.5 * (mu.b - mu.a);
  cd           sum = 0.0;
  for (int k = 1; k <= m; ++k) {
    double const th = k * pi / (m + 1);
    double const s  = std::sin(th);
    double const x  = c + r * std::cos(th);
    sum += s * s * poly::evaluate(mu.h, x) * std::log(z - x);
  }
  return sum * (r * r / (m + 1));
}

cd phi(DescentContext const &ctx, cd z, PhiVariant variant, Side side)
{
  return phi_measure(ctx.measure, z, variant, side);
}

Matrix2x2C outer_parametrix(DescentContext const &ctx, cd z)
{
  auto const &mu = ctx.measure;
  if (z.imag() == 0.0 && z.real() >= mu.a && z.real() <= mu.b) {
    throw std::domain_error("outer_parametrix: z on the cut [a, b]");
  }
  cd const   beta = std::pow((z - mu.b) / (z - mu.a), 0.25);
  cd const   p    = 0.5 * (beta + 1.0 / beta);
  cd const   q    = (beta - 1.0 / beta) / (2.0 * I1);
  Matrix2x2C m;
  m << p, q, -q, p;
  return m;
}

Matrix2x2C airy_model_sector(cd z, int sector)
{
  auto const a0 = airy(z);
  auto const a1 = airy(omega * z);
  auto const a2 = airy(omega * omega * z);
  cd const   y0 = a0.value, d0 = a0.derivative;
  cd const   y1 = omega * a1.value, d1 = omega * omega * a1.derivative;
  cd const   y2 = omega * omega * a2.value, d2 = omega * a2.derivative;
  Matrix2x2C m;
  switch (sector) {
  case 0: m << y0, -y2, -I1 * d0, I1 * d2; break;
  case 1: m << -y1, -y2, I1 * d1, I1 * d2; break; // (2,1) = +i y1', forced by the jump on arg z = 2pi/3
  case 2: m << -y2, y1, I1 * d2, -I1 * d1; break;
  case 3: m << y0, y1, -I1 * d0, -I1 * d1; break;
  default: throw std::invalid_argument("airy_model_sector: sector must be 0..3");
  }
  return std::sqrt(2.0 * pi) * m;
}

Matrix2x2C airy_model(cd z)
{
  for (double angle : {0.0, 2.0 * pi / 3.0, -2.0 * pi / 3.0, pi}) {
    cd const     w    = z * std::polar(1.0, -angle);
    double const dist = w.real() >= 0.0 ? std::abs(w.imag()) : std::abs(z);
    if (dist < 1e-10) { throw std::domain_error("airy_model: z on a jump ray"); }
  }
  double const arg = std::arg(z);
  int const    sector = arg > 2.0 * pi / 3.0 ? 1 : arg > 0.0 ? 0 : arg > -2.0 * pi / 3.0 ? 3 : 2;
  return airy_model_sector(z, sector);
}

Matrix2x2C airy_model_plus(double x) { return airy_model_sector(x, x >= 0.0 ? 0 : 1); }

double airy_model_jump_residual(int ray, double r)
{
  struct Ray
  {
    double angle;
    int    plus, minus;
    cd     j11, j12, j21, j22;
  };
  static Ray const rays[] = {
      {0.0, 0, 3, 1.0, 1.0, 0.0, 1.0},
      {2 * pi / 3, 0, 1, 1.0, 0.0, 1.0, 1.0},
      {-2 * pi / 3, 2, 3, 1.0, 0.0, 1.0, 1.0},
      {pi, 1, 2, 0.0, 1.0, -1.0, 0.0},
  };
  if (ray < 0 || ray > 3) { throw std::invalid_argument("ray index must be 0..3"); }
  if (!(r > 0.0)) { throw std::invalid_argument("radius must be positive"); }
  Ray const &k = rays[ray];
  Matrix2x2C j;
  j << k.j11, k.j12, k.j21, k.j22;
  cd const z = std::polar(r, k.angle);
  return (airy_model_sector(z, k.plus) - airy_model_sector(z, k.minus) * j).norm();
}

double airy_model_asymptotic_residual(cd z)
{
  Matrix2x2C const a  = (z.imag() == 0.0 && z.real() > 0.0) ? airy_model_plus(z.real()) : airy_model(z);
  cd const         q  = std::pow(z, 0.25);
  cd const         xi = 2.0 / 3.0 * std::pow(z, 1.5);
  Matrix2x2C       u_inv;
  u_inv << 1.0, -I1, -I1, 1.0;
  u_inv /= std::sqrt(2.0);
  Matrix2x2C const x = u_inv * diag(q, 1.0 / q) * a * diag(std::exp(xi), std::exp(-xi));
  return (x - Matrix2x2C::Identity()).norm();
}

cd conformal_f(DescentContext const &ctx, cd z)
{
  if (z == cd(ctx.measure.b)) { return 0.0; }
  return (z - ctx.measure.b) * f_ratio(ctx, z);
}

Matrix2x2C prefactor_e(DescentContext const &ctx, cd z)
{
  double const n = ctx.n;
  cd const     d = std::pow(n, 1.0 / 6.0) * std::pow(z - ctx.measure.a, 0.25) * std::pow(f_ratio(ctx, z), 0.25);
  Matrix2x2C   u;
  u << 1.0, -I1, -I1, 1.0;
  // The overall sign is +1: with -1 the matching condition gives P M^{-1} -> -I.
  return u / std::sqrt(2.0) * diag(d, 1.0 / d);
}

Matrix2x2C local_parametrix(DescentContext const &ctx, cd z, Endpoint at)
{
  if (at == Endpoint::Right) { return right_parametrix(ctx, z); }
  DescentContext mirror = ctx;
  mirror.measure        = reflected(ctx.measure);
  double const c        = ctx.measure.a + ctx.measure.b;
  return sigma3 * right_parametrix(mirror, c - z) * sigma3;
}

double matching_error(DescentContext const &ctx, Endpoint at, int points)
{
  double const center = at == Endpoint::Right ? ctx.measure.b : ctx.measure.a;
  double       worst  = 0.0;
  for (int k = 0; k < points; ++k) {
    cd const         z = center + std::polar(ctx.delta, 2.0 * pi * (k + 0.5) / points);
    Matrix2x2C const r = local_parametrix(ctx, z, at) * outer_parametrix(ctx, z).inverse();
    worst              = std::max(worst, (r - Matrix2x2C::Identity()).norm());
  }
  return worst;
}

double prefactor_residue(DescentContext const &ctx, double radius)
{
  int const  k = 128;
  Matrix2x2C sum = Matrix2x2C::Zero();
  for (int j = 0; j < k; ++j) {
    cd const e = std::polar(1.0, 2.0 * pi * (j + 0.5) / k);
    sum += prefactor_e(ctx, ctx.measure.b + radius * e) * e;
  }
  return (sum * (radius / k)).cwiseAbs().maxCoeff();
}

double t_jump_factorization_residual(DescentContext const &ctx, double x)
{
  double const n  = ctx.n;
  cd const     ep = std::exp(2.0 * n * phi(ctx, x, PhiVariant::Right, Side::Plus));
  cd const     em = std::exp(2.0 * n * phi(ctx, x, PhiVariant::Right, Side::Minus));
  Matrix2x2C   jt, lower_p, lower_m, middle;
  jt << ep, 1.0, 0.0, em;
  lower_p << 1.0, 0.0, ep, 1.0;
  lower_m << 1.0, 0.0, em, 1.0;
  middle << 0.0, 1.0, -1.0, 0.0;
  return (lower_m * middle * lower_p - jt).norm();
}

double bulk_kernel_approx(DescentContext const &ctx, double x, double y)
{
  auto const &mu = ctx.measure;
  auto        inside = [&](double t) { return t > mu.a + ctx.delta && t < mu.b - ctx.delta; };
  if (!inside(x) || !inside(y)) { throw std::domain_error("bulk_kernel_approx: points must lie in (a + delta, b - delta)"); }
  if (x == y) { return ctx.n * density_h(mu, x); }
  // phi_+(y) - phi_+(x) integrated directly, free of cancellation
  cd const d = segment(mu, x, y, Side::Plus);
  return std::sin((I1 * double(ctx.n) * d).real()) / (pi * (x - y));
}

double edge_kernel_from_A(double x, double y)
{
  if (x == y) { y = x + 1e-6 * (1.0 + std::abs(x)); }
  Matrix2x2C const m = airy_model_plus(y).inverse() * airy_model_plus(x);
  Eigen::RowVector2cd row;
  Eigen::Vector2cd    col;
  row << (y >= 0.0 ? 0.0 : -1.0), 1.0;
  col << 1.0, (x >= 0.0 ? 0.0 : 1.0);
  cd const v = (row * m * col)(0) / (2.0 * pi * I1 * (x - y));
  return v.real();
}

std::pair<double, double> asymptotic_recurrence(DescentContext const &ctx)
{
  // log beta = l1/z + l2/z^2 + ..., so beta = 1 + c1/z + c2/z^2 with
  // c1 = l1, c2 = l2 + l1^2/2. Then (Y1)_12 (Y1)_21 = c1^2 and
  // (Y2)_12/(Y1)_12 - (Y1)_22 = (2 c2 - c1^2)/(2 c1); the n m_1 terms from g cancel.
  double const a  = ctx.measure.a, b = ctx.measure.b;
  double const l1 = -(b - a) / 4.0;
  double const l2 = -(b * b - a * a) / 8.0;
  double const c1 = l1, c2 = l2 + 0.5 * l1 * l1;
  return {c1 * c1, (2.0 * c2 - c1 * c1) / (2.0 * c1)};
}

} // namespace rmt
