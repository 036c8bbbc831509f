#include "rmt/specfun.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rmt {

namespace {

using quad = __float128;

struct cquad
{
  quad re = 0, im = 0;
};

inline cquad operator+(cquad a, cquad b) { return {a.re + b.re, a.im + b.im}; }
inline cquad operator*(cquad a, cquad b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline cquad operator*(quad s, cquad a) { return {s * a.re, s * a.im}; }
inline quad  norm1(cquad a) { return fabsq(a.re) + fabsq(a.im); }
inline cdouble to_double(cquad a) { return {static_cast<double>(a.re), static_cast<double>(a.im)}; }

struct AiryConstants
{
  quad ai0;
  quad aip0;
};

AiryConstants const &airy_constants()
{
  static AiryConstants const c = [] {
    quad const third = 1.0Q / 3.0Q;
    return AiryConstants{1.0Q / (powq(3.0Q, 2 * third) * tgammaq(2 * third)),
                         -1.0Q / (cbrtq(3.0Q) * tgammaq(third))};
  }();
  return c;
}

// Above this radius the asymptotic expansion is used.
constexpr double kAirySeam = 8.5;

// Power series from the origin, summed in quad precision. The coefficients obey
// a_{n} = a_{n-3} / (n (n-1)) from y'' = z y.
ComplexPair airy_maclaurin(cdouble zd)
{
  auto const &k = airy_constants();
  cquad const z{zd.real(), zd.imag()};

  quad  a[3] = {k.ai0, k.aip0, 0};
  cquad value{k.ai0, 0};
  cquad deriv{0, 0};
  cquad zpow{1, 0}; // z^{n-1}
  quad  biggest  = fabsq(k.ai0);
  int   quiet    = 0;
  for (int n = 1; n < 2000; ++n) {
    quad an;
    if (n < 3) {
      an = a[n];
    } else {
      an = a[n % 3] / (static_cast<quad>(n) * (n - 1));
      a[n % 3] = an;
    }
    cquad const dterm = (an * n) * zpow;
    zpow              = zpow * z;
    cquad const vterm = an * zpow;
    value             = value + vterm;
    deriv             = deriv + dterm;
    quad const size   = norm1(vterm) + norm1(dterm);
    biggest           = fmaxq(biggest, size);
    if (an == 0) { continue; }
    quiet = size < 1e-36Q * biggest ? quiet + 1 : 0;
    if (quiet >= 2) { break; }
  }
  return {to_double(value), to_double(deriv)};
}

// Leading-exponential expansion, valid for |arg z| <= 2pi/3 and large |z|.
ComplexPair airy_asymptotic_principal(cdouble z)
{
  cdouble const sq    = std::sqrt(z);
  cdouble const zeta  = (2.0 / 3.0) * z * sq;
  cdouble const quart = std::sqrt(sq);
  if (-zeta.real() > 700.0) { throw std::range_error("airy: result overflows double"); }

  cdouble const inv = 1.0 / zeta;
  cdouble       su{1.0}, sv{1.0};
  cdouble       p{1.0};
  double        u = 1.0, last = 1e300;
  for (int k = 1; k < 200; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    double const v = -u * (6.0 * k + 1.0) / (6.0 * k - 1.0);
    p *= -inv;
    double const size = std::abs(u * p);
    if (size > last) { break; }
    su += u * p;
    sv += v * p;
    last = size;
    if (size < 1e-17) { break; }
  }
  double const  norm = 0.5 / std::sqrt(std::numbers::pi);
  cdouble const e    = std::exp(-zeta);
  return {norm * e / quart * su, -norm * quart * e * sv};
}

ComplexPair airy_asymptotic(cdouble z)
{
  double const arg = std::arg(z);
  if (std::abs(arg) <= 2.0 * std::numbers::pi / 3.0) { return airy_asymptotic_principal(z); }
  // Ai(z) = -w Ai(w z) - w^2 Ai(w^2 z)
  cdouble const w  = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  cdouble const w2 = w * w;
  auto const    p1 = airy_asymptotic_principal(w * z);
  auto const    p2 = airy_asymptotic_principal(w2 * z);
  return {-w * p1.value - w2 * p2.value, -w2 * p1.derivative - w * p2.derivative};
}

// Hankel expansion for large x.
RealPair bessel_hankel(double alpha, double x, double *next = nullptr)
{
  auto pq = [x](double nu, double &P, double &Q) {
    double const mu   = 4.0 * nu * nu;
    double       term = 1.0;
    double       last = 1e300;
    P = 1.0;
    Q = 0.0;
    for (int k = 1; k < 400; ++k) {
      term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
      double const size = std::abs(term);
      if (size > last && k > 2) { break; }
      last = size;
      switch (k % 4) {
      case 1: Q += term; break;
      case 2: P -= term; break;
      case 3: Q -= term; break;
      case 0: P += term; break;
      }
      if (size < 1e-17) { break; }
    }
  };
  auto eval = [&](double nu) {
    double P, Q;
    pq(nu, P, Q);
    double const chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
  };
  double const j0 = eval(alpha);
  double const j1 = eval(alpha + 1.0);
  if (next) { *next = j1; }
  return {j0, alpha / x * j0 - j1};
}

RealPair bessel_series(double alpha, double x)
{
  quad const a    = alpha;
  quad const half = static_cast<quad>(x) / 2;
  quad const h2   = half * half;
  quad       term = powq(half, a) / tgammaq(a + 1);
  quad       sum = 0, dsum = 0;
  quad       biggest = 0;
  for (int k = 0; k < 1000; ++k) {
    sum += term;
    dsum += (2 * k + a) * term;
    biggest = fmaxq(biggest, fabsq(term));
    if (fabsq(term) < 1e-36Q * biggest && k > 2) { break; }
    term *= -h2 / ((k + 1) * (k + 1 + a));
  }
  return {static_cast<double>(sum), static_cast<double>(dsum / static_cast<quad>(x))};
}

} // namespace

ComplexPair airy(cdouble z)
{
  if (std::abs(z) <= kAirySeam) { return airy_maclaurin(z); }
  return airy_asymptotic(z);
}

RealPair airy(double x)
{
  auto const c = airy(cdouble{x, 0.0});
  return {c.value.real(), c.derivative.real()};
}

void airy_derivatives(double x, int order, double *out)
{
  auto const ai = airy(x);
  out[0]        = ai.value;
  if (order >= 1) { out[1] = ai.derivative; }
  for (int n = 0; n + 2 <= order; ++n) {
    out[n + 2] = x * out[n] + (n >= 1 ? n * out[n - 1] : 0.0);
  }
}

RealPair bessel_j(double alpha, double x)
{
  if (!(alpha > -1.0)) { throw std::domain_error("bessel_j: order must exceed -1"); }
  if (!(x >= 0.0)) { throw std::domain_error("bessel_j: argument must be non-negative"); }
  if (x == 0.0) {
    double const inf = std::numeric_limits<double>::infinity();
    if (alpha == 0.0) { return {1.0, 0.0}; }
    if (alpha < 0.0) { return {inf, -inf}; }
    if (alpha == 1.0) { return {0.0, 0.5}; }
    return {0.0, alpha < 1.0 ? inf : 0.0};
  }
  if (x <= std::max(25.0, 2.0 * alpha)) { return bessel_series(alpha, x); }
  return bessel_hankel(alpha, x);
}

double sinc(double t)
{
  double const u = std::numbers::pi * t;
  if (std::abs(u) < 1e-4) {
    double const u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

double sinc_integral(double t)
{
  double const x = std::numbers::pi * std::abs(t);
  double       si;
  if (x <= 40.0) {
    quad const xq = x;
    quad const x2 = xq * xq;
    quad       p  = xq; // x^{2k+1}/(2k+1)!
    quad       s  = 0;
    for (int k = 0; k < 200; ++k) {
      quad const term = p / (2 * k + 1);
      s += term;
      if (fabsq(term) < 1e-36Q) { break; }
      p *= -x2 / ((2 * k + 2) * (2 * k + 3));
    }
    si = static_cast<double>(s);
  } else {
    // Si(x) = pi/2 - f(x) cos x - g(x) sin x
    double f = 0, g = 0;
    double tf = 1.0 / x, tg = 1.0 / (x * x);
    double lastf = 1e300, lastg = 1e300;
    for (int k = 0; k < 100; ++k) {
      if (std::abs(tf) < lastf) {
        f += tf;
        lastf = std::abs(tf);
      }
      if (std::abs(tg) < lastg) {
        g += tg;
        lastg = std::abs(tg);
      }
      tf *= -(2.0 * k + 1) * (2.0 * k + 2) / (x * x);
      tg *= -(2.0 * k + 2) * (2.0 * k + 3) / (x * x);
      if (lastf < 1e-18 && lastg < 1e-18) { break; }
    }
    si = std::numbers::pi / 2 - f * std::cos(x) - g * std::sin(x);
  }
  si /= std::numbers::pi;
  return t < 0 ? -si : si;
}

} // namespace rmt
