#include "rmt/pearcey.hpp"

#include "rmt/quadrature.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rmt {

namespace {

using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr cd     kI{0.0, 1.0};

struct Node
{
  cd z; // contour point
  cd w; // quadrature weight times dz/du, with orientation
};

// Exponents of the two integrands.
cd xi_phase(cd xi, double x, double s) { return xi * xi * xi * xi / 4.0 - s * xi * xi / 2.0 + xi * x; }
cd eta_phase(cd eta, double y, double s) { return -eta * eta * eta * eta / 4.0 + s * eta * eta / 2.0 - eta * y; }

// A contour piece z(u), u in [0, inf) or (-inf, inf), with the extent cut
// where the integrand falls `cut` e-folds below its peak.
struct Piece
{
  std::function<cd(double)> z;
  std::function<cd(double)> dz;
  double                    sign;      // orientation
  bool                      two_sided; // u over (-inf, inf) rather than [0, inf)
  double                    panel;
};

double extent(Piece const &p, std::function<double(cd)> const &logmag, double cut)
{
  double peak = -1e300;
  std::vector<std::pair<double, double>> scan;
  for (double u = 0.0; u <= 40.0; u += 0.02) {
    double const l = logmag(p.z(u));
    scan.emplace_back(u, l);
    peak = std::max(peak, l);
    if (p.two_sided) {
      double const m = logmag(p.z(-u));
      scan.emplace_back(u, m);
      peak = std::max(peak, m);
    }
  }
  double reach = 0.0;
  for (auto const &[u, l] : scan) {
    if (l >= peak - cut) { reach = std::max(reach, u); }
  }
  if (reach >= 39.0) { throw std::runtime_error("pearcey: integrand does not decay on the contour"); }
  return reach + 0.1;
}

void add_nodes(std::vector<Node> &out, Piece const &p, double reach)
{
  auto const &g = gauss_legendre(16);
  double const lo = p.two_sided ? -reach : 0.0;
  int const    n  = std::max(1, static_cast<int>(std::ceil((reach - lo) / p.panel)));
  double const h  = (reach - lo) / n;
  for (int k = 0; k < n; ++k) {
    double const c = lo + (k + 0.5) * h;
    for (Eigen::Index i = 0; i < g.nodes.size(); ++i) {
      double const u = c + 0.5 * h * g.nodes[i];
      out.push_back({p.z(u), p.sign * 0.5 * h * g.weights[i] * p.dz(u)});
    }
  }
}

std::vector<Piece> xi_pieces(PearceyContour c)
{
  std::vector<Piece> pieces;
  if (c == PearceyContour::ShiftedRays) {
    constexpr double d = 1.0;
    // (vertex, direction, sign): incoming rays carry sign -1.
    struct Ray
    {
      double vertex;
      double angle;
      double sign;
    };
    for (Ray r : {Ray{d, kPi / 4, -1.0}, Ray{d, -kPi / 4, 1.0}, Ray{-d, 5 * kPi / 4, -1.0}, Ray{-d, 3 * kPi / 4, 1.0}}) {
      cd const e = std::polar(1.0, r.angle);
      pieces.push_back({[=](double u) { return r.vertex + u * e; }, [=](double) { return e; }, r.sign, false, 0.1});
    }
  } else {
    static constexpr double d = 0.75;
    // right branch runs from upper right to lower right as u increases
    pieces.push_back({[](double u) { return d * cd(std::cosh(u), -std::sinh(u)); },
                      [](double u) { return d * cd(std::sinh(u), -std::cosh(u)); }, 1.0, true, 0.025});
    // left branch runs upper left to lower left as u increases; C goes the other way
    pieces.push_back({[](double u) { return -d * cd(std::cosh(u), std::sinh(u)); },
                      [](double u) { return -d * cd(std::sinh(u), std::cosh(u)); }, -1.0, true, 0.025});
  }
  return pieces;
}

Piece eta_piece(PearceyContour c)
{
  if (c == PearceyContour::ShiftedRays) {
    return {[](double t) { return kI * t; }, [](double) { return kI; }, 1.0, true, 0.1};
  }
  // eta = 2i sinh v
  return {[](double v) { return 2.0 * kI * std::sinh(v); }, [](double v) { return 2.0 * kI * std::cosh(v); }, 1.0, true,
          0.03};
}

std::vector<Node> xi_nodes(PearceyContour c, double x, double s, double cut)
{
  std::vector<Node> out;
  auto const        logmag = [=](cd z) { return xi_phase(z, x, s).real(); };
  for (auto const &p : xi_pieces(c)) { add_nodes(out, p, extent(p, logmag, cut)); }
  return out;
}

std::vector<Node> eta_nodes(PearceyContour c, double y, double s, double cut)
{
  std::vector<Node> out;
  auto const        p      = eta_piece(c);
  auto const        logmag = [=](cd z) { return eta_phase(z, y, s).real(); };
  add_nodes(out, p, extent(p, logmag, cut));
  return out;
}

double double_sum(PearceyContour c, double x, double y, double s, double cut)
{
  auto xi  = xi_nodes(c, x, s, cut);
  auto eta = eta_nodes(c, y, s, cut);
  for (auto &n : xi) { n.w *= std::exp(xi_phase(n.z, x, s)); }
  for (auto &n : eta) { n.w *= std::exp(eta_phase(n.z, y, s)); }
  cd total{0.0, 0.0};
  for (auto const &e : eta) {
    cd inner{0.0, 0.0};
    for (auto const &f : xi) { inner += f.w / (e.z - f.z); }
    total += e.w * inner;
  }
  // 1/(2 pi i)^2 = -1/(4 pi^2)
  return -(total / (4.0 * kPi * kPi)).real();
}

// Rounding bound for the double sum: eps times the sum of term magnitudes.
double double_sum_bound(PearceyContour c, double x, double y, double s)
{
  double sx = 0.0, sy = 0.0;
  for (auto const &n : xi_nodes(c, x, s, 40.0)) { sx += std::abs(n.w) * std::exp(xi_phase(n.z, x, s).real()); }
  for (auto const &n : eta_nodes(c, y, s, 40.0)) { sy += std::abs(n.w) * std::exp(eta_phase(n.z, y, s).real()); }
  double const gap = c == PearceyContour::ShiftedRays ? 1.0 : 0.75;
  return 1e-16 * sx * sy / (4.0 * kPi * kPi * gap);
}

// Single contour integrals on contours placed near the relevant saddle points.
// Candidates are scored by the largest real part of the exponent along them,
// which bounds the cancellation in the sum.

double hyp(double u, double w) { return std::hypot(u, w); }

Piece top_path(double a, double b, double w) // upper right to upper left
{
  return {[=](double u) { return cd(a + u, b + hyp(u, w) - w); }, [=](double u) { return cd(1.0, u / hyp(u, w)); },
          -1.0, true, 0.1};
}

Piece right_path(double v, double w) // upper right to lower right through v
{
  return {[=](double u) { return cd(v + hyp(u, w) - w, -u); }, [=](double u) { return cd(u / hyp(u, w), -1.0); }, 1.0,
          true, 0.1};
}

Piece left_path(double v, double w) // lower left to upper left through v
{
  return {[=](double u) { return cd(v - hyp(u, w) + w, u); }, [=](double u) { return cd(-u / hyp(u, w), 1.0); }, 1.0,
          true, 0.1};
}

Piece vertical_path(double a)
{
  return {[=](double u) { return cd(a, u); }, [](double) { return kI; }, 1.0, true, 0.1};
}

template <typename Phase> double peak(Piece const &p, Phase const &phase)
{
  double m = -1e300;
  for (double u = -12.0; u <= 12.0; u += 0.2) { m = std::max(m, phase(p.z(u)).real()); }
  return m;
}

struct Moments
{
  std::vector<cd> m;
  double          log_scale; // largest real exponent met on the contour
};

// sum of w z^k e^{phase(z)} for k < count, signed by `power_sign` (z or -z)
template <typename Phase>
void accumulate(std::vector<cd> &acc, Piece const &p, Phase const &phase, double power_sign)
{
  auto const logmag = [&](cd z) { return phase(z).real() + acc.size() * std::log1p(0.25 * std::abs(z)); };
  std::vector<Node> nodes;
  add_nodes(nodes, p, extent(p, logmag, 45.0));
  for (auto const &n : nodes) {
    cd t = n.w * std::exp(phase(n.z));
    for (auto &a : acc) {
      a += t;
      t *= power_sign * n.z;
    }
  }
}

// (1/2 pi i) \int_C xi^k e^{xi^4/4 - s xi^2/2 + xi x} d xi
Moments p_moments(double x, double s, int count)
{
  auto const phase = [=](cd z) { return xi_phase(z, x, s); };
  double     best_t = 1e300, ta = 0, tb = 0, tw = 1;
  for (double w : {0.5, 2.0}) {
    for (double a = -5.0; a <= 5.0; a += 0.25) {
      for (double b = 0.0; b <= 5.0; b += 0.25) {
        double const m = peak(top_path(a, b, w), phase);
        if (m < best_t) { best_t = m, ta = a, tb = b, tw = w; }
      }
    }
  }
  double best_r = 1e300, best_l = 1e300, rv = 1, lv = -1, rw = 1, lw = 1;
  for (double w : {0.5, 1.0, 2.0}) {
    for (double v = -5.0; v <= 5.0; v += 0.1) {
      double const mr = peak(right_path(v, w), phase);
      double const ml = peak(left_path(v, w), phase);
      if (mr < best_r) { best_r = mr, rv = v, rw = w; }
      if (ml < best_l) { best_l = ml, lv = v, lw = w; }
    }
  }
  std::vector<cd> acc(count);
  Moments         out;
  out.m.resize(count);
  if (best_t <= std::max(best_r, best_l)) {
    // the bottom half is the mirror image, so p = Im(I_top) / pi
    accumulate(acc, top_path(ta, tb, tw), phase, 1.0);
    for (int k = 0; k < count; ++k) { out.m[k] = acc[k].imag() / kPi; }
    out.log_scale = best_t;
  } else {
    accumulate(acc, right_path(rv, rw), phase, 1.0);
    accumulate(acc, left_path(lv, lw), phase, 1.0);
    for (int k = 0; k < count; ++k) { out.m[k] = acc[k].imag() / (2.0 * kPi); }
    out.log_scale = std::max(best_r, best_l);
  }
  return out;
}

// (1/2 pi i) \int (-eta)^k e^{-eta^4/4 + s eta^2/2 - eta y} d eta over a vertical line
Moments q_moments(double y, double s, int count)
{
  auto const phase = [=](cd z) { return eta_phase(z, y, s); };
  double     best = 1e300, ba = 0;
  for (double a = -5.0; a <= 5.0; a += 0.05) {
    double const m = peak(vertical_path(a), phase);
    if (m < best) { best = m, ba = a; }
  }
  std::vector<cd> acc(count);
  accumulate(acc, vertical_path(ba), phase, -1.0);
  Moments out;
  out.m.resize(count);
  for (int k = 0; k < count; ++k) { out.m[k] = acc[k].imag() / (2.0 * kPi); }
  out.log_scale = best;
  return out;
}

} // namespace

double pearcey_kernel_saddle(double x, double y, double s)
{
  double const h = x - y;
  if (std::abs(h) > 0.25) {
    auto const p = p_moments(x, s, 3);
    auto const q = q_moments(y, s, 3);
    auto const &a = p.m, &b = q.m;
    return (a[0].real() * b[2].real() - a[1].real() * b[1].real() + a[2].real() * b[0].real() -
            s * a[0].real() * b[0].real()) /
           h;
  }
  // Taylor series in h of the numerator about x = y
  constexpr int kTerms = 40;
  auto const    p      = p_moments(y, s, kTerms + 3);
  auto const    q      = q_moments(y, s, 3);
  double const  q0 = q.m[0].real(), q1 = q.m[1].real(), q2 = q.m[2].real();
  double        sum = 0.0, coef = 1.0; // h^{k-1}/k!
  for (int k = 1; k <= kTerms; ++k) {
    coef = k == 1 ? 1.0 : coef * h / k;
    double const nk =
      p.m[k].real() * q2 - p.m[k + 1].real() * q1 + p.m[k + 2].real() * q0 - s * p.m[k].real() * q0;
    sum += nk * coef;
  }
  return sum;
}

double pearcey_kernel(double x, double y, double s, PearceyContour contour)
{
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(s)) {
    throw std::domain_error("pearcey_kernel: non-finite argument");
  }
  if (double_sum_bound(contour, x, y, s) > 1e-9) {
    // the double sum would cancel too many digits; use the saddle contours
    return pearcey_kernel_saddle(x, y, s);
  }
  double const a = double_sum(contour, x, y, s, 40.0);
  double const b = double_sum(contour, x, y, s, 55.0);
  if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(b))) {
    throw std::runtime_error("pearcey_kernel: truncation did not converge");
  }
  return b;
}

std::array<double, 4> pearcey_p(double x, double s)
{
  auto const            p = p_moments(x, s, 4);
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) { out[k] = p.m[k].real(); }
  return out;
}

std::array<double, 4> pearcey_q(double y, double s)
{
  auto const            q = q_moments(y, s, 4);
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) { out[k] = q.m[k].real(); }
  return out;
}

double pearcey_kernel_pq(double x, double y, double s)
{
  if (x == y) { throw std::domain_error("pearcey_kernel_pq: requires x != y"); }
  auto const p = pearcey_p(x, s);
  auto const q = pearcey_q(y, s);
  return (p[0] * q[2] - p[1] * q[1] + p[2] * q[0] - s * p[0] * q[0]) / (x - y);
}

} // namespace rmt
