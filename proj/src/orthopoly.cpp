#include "rmt/orthopoly.hpp"

#include "rmt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rmt {

namespace {

constexpr double tail_log = 69.1; // log(1e30)
constexpr int    panel_order = 64;
constexpr int    max_doublings = 4;
constexpr double stable_tol = 1e-12;
constexpr double tail_mass = 1e-24;

double const neg_inf = -std::numeric_limits<double>::infinity();

// Panels on [0, len]. A power x^e of the weight at 0 gets geometric grading,
// and the innermost panel is mapped by x = hi t^{1/(1+e)} so that the
// integrand is smooth in t.
void add_side(std::vector<double> &xs, std::vector<double> &ws, double len, int panels, double e, double sign)
{
  bool const graded = e != 0.0;
  auto const &g = gauss_legendre(panel_order);
  auto        add = [&](double lo, double hi) {
    double const c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    for (Eigen::Index i = 0; i < g.nodes.size(); ++i) {
      xs.push_back(sign * (c + r * g.nodes(i)));
      ws.push_back(r * g.weights(i));
    }
  };
  double const h = len / panels;
  int          first = 0;
  if (graded) {
    double hi = h;
    for (int j = 0; j < 48; ++j) {
      add(0.5 * hi, hi);
      hi *= 0.5;
    }
    double const m = 1.0 / (1.0 + e);
    for (Eigen::Index i = 0; i < g.nodes.size(); ++i) {
      double const t = 0.5 * (1.0 + g.nodes(i));
      xs.push_back(sign * hi * std::pow(t, m));
      ws.push_back(0.5 * g.weights(i) * hi * m * std::pow(t, m - 1.0));
    }
    first = 1;
  }
  for (int p = first; p < panels; ++p) { add(p * h, (p + 1) * h); }
}

struct Grid
{
  std::vector<double> x, log_w; // log of quadrature weight times w(x)
  double              peak = neg_inf;
};

Grid make_grid(WeightSpec const &w, double L, int panels)
{
  double const alpha = w.potential.singularity_alpha;
  double const e     = w.potential.hard_edge ? alpha : 2.0 * alpha;
  Grid         g;
  std::vector<double> gw;
  add_side(g.x, gw, L, panels, e, 1.0);
  if (!w.potential.hard_edge) { add_side(g.x, gw, L, panels, e, -1.0); }
  g.log_w.resize(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    g.log_w[i] = std::log(gw[i]) + w.log_weight(g.x[i]);
    g.peak     = std::max(g.peak, g.log_w[i]);
  }
  if (!std::isfinite(g.peak)) { throw Underflow("recurrence_table: weight vanishes on the quadrature grid"); }
  return g;
}

// Mass of the top orthonormal vector beyond `edge`; large values mean the
// window cuts off the polynomial growth.
struct Built
{
  RecurrenceTable table;
  double          tail      = 0.0;
  bool            collapsed = false;
};

// Stieltjes on the orthonormal vectors v_k = sqrt(W) p_k. Each node keeps its
// own log scale, so a weight far below double range still pairs correctly
// with the polynomial growth it meets at high degree.
Built stieltjes(Grid const &g, int n_max, double edge)
{
  std::size_t const m = g.x.size();
  RecurrenceTable   t;
  t.n_max = n_max;
  t.a.assign(n_max + 1, 0.0);
  t.b.assign(n_max + 1, 0.0);
  t.log_gamma_sq.assign(n_max + 1, 0.0);

  double mass = 0.0;
  for (double lw : g.log_w) { mass += std::exp(lw - g.peak); }
  double const log_mass = std::log(mass) + g.peak;
  t.log_gamma_sq[0]     = log_mass;

  // v_k(i) = u(i) exp(s(i)); f(i) = exp(2 s(i))
  std::vector<double> prev(m, 0.0), cur(m, 1.0), next(m), s(m), f(m);
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = 0.5 * (g.log_w[i] - log_mass);
    f[i] = std::exp(2.0 * s[i]);
  }
  for (int k = 0; k <= n_max; ++k) {
    double bk = 0.0;
    for (std::size_t i = 0; i < m; ++i) { bk += g.x[i] * cur[i] * cur[i] * f[i]; }
    t.b[k] = bk;
    if (k == n_max) { break; }
    double const sa = std::sqrt(t.a[k]);
    double       norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = (g.x[i] - bk) * cur[i] - sa * prev[i];
      norm += next[i] * next[i] * f[i];
    }
    if (!(norm > 0.0) || !std::isfinite(norm)) { return {std::move(t), 1.0, true}; }
    t.a[k + 1]            = norm;
    t.log_gamma_sq[k + 1] = t.log_gamma_sq[k] + std::log(norm);
    double const inv      = 1.0 / std::sqrt(norm);
    for (std::size_t i = 0; i < m; ++i) { next[i] *= inv; }
    std::swap(prev, cur);
    std::swap(cur, next);
    if ((k + 1) % 8 == 0) {
      for (std::size_t i = 0; i < m; ++i) {
        double const big = std::max(std::abs(cur[i]), std::abs(prev[i]));
        if (big > 1e16 || (big > 0.0 && big < 1e-16)) {
          cur[i] /= big;
          prev[i] /= big;
          s[i] += std::log(big);
          f[i] = std::exp(2.0 * s[i]);
        }
      }
    }
  }
  double tail = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(g.x[i]) > edge) { tail += cur[i] * cur[i] * f[i]; }
  }
  return {std::move(t), tail, false};
}

double table_change(RecurrenceTable const &p, RecurrenceTable const &q)
{
  double worst = 0.0;
  for (int k = 0; k <= p.n_max; ++k) {
    if (k > 0) { worst = std::max(worst, std::abs(p.a[k] - q.a[k]) / q.a[k]); }
    double const s = std::max({std::abs(q.b[k]), std::sqrt(q.a[std::max(k, 1)]), 1e-300});
    worst          = std::max(worst, std::abs(p.b[k] - q.b[k]) / s);
  }
  return worst;
}

// Starting panel count per side: at most 8 oscillations of the top polynomial
// and a log-weight swing of at most 20 per panel where the weight matters.
int initial_panels(WeightSpec const &w, int n_max, double L)
{
  int const           m = 4000;
  double const        step = L / m;
  std::vector<double> lw;
  double              peak = neg_inf;
  for (double sign : {1.0, -1.0}) {
    if (sign < 0 && w.potential.hard_edge) { break; }
    for (int i = 1; i <= m; ++i) {
      lw.push_back(w.log_weight(sign * i * step));
      peak = std::max(peak, lw.back());
    }
  }
  double swing = 0.0;
  for (std::size_t i = 1; i < lw.size(); ++i) {
    if (i % m == 0 || !std::isfinite(lw[i]) || !std::isfinite(lw[i - 1])) { continue; }
    swing = std::max(swing, std::abs(lw[i] - lw[i - 1]));
  }
  int const by_weight = static_cast<int>(std::ceil(swing * m / 20));
  return std::clamp(std::max((n_max + 7) / 8, by_weight), 2, 4096);
}

Built build(WeightSpec const &w, int n_max, double L)
{
  int   panels = initial_panels(w, n_max, L);
  Built last   = stieltjes(make_grid(w, L, panels), n_max, 0.95 * L);
  if (last.collapsed || last.tail > tail_mass) { return last; }
  for (int d = 0; d < max_doublings; ++d) {
    panels *= 2;
    Built b = stieltjes(make_grid(w, L, panels), n_max, 0.95 * L);
    if (b.collapsed) { throw Underflow("recurrence_table: recurrence collapsed"); }
    double const change = table_change(b.table, last.table);
    last                = std::move(b);
    if (change <= stable_tol) { return last; }
  }
  throw NonConvergence("recurrence_table: coefficients not stable after " + std::to_string(max_doublings) +
                       " grid doublings");
}

// Scaled values of p_k and p_k' (without the weight): the true values are
// p[k] * exp(logs[k]).
struct PolyValues
{
  std::vector<double> p, dp, logs;
};

PolyValues evaluate_polys(RecurrenceTable const &t, double x, int count, bool derivatives)
{
  PolyValues r;
  r.p.assign(count, 0.0);
  r.logs.assign(count, 0.0);
  if (derivatives) { r.dp.assign(count, 0.0); }
  if (count == 0) { return r; }
  double log_cur = -0.5 * t.log_gamma_sq[0];
  double p0 = 1.0, p1 = 0.0, d0 = 0.0, d1 = 0.0; // p0 current, p1 previous
  r.p[0]    = 1.0;
  r.logs[0] = log_cur;
  for (int k = 0; k + 1 < count; ++k) {
    double const sa1 = std::sqrt(t.a[k + 1]);
    double const sa  = std::sqrt(t.a[k]);
    double const pn  = ((x - t.b[k]) * p0 - sa * p1) / sa1;
    double const dn  = derivatives ? ((x - t.b[k]) * d0 + p0 - sa * d1) / sa1 : 0.0;
    p1 = p0;
    p0 = pn;
    d1 = d0;
    d0 = dn;
    if ((k + 1) % 8 == 0) {
      double const s = std::max({std::abs(p0), std::abs(p1), std::abs(d0), std::abs(d1)});
      if (s > 0.0 && std::isfinite(s)) {
        p0 /= s;
        p1 /= s;
        d0 /= s;
        d1 /= s;
        log_cur += std::log(s);
      }
    }
    r.p[k + 1]    = p0;
    r.logs[k + 1] = log_cur;
    if (derivatives) { r.dp[k + 1] = d0; }
  }
  return r;
}

void check_order(RecurrenceTable const &t, int n, char const *who)
{
  if (n < 0 || n > t.n_max) { throw std::invalid_argument(std::string(who) + ": n exceeds the table"); }
}

} // namespace

double WeightSpec::log_weight(double x) const
{
  double const alpha = potential.singularity_alpha;
  double       lw    = -N * potential(x);
  if (potential.hard_edge) {
    if (x < 0.0) { return neg_inf; }
    if (alpha != 0.0) {
      if (x == 0.0) { return alpha > 0 ? neg_inf : std::numeric_limits<double>::infinity(); }
      lw += alpha * std::log(x);
    }
  } else if (alpha != 0.0) {
    if (x == 0.0) { return alpha > 0 ? neg_inf : std::numeric_limits<double>::infinity(); }
    lw += 2.0 * alpha * std::log(std::abs(x));
  }
  return lw;
}

double auto_truncation(WeightSpec const &w)
{
  double peak = neg_inf;
  for (int i = 1; i <= 400; ++i) {
    double const x = i / 200.0;
    peak           = std::max(peak, w.log_weight(x));
    if (!w.potential.hard_edge) { peak = std::max(peak, w.log_weight(-x)); }
  }
  auto tail = [&](double L) {
    double const lw = w.potential.hard_edge ? w.log_weight(L) : std::max(w.log_weight(L), w.log_weight(-L));
    return lw + 2.0 * std::abs(w.potential.singularity_alpha) * std::log1p(L);
  };
  for (double L = 0.05; L < 1e8; L *= 1.02) {
    if (!w.potential.hard_edge) { peak = std::max(peak, w.log_weight(-L)); }
    peak = std::max(peak, w.log_weight(L));
    if (tail(L) <= peak - tail_log && tail(1.02 * L) < tail(L)) { return L; }
  }
  throw std::invalid_argument("auto_truncation: weight does not decay");
}

RecurrenceTable recurrence_table(WeightSpec const &w, int n_max)
{
  if (n_max < 1 || n_max > 512) { throw std::invalid_argument("recurrence_table: n_max must be in [1, 512]"); }
  if (w.N < 1) { throw std::invalid_argument("recurrence_table: N must be positive"); }
  w.potential.validate();
  bool const automatic = w.truncation <= 0.0;
  double     L         = automatic ? auto_truncation(w) : w.truncation;
  for (int attempt = 0;; ++attempt) {
    try {
      Built b = build(w, n_max, L);
      if (b.collapsed || b.tail > tail_mass) {
        // the weight tail is fine but the degree-n polynomials reach further
        if (!automatic && b.collapsed) { throw Underflow("recurrence_table: recurrence collapsed"); }
        if (automatic && attempt < 40) {
          L *= 1.25;
          continue;
        }
      }
      RecurrenceTable t = std::move(b.table);
      t.N               = w.N;
      t.truncation      = L;
      t.gamma_sq.resize(n_max + 1);
      for (int k = 0; k <= n_max; ++k) {
        t.gamma_sq[k] = std::exp(t.log_gamma_sq[k]);
        if (!std::isnormal(t.gamma_sq[k])) {
          throw Underflow("recurrence_table: gamma^2 out of double range at k = " + std::to_string(k));
        }
      }
      return t;
    } catch (NonConvergence const &) {
      if (!automatic || attempt >= 40) { throw; }
      L *= 2.0;
    }
  }
}

std::vector<double> weighted_polys(RecurrenceTable const &t, WeightSpec const &w, double x, int n)
{
  check_order(t, n, "weighted_polys");
  std::vector<double> phi(n, 0.0);
  double const        half_lw = 0.5 * w.log_weight(x);
  if (half_lw == neg_inf) { return phi; }
  auto const v = evaluate_polys(t, x, n, false);
  for (int k = 0; k < n; ++k) { phi[k] = v.p[k] * std::exp(v.logs[k] + half_lw); }
  return phi;
}

double cd_kernel_sum(RecurrenceTable const &t, WeightSpec const &w, int n, double x, double y)
{
  auto const px = weighted_polys(t, w, x, n);
  auto const py = weighted_polys(t, w, y, n);
  double     s  = 0.0;
  for (int k = 0; k < n; ++k) { s += px[k] * py[k]; }
  return s;
}

double cd_kernel(RecurrenceTable const &t, WeightSpec const &w, int n, double x, double y)
{
  check_order(t, n, "cd_kernel");
  if (n == 0) { return 0.0; }
  double const lwx = w.log_weight(x), lwy = w.log_weight(y);
  if (lwx == neg_inf || lwy == neg_inf) { return 0.0; }
  double const san = std::sqrt(t.a[n]);

  if (std::abs(x - y) < 1e-7 * (1.0 + std::abs(x))) {
    double const m  = 0.5 * (x + y);
    auto const   v  = evaluate_polys(t, m, n + 1, true);
    double const lw = w.log_weight(m);
    // p_n' p_{n-1} - p_{n-1}' p_n, each product carrying its own scale
    double const t1 = v.dp[n] * v.p[n - 1] * std::exp(v.logs[n] + v.logs[n - 1] + lw);
    double const t2 = v.dp[n - 1] * v.p[n] * std::exp(v.logs[n - 1] + v.logs[n] + lw);
    return san * (t1 - t2);
  }

  auto const   vx = evaluate_polys(t, x, n + 1, false);
  auto const   vy = evaluate_polys(t, y, n + 1, false);
  double const lw = 0.5 * (lwx + lwy);
  double const t1 = vx.p[n] * vy.p[n - 1] * std::exp(vx.logs[n] + vy.logs[n - 1] + lw);
  double const t2 = vx.p[n - 1] * vy.p[n] * std::exp(vx.logs[n - 1] + vy.logs[n] + lw);
  return san * (t1 - t2) / (x - y);
}

double ScalingWindow::scale(int n) const
{
  bool const known = std::abs(exponent - 1.0) < 1e-12 || std::abs(exponent - 2.0 / 3.0) < 1e-12 ||
                     std::abs(exponent - 2.0) < 1e-12;
  if (!known) { throw std::invalid_argument("ScalingWindow: exponent must be 1, 2/3 or 2"); }
  return std::pow(c * n, exponent);
}

double soft_edge_constant(EquilibriumMeasure const &mu, bool right_edge)
{
  double const e = right_edge ? mu.b : mu.a;
  return poly::evaluate(mu.h, e) * std::sqrt(mu.b - mu.a);
}

double hard_edge_constant(EquilibriumMeasure const &mu)
{
  // rho(x) ~ C / sqrt(x) with C = h(0) sqrt(b) / pi, and c = 2 pi C
  return 2.0 * poly::evaluate(mu.h, 0.0) * std::sqrt(mu.b);
}

std::vector<double> rescaled_kernel(RecurrenceTable const &t, WeightSpec const &w, int n, ScalingWindow const &window)
{
  check_order(t, n, "rescaled_kernel");
  double const cn   = window.scale(n);
  double const sign = window.left_edge ? -1.0 : 1.0;
  double const lo   = w.potential.hard_edge ? 0.0 : -t.truncation;
  double const hi   = t.truncation;
  auto         at   = [&](double s) {
    double const x = window.center + sign * s / cn;
    if (x < lo || x > hi) { throw std::out_of_range("rescaled_kernel: window leaves the truncation interval"); }
    return x;
  };
  std::vector<double> out;
  out.reserve(window.u.size() * window.v.size());
  for (double u : window.u) {
    double const x = at(u);
    for (double v : window.v) { out.push_back(cd_kernel(t, w, n, x, at(v)) / cn); }
  }
  return out;
}

} // namespace rmt
