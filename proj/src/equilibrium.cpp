#include "rmt/equilibrium.hpp"

#include "rmt/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;

struct Interval
{
  double a, b;
};

// Real breakpoints of p: real parts of roots close to the axis. Multiple roots
// come out of the companion matrix as small clusters, possibly complex.
std::vector<double> breakpoints(poly::Poly const &p)
{
  std::vector<double> out;
  for (auto const &r : poly::roots(p)) {
    if (std::abs(r.imag()) <= 1e-3 * (1.0 + std::abs(r.real()))) { out.push_back(r.real()); }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double polish_root(poly::Poly const &p, double x)
{
  auto const dp = poly::derivative(p);
  for (int i = 0; i < 20; ++i) {
    double const f  = poly::evaluate(p, x);
    double const df = poly::evaluate(dp, x);
    if (df == 0.0) { break; }
    double const step = f / df;
    if (std::abs(step) > 1e-3 * (1.0 + std::abs(x))) { break; } // not a simple root
    x -= step;
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) { break; }
  }
  return x;
}

// Maximal intervals where the polynomial is negative. Segments on which it is
// zero to rounding (between the members of a root cluster) do not separate
// intervals. At a hard edge only x > 0 is scanned and 0 is a breakpoint.
std::vector<Interval> negativity_intervals(poly::Poly const &p, bool hard)
{
  auto bp = breakpoints(p);
  if (hard) {
    bp.erase(std::remove_if(bp.begin(), bp.end(), [](double x) { return x <= 0.0; }), bp.end());
    bp.insert(bp.begin(), 0.0);
  }
  if (bp.size() < 2) { return {}; }

  double scale = 0.0;
  for (int i = 0; i <= 400; ++i) {
    scale = std::max(scale, std::abs(poly::evaluate(p, bp.front() + (bp.back() - bp.front()) * i / 400.0)));
  }
  double const tol = 1e-11 * scale;

  enum class Sign { Neg, Pos, Zero };
  std::vector<Sign> sign;
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 9; ++i) {
      double const t = 0.5 - 0.5 * std::cos(kPi * (i + 0.5) / 9.0);
      double const v = poly::evaluate(p, bp[s] + (bp[s + 1] - bp[s]) * t);
      lo             = std::min(lo, v);
      hi             = std::max(hi, v);
    }
    sign.push_back(hi > tol ? Sign::Pos : lo < -tol ? Sign::Neg : Sign::Zero);
  }

  std::vector<Interval> out;
  std::size_t           s = 0;
  while (s < sign.size()) {
    if (sign[s] != Sign::Neg) {
      ++s;
      continue;
    }
    std::size_t e = s, last = s;
    while (e < sign.size() && sign[e] != Sign::Pos) {
      if (sign[e] == Sign::Neg) { last = e; }
      ++e;
    }
    double a = bp[s], b = bp[last + 1];
    if (!(hard && a == 0.0)) { a = polish_root(p, a); }
    b = polish_root(p, b);
    out.push_back({a, b});
    s = e;
  }
  return out;
}

constexpr int kMomentNodes = 2048;

// Moments 0..K of (1/pi) sqrt(-q) over the negativity intervals of q (x q at a hard edge).
std::vector<double> density_moments(poly::Poly const &p, bool hard, int K, std::vector<Interval> const &intervals)
{
  std::vector<double> mu(K + 1, 0.0);
  for (auto const &iv : intervals) {
    bool const       hard_left = hard && iv.a == 0.0;
    poly::Poly const g         = hard_left ? poly::divide(p, {-iv.b, 1.0}) : poly::divide(p, {iv.a * iv.b, -(iv.a + iv.b), 1.0});
    double const     c = 0.5 * (iv.a + iv.b), r = 0.5 * (iv.b - iv.a);
    for (int i = 0; i < kMomentNodes; ++i) {
      double const th = kPi * (i + 0.5) / kMomentNodes;
      double       x, w, gx;
      if (hard_left) {
        x  = 0.5 * iv.b * (1.0 - std::cos(th));
        w  = 0.5 * iv.b * (1.0 + std::cos(th));
        gx = poly::evaluate(g, x);
      } else {
        x  = c + r * std::cos(th);
        w  = r * r * std::sin(th) * std::sin(th);
        gx = poly::evaluate(g, x);
        if (hard) { gx /= x; } // g came from x q
      }
      // (1/pi) sqrt(g) w dtheta with dtheta = pi / n
      double f = std::sqrt(std::max(gx, 0.0)) * w / kMomentNodes;
      for (int k = 0; k <= K; ++k) {
        mu[k] += f;
        f *= x;
      }
    }
  }
  return mu;
}

int moment_count(Potential const &V) { return V.hard_edge ? V.degree() : V.degree() - 1; }

// Log potential \int log|x - y| rho(y) dy of the measure.
double log_integral(EquilibriumMeasure const &mu, double x)
{
  boost::math::quadrature::tanh_sinh<double> ts(12);
  auto const f = [&](double y) {
    double const d = std::abs(x - y);
    return d == 0.0 ? 0.0 : std::log(d) * density_h(mu, y);
  };
  double sum = 0.0;
  if (x > mu.a && x < mu.b) {
    sum = ts.integrate(f, mu.a, x) + ts.integrate(f, x, mu.b);
  } else {
    sum = ts.integrate(f, mu.a, mu.b);
  }
  return sum;
}

std::vector<double> grid_moments(DiscreteMeasure const &d, int K)
{
  std::vector<double> m(K + 1, 0.0);
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    double p = d.weights[i];
    for (int k = 0; k <= K; ++k) {
      m[k] += p;
      p *= d.nodes[i];
    }
  }
  return m;
}

// Seed moments from a coarse grid minimization, widening the window until the
// minimizer stays clear of its edges.
std::vector<double> seed_moments(Potential const &V, int K)
{
  double L = 2.0;
  for (int attempt = 0; attempt < 12; ++attempt, L *= 2.0) {
    double const lo = V.hard_edge ? 0.0 : -L;
    auto const   d  = grid_energy_minimize(V, 200, lo, L);
    double       outer = 0.0;
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
      bool const right = d.nodes[i] > L - 0.1 * (L - lo);
      bool const left  = !V.hard_edge && d.nodes[i] < lo + 0.1 * (L - lo);
      if (right || left) { outer += d.weights[i]; }
    }
    if (outer < 1e-9) { return grid_moments(d, K); }
  }
  throw NonConvergence("solve_equilibrium: could not bracket the support");
}

} // namespace

double Potential::derivative(double x) const { return poly::evaluate(poly::derivative(coefficients), x); }

void Potential::validate() const
{
  int const d = degree();
  if (d < 1) { throw std::invalid_argument("Potential: constant potential"); }
  if (coefficients[d] <= 0.0) { throw std::invalid_argument("Potential: leading coefficient must be positive"); }
  if (!hard_edge) {
    if (d % 2 != 0) { throw std::invalid_argument("Potential: degree must be even"); }
    if (singularity_alpha < 0.0) { throw std::invalid_argument("Potential: singularity exponent must be >= 0"); }
    return;
  }
  if (singularity_alpha <= -1.0) { throw std::invalid_argument("Potential: hard-edge exponent must exceed -1"); }
  auto const dv = poly::derivative(coefficients);
  if (poly::evaluate(dv, 0.0) <= 0.0) { throw std::invalid_argument("Potential: V' must be positive on [0, inf)"); }
  for (auto const &r : poly::roots(dv)) {
    if (r.real() >= 0.0 && std::abs(r.imag()) < 1e-9 * (1.0 + std::abs(r.real()))) {
      throw std::invalid_argument("Potential: V' must be positive on [0, inf)");
    }
  }
}

poly::Poly qv_polynomial(Potential const &V, std::vector<double> const &m)
{
  auto const dv = poly::derivative(V.coefficients);
  auto       q  = poly::scale(poly::multiply(dv, dv), 0.25);
  // \int (V'(x) - V'(s)) / (x - s) dmu(s) = sum_j v_j sum_{i<j} x^i m_{j-1-i}
  poly::Poly dd(std::max<std::size_t>(dv.size(), 1), 0.0);
  for (std::size_t j = 1; j < dv.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) { dd[i] += dv[j] * m.at(j - 1 - i); }
  }
  q = poly::subtract(q, dd);
  if (!V.hard_edge) { return q; }
  double c = 0.0; // \int V' dmu
  for (std::size_t j = 0; j < dv.size(); ++j) { c += dv[j] * m.at(j); }
  auto xq = poly::multiply(q, {0.0, 1.0});
  xq[0] -= c;
  return xq;
}

EquilibriumMeasure solve_equilibrium(Potential const &V)
{
  V.validate();
  int const K = moment_count(V);

  auto map = [&](std::vector<double> const &m, std::vector<Interval> *ivs = nullptr) {
    auto const p  = qv_polynomial(V, m);
    auto const iv = negativity_intervals(p, V.hard_edge);
    if (ivs) { *ivs = iv; }
    return density_moments(p, V.hard_edge, K, iv);
  };

  std::vector<double> m = seed_moments(V, K);
  m[0]                  = 1.0;
  int iterations        = 0;
  // damped fixed point
  for (; iterations < 500; ++iterations) {
    auto const          mu = map(m);
    std::vector<double> next(K + 1);
    double              change = 0.0;
    for (int k = 0; k <= K; ++k) {
      next[k] = k == 0 ? 1.0 : 0.5 * m[k] + 0.5 * mu[k];
      change  = std::max(change, std::abs(next[k] - m[k]));
    }
    m = next;
    if (change < 1e-14) { break; }
  }

  // Gauss-Newton polish on (mu_0 - 1, mu_k - m_k); it takes over where the
  // fixed point is slow, e.g. near critical potentials
  auto residual = [&](std::vector<double> const &mm) {
    auto const      mu = map(mm);
    Eigen::VectorXd r(K + 1);
    r(0) = mu[0] - 1.0;
    for (int k = 1; k <= K; ++k) { r(k) = mu[k] - mm[k]; }
    return r;
  };
  Eigen::VectorXd r = residual(m);
  for (int it = 0; it < 60 && K > 0 && r.lpNorm<Eigen::Infinity>() > 1e-15; ++it, ++iterations) {
    Eigen::MatrixXd J(K + 1, K);
    for (int k = 1; k <= K; ++k) {
      auto         mp = m;
      double const hk = 1e-7 * (1.0 + std::abs(m[k]));
      mp[k] += hk;
      J.col(k - 1) = (residual(mp) - r) / hk;
    }
    Eigen::VectorXd const step = J.colPivHouseholderQr().solve(-r);
    double                t    = 1.0;
    bool                  moved = false;
    for (int ls = 0; ls < 12; ++ls, t *= 0.5) {
      auto trial = m;
      for (int k = 1; k <= K; ++k) { trial[k] += t * step(k - 1); }
      Eigen::VectorXd const rt = residual(trial);
      if (rt.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>()) {
        m     = trial;
        r     = rt;
        moved = true;
        break;
      }
    }
    if (!moved) { break; }
  }
  if (!(r.lpNorm<Eigen::Infinity>() <= 1e-10)) {
    throw NonConvergence("solve_equilibrium: moment iteration did not converge");
  }

  std::vector<Interval> ivs;
  map(m, &ivs);
  if (ivs.size() > 1) {
    throw MultiCutError(static_cast<int>(ivs.size()),
                        "solve_equilibrium: q_V has " + std::to_string(ivs.size()) + " negativity intervals");
  }
  if (ivs.empty()) { throw NonConvergence("solve_equilibrium: empty support"); }

  EquilibriumMeasure mu;
  mu.potential  = V;
  mu.a          = ivs[0].a;
  mu.b          = ivs[0].b;
  mu.moments    = m;
  mu.iterations = iterations;
  auto const p  = qv_polynomial(V, m);
  auto const g  = V.hard_edge ? poly::divide(p, {-mu.b, 1.0}) : poly::divide(p, {mu.a * mu.b, -(mu.a + mu.b), 1.0});
  mu.h          = poly::square_root(poly::trim(g, 1e-14));
  double const x = 0.5 * (mu.a + mu.b);
  mu.ell         = V(x) - 2.0 * log_integral(mu, x);
  return mu;
}

double qv(Potential const &V, EquilibriumMeasure const &mu, double x)
{
  auto const p = qv_polynomial(V, mu.moments);
  if (!V.hard_edge) { return poly::evaluate(p, x); }
  if (x == 0.0) { throw std::domain_error("qv: pole at the hard edge"); }
  return poly::evaluate(p, x) / x;
}

double density(EquilibriumMeasure const &mu, double x)
{
  if (x < mu.a || x > mu.b || (mu.potential.hard_edge && x <= 0.0)) { return 0.0; }
  return std::sqrt(std::max(-qv(mu.potential, mu, x), 0.0)) / kPi;
}

double density_h(EquilibriumMeasure const &mu, double x)
{
  if (x < mu.a || x > mu.b) { return 0.0; }
  double const h = std::max(poly::evaluate(mu.h, x), 0.0);
  if (mu.potential.hard_edge) {
    if (x <= 0.0) { return 0.0; }
    return h * std::sqrt((mu.b - x) / x) / kPi;
  }
  return h * std::sqrt((mu.b - x) * (x - mu.a)) / kPi;
}

double effective_potential(EquilibriumMeasure const &mu, Potential const &V, double x)
{
  return V(x) - 2.0 * log_integral(mu, x) - mu.ell;
}

char const *to_string(SingularType t)
{
  switch (t) {
  case SingularType::InteriorSingular: return "interior";
  case SingularType::SingularEdge: return "edge";
  case SingularType::ExteriorSingular: return "exterior";
  }
  return "unknown";
}

std::vector<SingularPoint> classify(EquilibriumMeasure const &mu, Potential const &V)
{
  std::vector<SingularPoint> out;
  if (poly::degree(mu.h) < 0) { return out; }

  double scale = 0.0;
  for (int i = 0; i <= 200; ++i) {
    scale = std::max(scale, std::abs(poly::evaluate(mu.h, mu.a + (mu.b - mu.a) * i / 200.0)));
  }
  double const tol = 1e-9 * scale;

  // cluster the near-real roots of h
  struct Cluster
  {
    double x;
    int    count;
  };
  std::vector<Cluster> clusters;
  for (auto const &r : poly::roots(mu.h)) {
    if (std::abs(r.imag()) > 1e-4 * (1.0 + std::abs(r.real()))) { continue; }
    if (!clusters.empty() && std::abs(r.real() - clusters.back().x) < 1e-4 * (1.0 + std::abs(r.real()))) {
      auto &c = clusters.back();
      c.x     = (c.x * c.count + r.real()) / (c.count + 1);
      ++c.count;
    } else {
      clusters.push_back({r.real(), 1});
    }
  }

  double const width = mu.b - mu.a;
  boost::math::quadrature::tanh_sinh<double> ts(12);
  for (auto const &c : clusters) {
    if (std::abs(poly::evaluate(mu.h, c.x)) > tol && c.x >= mu.a && c.x <= mu.b) { continue; }
    bool const at_a = std::abs(c.x - mu.a) < 1e-6 * width;
    bool const at_b = std::abs(c.x - mu.b) < 1e-6 * width;
    if (at_b || (at_a && !V.hard_edge)) {
      out.push_back({at_b ? mu.b : mu.a, SingularType::SingularEdge, c.count});
    } else if (c.x > mu.a && c.x < mu.b) {
      out.push_back({c.x, SingularType::InteriorSingular, c.count / 2});
    } else {
      // E' = 2 h sqrt((x-a)(x-b)) outside the support (sqrt((x-b)/x) at a hard edge)
      auto const root = [&](double t) {
        if (V.hard_edge) { return std::sqrt(std::max((t - mu.b) / t, 0.0)); }
        return std::sqrt(std::max((t - mu.a) * (t - mu.b), 0.0));
      };
      auto const f = [&](double t) { return 2.0 * poly::evaluate(mu.h, t) * root(t); };
      double     e;
      if (c.x > mu.b) {
        e = ts.integrate(f, mu.b, c.x);
      } else if (!V.hard_edge) {
        e = ts.integrate(f, c.x, mu.a);
      } else {
        continue;
      }
      if (std::abs(e) < 1e-8) { out.push_back({c.x, SingularType::ExteriorSingular, c.count}); }
    }
  }
  return out;
}

DiscreteMeasure grid_energy_minimize(Potential const &V, int n, double lo, double hi)
{
  if (n < 2 || n > 2000) { throw std::invalid_argument("grid_energy_minimize: grid size must be in [2, 2000]"); }
  if (!(hi > lo)) { throw std::invalid_argument("grid_energy_minimize: empty window"); }

  DiscreteMeasure out;
  double const    dx = (hi - lo) / n;
  out.spacing       = dx;
  // Piecewise-constant density on the cells: V is cell-averaged and the
  // interaction is the exact cell-cell average of -log|x - y|.
  auto const     &gl = gauss_legendre(8);
  Eigen::VectorXd x(n), v(n);
  for (int i = 0; i < n; ++i) {
    x(i) = lo + (i + 0.5) * dx;
    v(i) = 0.0;
    for (Eigen::Index k = 0; k < gl.nodes.size(); ++k) { v(i) += 0.5 * gl.weights(k) * V(x(i) + 0.5 * dx * gl.nodes(k)); }
  }
  // second antiderivative of log|u|
  auto G = [](double u) {
    u = std::abs(u);
    return u > 0.0 ? 0.5 * u * u * std::log(u) - 0.75 * u * u : 0.0;
  };
  Eigen::VectorXd cell(n);
  for (int k = 0; k < n; ++k) {
    double const d = k * dx;
    cell(k)        = -(G(d + dx) - 2.0 * G(d) + G(d - dx)) / (dx * dx);
  }
  Eigen::MatrixXd L(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) { L(i, j) = cell(std::abs(i - j)); }
  }
  auto energy = [&](Eigen::VectorXd const &w) { return w.dot(L * w) + v.dot(w); };

  // Euclidean projection onto the probability simplex
  auto project = [n](Eigen::VectorXd y) {
    std::vector<double> s(y.data(), y.data() + n);
    std::sort(s.begin(), s.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (int k = 0; k < n; ++k) {
      cum += s[k];
      double const t = (cum - 1.0) / (k + 1);
      if (s[k] - t > 0.0) { theta = t; }
    }
    return Eigen::VectorXd((y.array() - theta).max(0.0));
  };

  // step from the spectral radius of 2L
  Eigen::VectorXd z = Eigen::VectorXd::Ones(n).normalized();
  double          lip = 0.0;
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd const y = L * z;
    lip                     = y.norm();
    z                       = y / lip;
  }
  double const step = 1.0 / (2.0 * lip);

  // monotone accelerated projected gradient
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n), yv = w, wprev = w;
  double          e = energy(w), t = 1.0;
  out.energy_history.push_back(e);
  int it = 0;
  for (; it < 400; ++it) {
    Eigen::VectorXd const zc = project(yv - step * (2.0 * L * yv + v));
    double const          ez = energy(zc);
    double const          tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    wprev                    = w;
    if (ez <= e) {
      w = zc;
      e = ez;
      out.energy_history.push_back(e);
    }
    yv = w + (t / tn) * (zc - w) + ((t - 1.0) / tn) * (w - wprev);
    t  = tn;
    if ((w - wprev).norm() < 1e-13 && ez <= e) { break; }
  }

  // active-set refinement: exact minimizer on the current support, adding
  // and dropping nodes until the KKT conditions hold
  std::vector<char> active(n);
  for (int i = 0; i < n; ++i) { active[i] = w(i) > 1e-12; }
  bool converged = false;
  for (int round = 0; round < 200; ++round, ++it) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (active[i]) { idx.push_back(i); }
    }
    int const       m = static_cast<int>(idx.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs(m + 1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) { A(i, j) = 2.0 * L(idx[i], idx[j]); }
      A(i, m) = -1.0;
      A(m, i) = 1.0;
      rhs(i)  = -v(idx[i]);
    }
    rhs(m)                     = 1.0;
    Eigen::VectorXd const sol  = A.partialPivLu().solve(rhs);
    Eigen::VectorXd       cand = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) { cand(idx[i]) = sol(i); }
    double const ell = sol(m);

    bool changed = false;
    for (int i = 0; i < m; ++i) {
      if (sol(i) < -1e-15) {
        active[idx[i]] = 0;
        changed        = true;
      }
    }
    if (!changed) {
      double const ec = energy(cand);
      if (ec <= e + 1e-15 * std::abs(e)) {
        w = cand;
        e = ec;
        out.energy_history.push_back(e);
      }
      Eigen::VectorXd const g = 2.0 * L * cand + v;
      for (int i = 0; i < n; ++i) {
        if (!active[i] && g(i) - ell < -1e-12) {
          active[i] = 1;
          changed   = true;
        }
      }
      if (!changed) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) { throw NonConvergence("grid_energy_minimize: iteration budget exhausted"); }

  out.nodes.assign(x.data(), x.data() + n);
  out.weights.assign(w.data(), w.data() + n);
  out.energy     = e;
  out.iterations = it;
  return out;
}

} // namespace rmt
