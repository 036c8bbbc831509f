#include "rmt/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmt::poly {

double evaluate(Poly const &p, double x)
{
  double r = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) { r = r * x + *it; }
  return r;
}

std::complex<double> evaluate(Poly const &p, std::complex<double> z)
{
  std::complex<double> r = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) { r = r * z + *it; }
  return r;
}

Poly derivative(Poly const &p)
{
  if (p.size() <= 1) { return {0.0}; }
  Poly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) { d[k - 1] = static_cast<double>(k) * p[k]; }
  return d;
}

Poly add(Poly const &a, Poly const &b)
{
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) { r[i] += a[i]; }
  for (std::size_t i = 0; i < b.size(); ++i) { r[i] += b[i]; }
  return r;
}

Poly subtract(Poly const &a, Poly const &b) { return add(a, scale(b, -1.0)); }

Poly multiply(Poly const &a, Poly const &b)
{
  if (a.empty() || b.empty()) { return {}; }
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) { r[i + j] += a[i] * b[j]; }
  }
  return r;
}

Poly scale(Poly p, double s)
{
  for (auto &c : p) { c *= s; }
  return p;
}

Poly trim(Poly p, double tol)
{
  double big = 0.0;
  for (double c : p) { big = std::max(big, std::abs(c)); }
  while (!p.empty() && std::abs(p.back()) <= tol * big) { p.pop_back(); }
  return p;
}

int degree(Poly const &p)
{
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
    if (p[k] != 0.0) { return k; }
  }
  return -1;
}

Poly divide(Poly const &p, Poly const &q, Poly *remainder)
{
  int const dq = degree(q);
  if (dq < 0) { throw std::domain_error("poly::divide: division by zero polynomial"); }
  Poly      r  = p;
  int const dp = degree(p);
  if (dp < dq) {
    if (remainder) { *remainder = r; }
    return {0.0};
  }
  Poly quot(dp - dq + 1, 0.0);
  for (int k = dp - dq; k >= 0; --k) {
    double const c = r[k + dq] / q[dq];
    quot[k]        = c;
    for (int j = 0; j <= dq; ++j) { r[k + j] -= c * q[j]; }
  }
  if (remainder) {
    r.resize(std::max(dq, 1));
    *remainder = r;
  }
  return quot;
}

std::vector<std::complex<double>> roots(Poly const &p)
{
  int const n = degree(p);
  if (n < 1) { return {}; }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) { c(i, i - 1) = 1.0; }
  for (int i = 0; i < n; ++i) { c(i, n - 1) = -p[i] / p[n]; }
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>>   out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.begin(), out.end(), [](auto const &a, auto const &b) { return a.real() < b.real(); });
  return out;
}

Poly square_root(Poly const &p)
{
  int const n = degree(p);
  if (n < 0 || n % 2 != 0 || p[n] <= 0.0) {
    throw std::domain_error("poly::square_root: need even degree and positive leading coefficient");
  }
  int const m = n / 2;
  Poly      h(m + 1, 0.0);
  h[m] = std::sqrt(p[n]);
  // coefficient of x^{m+k} in h^2 fixes h[k], from the top down
  for (int k = m - 1; k >= 0; --k) {
    double s = 0.0;
    for (int i = k + 1; i <= m; ++i) {
      int const j = m + k - i;
      if (j > k && j <= m) { s += h[i] * h[j]; }
    }
    h[k] = (p[m + k] - s) / (2.0 * h[m]);
  }
  return h;
}

} // namespace rmt::poly
