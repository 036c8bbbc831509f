#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace rmt {

// Largest |A + A^T| entry, relative to the largest |A| entry.
template <typename Derived> auto skew_defect(Eigen::MatrixBase<Derived> const &a)
{
  using std::abs;
  auto const scale = a.cwiseAbs().maxCoeff();
  auto const defect = (a + a.transpose()).cwiseAbs().maxCoeff();
  return scale > 0 ? defect / scale : defect;
}

namespace detail {

template <typename Matrix> typename Matrix::Scalar pfaffian_expand(Matrix const &a)
{
  using Scalar      = typename Matrix::Scalar;
  Eigen::Index const n = a.rows();
  if (n == 0) { return Scalar(1); }
  if (n == 2) { return a(0, 1); }
  Scalar sum(0);
  for (Eigen::Index j = 1; j < n; ++j) {
    if (a(0, j) == Scalar(0)) { continue; }
    // minor without rows/cols 0 and j
    Matrix m(n - 2, n - 2);
    for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
      if (r == 0 || r == j) { continue; }
      for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
        if (c == 0 || c == j) { continue; }
        m(rr, cc++) = a(r, c);
      }
      ++rr;
    }
    Scalar const sign = (j % 2 == 1) ? Scalar(1) : Scalar(-1);
    sum += sign * a(0, j) * pfaffian_expand(m);
  }
  return sum;
}

// Parlett-Reid reduction to skew-tridiagonal form with pivoting.
template <typename Matrix> typename Matrix::Scalar pfaffian_reduce(Matrix a)
{
  using Scalar = typename Matrix::Scalar;
  using std::abs;
  Eigen::Index const n = a.rows();
  Scalar             pf(1);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index p = k + 1;
    auto         best = abs(a(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (abs(a(i, k)) > best) {
        best = abs(a(i, k));
        p    = i;
      }
    }
    if (p != k + 1) {
      a.row(k + 1).swap(a.row(p));
      a.col(k + 1).swap(a.col(p));
      pf = -pf;
    }
    if (a(k + 1, k) == Scalar(0)) { return Scalar(0); }
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      Eigen::Index const rest = n - k - 2;
      // Gauss vector tau_i = a(i,k)/a(k+1,k)
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau = a.col(k).tail(rest) / a(k + 1, k);
      // rows and columns i >= k+2 minus tau_i times row/column k+1
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row = a.row(k + 1).tail(rest).transpose();
      a.bottomRightCorner(rest, rest) += row * tau.transpose() - tau * row.transpose();
    }
  }
  return pf;
}

} // namespace detail

/// Pfaffian of a skew-symmetric matrix of even order. Orders up to 8 use cofactor
/// expansion along the first row; larger orders use Parlett-Reid elimination.
template <typename Derived> typename Derived::Scalar pfaffian(Eigen::MatrixBase<Derived> const &a)
{
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != a.cols()) { throw std::invalid_argument("pfaffian: matrix must be square"); }
  if (a.rows() % 2 != 0) { return Scalar(0); }
  Matrix const m = a;
  if (m.rows() <= 8) { return detail::pfaffian_expand(m); }
  return detail::pfaffian_reduce(m);
}

// Force the reduction path regardless of size; used to cross-check the expansion.
template <typename Derived> typename Derived::Scalar pfaffian_parlett_reid(Eigen::MatrixBase<Derived> const &a)
{
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return detail::pfaffian_reduce(Matrix(a));
}

} // namespace rmt
