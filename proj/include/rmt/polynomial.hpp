#pragma once

#include <complex>
#include <vector>

// Dense real polynomials stored by ascending degree.
namespace rmt::poly {

using Poly = std::vector<double>;

double evaluate(Poly const &p, double x);
std::complex<double> evaluate(Poly const &p, std::complex<double> z);

Poly derivative(Poly const &p);
Poly add(Poly const &a, Poly const &b);
Poly subtract(Poly const &a, Poly const &b);
Poly multiply(Poly const &a, Poly const &b);
Poly scale(Poly p, double s);
// Drop leading coefficients with |c| <= tol * max|c|.
Poly trim(Poly p, double tol = 0.0);
int  degree(Poly const &p); // -1 for the zero polynomial

// Quotient of p by q; the remainder is discarded.
Poly divide(Poly const &p, Poly const &q, Poly *remainder = nullptr);

// Complex roots from the companion matrix.
std::vector<std::complex<double>> roots(Poly const &p);

// h with h*h ~ p and positive leading coefficient, matched from the top
// coefficient down. p must have even degree and positive leading coefficient.
Poly square_root(Poly const &p);

} // namespace rmt::poly
