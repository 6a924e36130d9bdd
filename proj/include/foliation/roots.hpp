#pragma once

// Univariate roots: numeric (companion matrix + Newton) and exact
// recognition of Gaussian-rational roots.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "foliation/scalar.hpp"

namespace foliation {

// Exact univariate polynomial, ascending coefficients.
using UPoly = std::vector<GaussianRational>;

int degree(const UPoly& p);
GaussianRational evaluate(const UPoly& p, const GaussianRational& z);
std::complex<double> evaluate(const UPoly& p, std::complex<double> z);
UPoly derivative(const UPoly& p);

// Roots with multiplicity, eigenvalues of the companion matrix refined by
// Newton iteration (stops at |step| <= 1e-12 |z| or 50 iterations).
std::vector<std::complex<double>> numeric_roots(const UPoly& p);

// Closest rational with denominator <= max_den (continued fractions),
// accepted when within tol of x.
std::optional<Rational> recognize_rational(double x, long max_den = 1000000, double tol = 1e-9);
std::optional<GaussianRational> recognize_gaussian(std::complex<double> z, long max_den = 1000000, double tol = 1e-9);

struct UnivariateRoot {
    std::complex<double> value;
    // Set when the recognized Gaussian rational is an exact root.
    std::optional<GaussianRational> exact;
};

// Distinct roots (numeric clusters merged), exact where possible.
std::vector<UnivariateRoot> roots(const UPoly& p);

}  // namespace foliation
