#pragma once

// Differential k-forms (k <= 3) with truncated power series coefficients.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foliation/series.hpp"

namespace foliation {

inline constexpr int kMaxFormDegree = 3;

// Strictly increasing 0-based variable indices (i1 < ... < ik).
using Basis = std::vector<int>;

class KForm {
public:
    KForm(int degree, int nvars, int order, Field field = Field::rational);

    static KForm function(const TruncatedSeries& f);
    // sum_i components[i] dx_i; all components share nvars and field.
    static KForm one_form(std::span<const TruncatedSeries> components);
    // c dx_{basis}
    static KForm basis_form(const Basis& basis, const TruncatedSeries& c);

    int degree() const noexcept { return degree_; }
    int nvars() const noexcept { return nvars_; }
    int order() const noexcept { return order_; }
    Field field() const noexcept { return field_; }

    const std::map<Basis, TruncatedSeries>& coefficients() const noexcept { return coeffs_; }
    TruncatedSeries coefficient(const Basis& basis) const;
    // Coefficient of dx_i for a 1-form; the function itself for a 0-form.
    TruncatedSeries component(int i) const;
    std::vector<TruncatedSeries> components() const;
    // Coefficients sorted into strictly increasing basis order; the basis
    // may be given in any order, with the permutation sign applied.
    void add(Basis basis, const TruncatedSeries& c);

    bool is_zero() const noexcept { return coeffs_.empty(); }
    KForm truncate(int order) const;
    KForm complexify() const;
    KForm homogeneous_part(int degree) const;
    std::optional<int> valuation() const noexcept;

    KForm operator-() const;
    KForm& operator+=(const KForm& o);
    KForm& operator-=(const KForm& o);
    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend bool operator==(const KForm& a, const KForm& b);
    friend bool operator!=(const KForm& a, const KForm& b) { return !(a == b); }

    std::string str(std::span<const std::string> names = {}) const;

private:
    void check_compatible(const KForm& o) const;

    int degree_;
    int nvars_;
    int order_;
    Field field_;
    std::map<Basis, TruncatedSeries> coeffs_;
};

// f * a, coefficient-wise series product.
KForm multiply(const TruncatedSeries& f, const KForm& a);
KForm scale(const KForm& a, const Scalar& c);

KForm exterior_derivative(const KForm& a);
KForm wedge(const KForm& a, const KForm& b);
// w ^ dw, truncated at order(w) - 1.
KForm integrability_residual(const KForm& omega);
// Interior product with the Euler field R = sum x_j d/dx_j.
KForm euler_contract(const KForm& a);

struct HomogeneousDecomposition {
    // (degree m, part with all coefficient monomials of degree exactly m),
    // ascending m, nonzero parts only.
    std::vector<std::pair<int, KForm>> parts;
    // Lowest degree present; empty for the zero form.
    std::optional<int> leading_index;

    const KForm* part(int degree) const;
};

HomogeneousDecomposition homogeneous_parts(const KForm& a);

struct DivisionResult {
    TruncatedSeries quotient;
    TruncatedSeries remainder;
};

// Multivariate division by a single homogeneous divisor, pure
// lexicographic order x1 > x2 > ... . The remainder is zero iff P divides a
// (a single polynomial is a Groebner basis of its ideal).
DivisionResult divide(const TruncatedSeries& a, const TruncatedSeries& divisor);

// Coefficient-wise remainder of a modulo P.
KForm divisibility_residual(const KForm& a, const TruncatedSeries& divisor);

// Pullback of a form under x = images(y). Images must have zero constant
// term unless `options` allows otherwise.
KForm pullback(const KForm& a, std::span<const TruncatedSeries> images, const SubstituteOptions& options = {});

// Evaluate a 1-form at a point: the complex covector (a_1(p), ..., a_n(p)).
std::vector<std::complex<double>> evaluate(const KForm& one_form, std::span<const std::complex<double>> point);

}  // namespace foliation
