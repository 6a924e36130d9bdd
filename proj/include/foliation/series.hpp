#pragma once

// Graded truncated multivariate power series with exact coefficients.
//
// A series in n variables of order N stores, for every total degree
// m in [0, N], the nonzero terms of its homogeneous part of degree m as a
// vector sorted by descending lexicographic MultiIndex. Terms of degree
// above N are unknown, not zero: arithmetic never produces coefficients
// beyond the order the inputs determine.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foliation/multi_index.hpp"
#include "foliation/scalar.hpp"

namespace foliation {

inline constexpr int kDefaultOrder = 10;
inline constexpr int kMaxUserOrder = 24;
// Internal limit (blow-up pullbacks double degrees); bounded by exponent packing.
inline constexpr int kMaxInternalOrder = kMaxExponent;

// Throws PreconditionError unless 0 <= order <= kMaxUserOrder.
void check_user_order(int order);

using Scalar = GaussianRational;

struct Term {
    MultiIndex index;
    Scalar coeff;
};

using Bucket = std::vector<Term>;

class TruncatedSeries {
public:
    TruncatedSeries(int nvars, int order, Field field = Field::rational);

    static TruncatedSeries constant(int nvars, int order, const Scalar& c, Field field = Field::rational);
    // x_var, 0-based variable index.
    static TruncatedSeries variable(int nvars, int order, int var, Field field = Field::rational);
    static TruncatedSeries monomial(int nvars, int order, const MultiIndex& idx, const Scalar& c,
                                    Field field = Field::rational);
    // Terms of degree > order are dropped; repeated indices are summed.
    static TruncatedSeries from_terms(int nvars, int order, Field field, std::vector<Term> terms);

    int nvars() const noexcept { return nvars_; }
    int order() const noexcept { return order_; }
    Field field() const noexcept { return field_; }

    const Bucket& bucket(int degree) const;
    Scalar coefficient(const MultiIndex& idx) const;
    std::vector<Term> terms() const;
    std::size_t term_count() const noexcept;

    bool is_zero() const noexcept;
    // Lowest degree with a nonzero term; nullopt for the zero series.
    std::optional<int> valuation() const noexcept;
    // Highest degree with a nonzero term; nullopt for the zero series.
    std::optional<int> max_degree() const noexcept;
    bool is_homogeneous() const noexcept;
    // True when every coefficient has zero imaginary part.
    bool is_real() const;

    TruncatedSeries homogeneous_part(int degree) const;
    // Keeps degrees <= order; order may only decrease.
    TruncatedSeries truncate(int order) const;
    // Reinterprets the stored polynomial at a larger order (the caller
    // asserts the unknown tail is zero).
    TruncatedSeries as_polynomial(int order) const;
    // Field-tag promotion Q -> Q(i). Identity on Gaussian series.
    TruncatedSeries complexify() const;
    // Coefficient-wise real / imaginary parts, returned as rational series.
    TruncatedSeries real_part() const;
    TruncatedSeries imag_part() const;
    TruncatedSeries conj() const;

    TruncatedSeries operator-() const;
    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(const Scalar& c);

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);
    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

    // Human-readable, descending degree then lex; "0" for zero.
    std::string str(std::span<const std::string> names = {}) const;

    // Internal: replace bucket `degree` with already sorted nonzero terms.
    void set_bucket(int degree, Bucket terms);

private:
    void check_compatible(const TruncatedSeries& o) const;

    int nvars_;
    int order_;
    Field field_;
    std::vector<Bucket> buckets_;  // size order_ + 1
};

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b);
// Graded convolution truncated at min(order a, order b).
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
// Product through `order`, which may exceed min(order a, order b) as long
// as the valuations make every coefficient up to `order` determined:
// order <= min(order_a + val_b, order_b + val_a).
TruncatedSeries product_through(const TruncatedSeries& a, const TruncatedSeries& b, int order);
// Degree-`degree` homogeneous part of a*b, computed from the two
// relevant bucket ranges only.
Bucket homogeneous_product(const TruncatedSeries& a, const TruncatedSeries& b, int degree);
TruncatedSeries scale(const TruncatedSeries& a, const Scalar& c);
// x_var * a; order grows by one.
TruncatedSeries multiply_by_variable(const TruncatedSeries& a, int var);
// d/dx_var, 0-based; result order N - 1 (order 0 yields order 0 zero).
TruncatedSeries partial_derivative(const TruncatedSeries& a, int var);
TruncatedSeries power(const TruncatedSeries& a, int exponent);

struct SubstituteOptions {
    // Allows images with nonzero constant term. The input is then treated
    // as the polynomial it stores, and composition is exact through the
    // result order.
    bool allow_constant_terms = false;
    // Polynomial interpretation at an explicit order (used by blow-up,
    // where images raise degrees). Images must be known through it.
    std::optional<int> result_order;
};

// a(images[0], ..., images[n-1]). Images share nvars/field with each other;
// their nvars may differ from a's.
TruncatedSeries substitute(const TruncatedSeries& a, std::span<const TruncatedSeries> images,
                           const SubstituteOptions& options = {});

// Double-precision evaluation at a complex point.
std::complex<double> evaluate(const TruncatedSeries& a, std::span<const std::complex<double>> point);

// Exact evaluation at a point of Q(i)^n.
Scalar evaluate_exact(const TruncatedSeries& a, std::span<const Scalar> point);

inline TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
inline TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return series_mul(a, b); }
inline TruncatedSeries operator*(const Scalar& c, const TruncatedSeries& a) { return scale(a, c); }

// Default names x1..xn.
std::vector<std::string> default_variable_names(int nvars);

}  // namespace foliation
