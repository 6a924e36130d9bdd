#pragma once

// Seeded example families. Every draw comes from std::mt19937_64 seeded
// with derive_seed(seed, stream); integers are reduced by modulo so that
// the sequences are identical on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "foliation/forms.hpp"

namespace foliation {

// splitmix64 of seed + stream: independent streams per family.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    int below(int k);
    bool coin() { return (next() >> 63) != 0; }
    // One of +-1, +-1/2, +-1/3.
    Rational small_coefficient();
    // p/q with |p| <= max_num, 1 <= q <= max_den.
    Rational rational(int max_num, int max_den);

private:
    std::mt19937_64 engine_;
};

// `terms` monomials (distinct) of degree in [min_degree, max_degree] with
// small coefficients; multiplied by `scale`.
TruncatedSeries random_polynomial(SeededRng& rng, int nvars, int order, int min_degree, int max_degree, int terms,
                                  const Rational& scale = Rational(1));

// Sparse 1-form with coefficients of degree <= max_degree.
KForm random_sparse_form(SeededRng& rng, int nvars, int order, int max_degree, int terms);

// k-form (k <= 3) whose basis coefficients are each present with
// probability 2/3 and carry `terms` monomials of degree <= max_degree.
KForm random_kform(SeededRng& rng, int k, int nvars, int order, int max_degree, int terms);

struct PhamExample {
    int r = 0, n = 0, d = 0;
    TruncatedSeries P{1, 0};
    TruncatedSeries phi{1, 0};  // omega~ = d phi
    KForm omega{1, 1, 0};       // dP + P d(phi)
};
// phi has three terms of degree 1..4, so d(phi) has coefficients of degree <= 3
// and omega is integrable.
PhamExample pham_example(int r, int n, int d, std::uint64_t seed, int order);

struct ReebExample {
    TruncatedSeries Q{1, 0};  // sum of squares
    TruncatedSeries h{1, 0};  // Q + terms of degree 3..4
    TruncatedSeries u{1, 0};  // u(0) = 0, no x_n^2 term
    KForm omega{1, 1, 0};     // (1 + u) dh
};
ReebExample reeb_example(int n, std::uint64_t seed, int order);

// Planar fields with linear part -y d/dx + x d/dy.
std::vector<TruncatedSeries> rotation_field(int order);
// X = (-H_y, H_x), H = (x^2+y^2)/2 + cubic and quartic terms.
std::vector<TruncatedSeries> hamiltonian_center(std::uint64_t seed, int order);
// Symmetric under (x, y, t) -> (x, -y, -t).
std::vector<TruncatedSeries> reversible_center(std::uint64_t seed, int order);

struct WeakFocus {
    std::vector<TruncatedSeries> field;
    Rational s{0};  // coefficient of (x^2+y^2)(x d/dx + y d/dy)
};
// Hamiltonian center plus s (x^2+y^2) R with |s| <= 1/4: first focal value
// 2s at index 4.
WeakFocus weak_focus(std::uint64_t seed, int order);

struct TotallyRealPair {
    TruncatedSeries f{1, 0};
    TruncatedSeries g{1, 0};
};
// Gaussian-rational f, g with independent linear parts and two higher terms each.
TotallyRealPair totally_real_pair(std::uint64_t seed, int order);

struct RestrictionExample {
    TruncatedSeries Q{1, 0};  // L1^2 + L2^2, with L_i = x_i + (terms in x3, x4)
    TruncatedSeries h{1, 0};  // Q + cubic terms
    TruncatedSeries u{1, 0};  // u(0) = 0
    KForm omega{1, 1, 0};     // (1 + u) dh in four variables
};
RestrictionExample restriction_example(std::uint64_t seed, int order);

// Coefficients a_1..a_{n-1} of x_n = sum a_j x_j.
std::vector<Rational> random_hyperplane(SeededRng& rng, int nvars);

}  // namespace foliation
