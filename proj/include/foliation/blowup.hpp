#pragma once

// Quadratic blow-up of a 1-form at the origin, tangent cone, divisor
// singularities.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "foliation/forms.hpp"
#include "foliation/roots.hpp"

namespace foliation {

enum class Irreducibility { irreducible, reducible, unknown };

const char* irreducibility_name(Irreducibility v) noexcept;

struct TangentCone {
    TruncatedSeries P{1, 0};  // P_{nu+1} = i_R omega_nu (zero when dicritical)
    int nu = 0;               // leading index of omega
    int degree = 0;           // nu + 1
    bool dicritical = false;
    Irreducibility verdict = Irreducibility::unknown;
    std::optional<TruncatedSeries> witness;  // a factor when reducible
    std::string reason;
};

TangentCone tangent_cone(const KForm& omega);

// Factor search for a homogeneous polynomial over Q(i): linear factors in
// any number of variables; for two variables also factors of degree 2
// and 3. A verdict of irreducible is only returned when the search is
// complete for the degree (deg <= 3, or two variables with deg <= 7);
// otherwise unknown, except for c * sum_{j in S} x_j^d with |S| >= 3.
struct FactorSearch {
    Irreducibility verdict = Irreducibility::unknown;
    std::optional<TruncatedSeries> witness;
    std::string reason;
};
FactorSearch search_factors(const TruncatedSeries& P);

// sum_{j<r} x_j^d in n variables, truncated at order.
TruncatedSeries pham_polynomial(int r, int n, int d, int order);
// Matches c * sum_{j in S} x_j^d; returns |S| (0 when no match).
int pham_support(const TruncatedSeries& P);

struct BlowupChart {
    // Chart j: z_i = z_j * t_i for i != j. Variable slot j holds z_j,
    // slot i != j holds t_i.
    int chart = 0;
    KForm pullback{1, 1, 0};
    KForm strict_transform{1, 1, 0};
    int divisor_multiplicity = 0;  // power of z_j divided out
    bool dicritical = false;
};

// Polynomial interpretation: omega's stored terms are pulled back
// exactly. Throws PreconditionError for the zero form or omega(0) != 0.
BlowupChart blowup(const KForm& omega, int chart);

// The images z_i -> z_j t_i, z_j -> z_j at the given order.
std::vector<TruncatedSeries> blowup_map(int nvars, int chart, int order);

struct DivisorSingularity {
    // Coordinate t of the point (z_j = 0, t) in the chart.
    std::complex<double> t;
    std::optional<GaussianRational> t_exact;
    // Linear part of the kernel field v = B d/dz - A d/dt at the point,
    // rows (dz, dt): [[B_z, B_t], [-A_z, -A_t]].
    std::complex<double> jacobian[2][2];
    std::complex<double> eigen_transverse;  // B_z
    std::complex<double> eigen_along;       // -A_t
    // eigen_along / eigen_transverse
    std::complex<double> ratio;
    bool siegel = false;  // ratio real and negative
};

// Two-variable non-dicritical charts only.
std::vector<DivisorSingularity> divisor_singularities(const BlowupChart& c);

}  // namespace foliation
