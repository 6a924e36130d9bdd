#pragma once

// Holonomy of the exceptional divisor along a loop, by continuing leaves of
// the strict transform A dz + B dt = 0 over t(theta) = c + (t_anchor - c) e^{i theta}.

#include <complex>
#include <vector>

#include "foliation/blowup.hpp"
#include "foliation/integrator.hpp"

namespace foliation {

struct HolonomyLoop {
    std::complex<double> center{0, 0};
    std::complex<double> anchor{1, 0};  // base point on the divisor; transversal is z there
};

struct HolonomyConfig {
    IntegratorConfig integrator;
    std::vector<double> radii{0.0125, 0.025, 0.05};
    int angles = 8;
    double angle_offset = 0.0;  // rotates the seed fan
    int fit_degree = 4;
    double escape_factor = 10.0;
    double divisor_margin = 0.05;
    bool period_two = true;
};

struct HolonomySample {
    std::complex<double> x0;
    std::complex<double> hx;
    std::complex<double> hhx;  // h(h(x0)) when computed
    bool escaped = false;
};

struct HolonomyGerm {
    std::vector<HolonomySample> samples;  // surviving seeds
    int dropped = 0;
    // a1..a_d; only up to the degree the surviving seeds support.
    std::vector<std::complex<double>> coefficients;
    double fit_residual = 0.0;  // max |h(x0) - fit(x0)|
    double abs_a1 = 0.0;
    double arg_a1 = 0.0;
    double period_two_defect = 0.0;  // max |h(h(x0)) - x0|
};

// Throws PreconditionError for dicritical or n != 2 charts and for loops
// passing within divisor_margin of a divisor singularity; NumericalError
// when fewer than 3 seeds survive.
HolonomyGerm holonomy_germ(const BlowupChart& chart, const HolonomyLoop& loop, const HolonomyConfig& cfg = {});

// Product of exp(2 pi i / ratio) over the divisor singularities enclosed
// by the loop: the multiplier of the linearized holonomy.
std::complex<double> linear_model_multiplier(const BlowupChart& chart, const HolonomyLoop& loop);

// Continue one seed once around the loop; nullopt when the leaf escapes.
std::optional<std::complex<double>> holonomy_map(const BlowupChart& chart, const HolonomyLoop& loop,
                                                 std::complex<double> x0, const HolonomyConfig& cfg = {});

}  // namespace foliation
