#pragma once

// Planar return maps, leaf-closedness probe, parabolic germ orbits.

#include <complex>
#include <span>
#include <vector>

#include "foliation/integrator.hpp"
#include "foliation/series.hpp"

namespace foliation {

enum class ReturnStatus { returned, escaped, step_limit };

const char* status_name(ReturnStatus s) noexcept;

struct ReturnMapSample {
    double x0 = 0.0;
    double x_return = 0.0;
    double displacement = 0.0;
    double transit_time = 0.0;
    ReturnStatus status = ReturnStatus::returned;
};

struct PoincareConfig {
    IntegratorConfig integrator;
    double max_seed = 0.5;      // x0 must lie in (0, max_seed)
    double escape_factor = 10;  // escaped once |(x, y)| > escape_factor * x0
    double max_time = 100.0;
};

// First return to the positive x-axis, crossing with y increasing.
// Requires a real planar field; the linear part is not checked here.
ReturnMapSample poincare_return(std::span<const TruncatedSeries> field, double x0, const PoincareConfig& cfg = {});

enum class LeafVerdict { closed, recurrent_nonclosed, inconclusive };

const char* verdict_name(LeafVerdict v) noexcept;

struct LeafProbe {
    double tol = 1e-8;
    std::vector<ReturnMapSample> samples;
    std::vector<LeafVerdict> verdicts;
    int sign = 0;  // common displacement sign of the recurrent seeds
    bool all(LeafVerdict v) const;
};

// |d| <= tol: closed. Seeds with |d| >= 10 tol are recurrent-nonclosed when
// every returned seed has |d| >= 10 tol with one common sign.
// Everything else is inconclusive.
LeafProbe leaf_closedness_probe(std::span<const TruncatedSeries> field, std::span<const double> seeds, double tol,
                                const PoincareConfig& cfg = {});

// Seeds 0.05, 0.10, ..., 0.30.
std::vector<double> standard_seed_grid();

struct ReturnMapFit {
    int index = 0;       // 2k: d(r) ~ pi V_{2k} r^{2k-1}
    double value = 0.0;  // V_{2k} estimate
    double slope = 0.0;  // log-log slope of |d| at the two smallest radii
    std::vector<ReturnMapSample> samples;
};

// Leading focal value estimated from displacements at the given radii.
// Throws NumericalError when displacements vanish or a seed fails to return.
ReturnMapFit returnmap_focal_fit(std::span<const TruncatedSeries> field, std::span<const double> radii,
                                 const PoincareConfig& cfg = {});

enum class OrbitVerdict { constant, monotone_converging, monotone_diverging, non_monotone };

const char* verdict_name(OrbitVerdict v) noexcept;

struct ParabolicClass {
    std::vector<std::complex<double>> coefficients;  // a1, a2, ...
    bool identity = false;
    int tangency_order = 0;  // k with h(z) - z = a_{k+1} z^{k+1} + ...
    std::complex<double> leading{0, 0};
    std::vector<std::complex<double>> orbit;
    bool real_ray = false;  // real coefficients and real seed
    OrbitVerdict verdict = OrbitVerdict::non_monotone;
    bool closed = false;
    bool left_disc = false;  // truncated germ no longer trusted
};

ParabolicClass parabolic_orbit_demo(std::span<const std::complex<double>> coefficients, std::complex<double> seed,
                                    int iterations, double disc_radius = 0.5);

}  // namespace foliation
