#include "foliation/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "foliation/errors.hpp"

namespace foliation {

const char* status_name(ReturnStatus s) noexcept {
    switch (s) {
        case ReturnStatus::returned: return "returned";
        case ReturnStatus::escaped: return "escaped";
        case ReturnStatus::step_limit: return "step-limit";
    }
    return "?";
}

const char* verdict_name(LeafVerdict v) noexcept {
    switch (v) {
        case LeafVerdict::closed: return "closed";
        case LeafVerdict::recurrent_nonclosed: return "recurrent-nonclosed";
        case LeafVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* verdict_name(OrbitVerdict v) noexcept {
    switch (v) {
        case OrbitVerdict::constant: return "constant";
        case OrbitVerdict::monotone_converging: return "monotone-converging";
        case OrbitVerdict::monotone_diverging: return "monotone-diverging";
        case OrbitVerdict::non_monotone: return "non-monotone";
    }
    return "?";
}

ReturnMapSample poincare_return(std::span<const TruncatedSeries> field, double x0, const PoincareConfig& cfg) {
    if (field.size() != 2 || field[0].nvars() != 2) throw PreconditionError("poincare_return needs a planar field");
    if (!(x0 > 0) || !(x0 < cfg.max_seed)) throw PreconditionError("seed outside (0, max_seed)");
    OdeRhs rhs = polynomial_field(field);
    const double esc = cfg.escape_factor * x0;
    IntegrateOptions opt;
    opt.events.push_back({[](double, std::span<const double> y) { return y[1]; }, +1, true});
    opt.stop = [esc](double, std::span<const double> y) { return std::hypot(y[0], y[1]) > esc; };
    const double start[2] = {x0, 0.0};
    auto r = integrate(rhs, 0.0, start, cfg.max_time, cfg.integrator, opt);
    ReturnMapSample s;
    s.x0 = x0;
    s.transit_time = r.t;
    s.x_return = r.y[0];
    s.displacement = r.y[0] - x0;
    switch (r.status) {
        case IntegrationStatus::event:
            s.status = r.y[0] > 0 ? ReturnStatus::returned : ReturnStatus::escaped;
            break;
        case IntegrationStatus::step_limit: s.status = ReturnStatus::step_limit; break;
        default: s.status = ReturnStatus::escaped; break;
    }
    return s;
}

bool LeafProbe::all(LeafVerdict v) const {
    return !verdicts.empty() && std::all_of(verdicts.begin(), verdicts.end(), [v](LeafVerdict w) { return w == v; });
}

LeafProbe leaf_closedness_probe(std::span<const TruncatedSeries> field, std::span<const double> seeds, double tol,
                                const PoincareConfig& cfg) {
    if (!(tol > 0)) throw PreconditionError("probe tolerance must be positive");
    LeafProbe p;
    p.tol = tol;
    for (double x0 : seeds) p.samples.push_back(poincare_return(field, x0, cfg));
    bool spiral = true;
    int sign = 0;
    for (const auto& s : p.samples) {
        if (s.status != ReturnStatus::returned || std::abs(s.displacement) < 10 * tol) {
            spiral = false;
            continue;
        }
        int sg = s.displacement > 0 ? 1 : -1;
        if (sign == 0) sign = sg;
        if (sg != sign) spiral = false;
    }
    for (const auto& s : p.samples) {
        LeafVerdict v = LeafVerdict::inconclusive;
        if (s.status == ReturnStatus::returned) {
            if (std::abs(s.displacement) <= tol)
                v = LeafVerdict::closed;
            else if (spiral)
                v = LeafVerdict::recurrent_nonclosed;
        }
        p.verdicts.push_back(v);
    }
    p.sign = spiral ? sign : 0;
    return p;
}

std::vector<double> standard_seed_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 6; ++i) g.push_back(0.05 * i);
    return g;
}

ReturnMapFit returnmap_focal_fit(std::span<const TruncatedSeries> field, std::span<const double> radii,
                                 const PoincareConfig& cfg) {
    if (radii.size() < 2) throw PreconditionError("need at least two radii");
    std::vector<double> r(radii.begin(), radii.end());
    std::sort(r.begin(), r.end());
    ReturnMapFit fit;
    for (double x0 : r) {
        auto s = poincare_return(field, x0, cfg);
        if (s.status != ReturnStatus::returned) throw NumericalError("seed did not return");
        if (s.displacement == 0) throw NumericalError("zero displacement; no focal value to fit");
        fit.samples.push_back(s);
    }
    const auto& s0 = fit.samples[0];
    const auto& s1 = fit.samples[1];
    fit.slope = std::log(std::abs(s1.displacement / s0.displacement)) / std::log(s1.x0 / s0.x0);
    const int power = static_cast<int>(std::lround(fit.slope));
    if (power < 3 || power % 2 == 0) throw NumericalError("displacement slope is not an odd power >= 3");
    fit.index = power + 1;
    // c(r) = d / (pi r^power) is V + O(r); extrapolate linearly to r = 0
    auto c = [power](const ReturnMapSample& s) {
        return s.displacement / (std::numbers::pi * std::pow(s.x0, power));
    };
    const double c0 = c(s0), c1 = c(s1);
    fit.value = c0 - s0.x0 * (c1 - c0) / (s1.x0 - s0.x0);
    return fit;
}

ParabolicClass parabolic_orbit_demo(std::span<const std::complex<double>> coefficients, std::complex<double> seed,
                                    int iterations, double disc_radius) {
    if (coefficients.empty() || std::abs(coefficients[0] - 1.0) > 1e-14)
        throw PreconditionError("parabolic germ needs a1 = 1");
    if (iterations < 1) throw PreconditionError("iterations must be positive");
    ParabolicClass pc;
    pc.coefficients.assign(coefficients.begin(), coefficients.end());
    pc.identity = true;
    for (std::size_t i = 1; i < coefficients.size(); ++i)
        if (coefficients[i] != 0.0) {
            pc.identity = false;
            pc.tangency_order = static_cast<int>(i);
            pc.leading = coefficients[i];
            break;
        }
    pc.real_ray = seed.imag() == 0;
    for (auto c : coefficients) pc.real_ray = pc.real_ray && c.imag() == 0;

    auto h = [&](std::complex<double> z) {
        std::complex<double> s = 0;
        for (std::size_t i = coefficients.size(); i-- > 0;) s = (s + coefficients[i]) * z;
        return s;
    };
    pc.orbit.push_back(seed);
    std::complex<double> z = seed;
    const double close_tol = 1e-12 * std::max(1.0, std::abs(seed));
    for (int it = 0; it < iterations; ++it) {
        z = h(z);
        pc.orbit.push_back(z);
        if (std::abs(z - seed) <= close_tol) pc.closed = true;
        if (std::abs(z) > disc_radius) {
            pc.left_disc = true;
            break;
        }
    }
    if (pc.identity) {
        pc.verdict = OrbitVerdict::constant;
        return pc;
    }
    pc.verdict = OrbitVerdict::non_monotone;
    if (pc.real_ray && pc.orbit.size() >= 2) {
        bool inc = true, dec = true, toward = true, away = true;
        for (std::size_t i = 1; i < pc.orbit.size(); ++i) {
            double a = pc.orbit[i - 1].real(), b = pc.orbit[i].real();
            inc = inc && b > a;
            dec = dec && b < a;
            toward = toward && std::abs(b) < std::abs(a);
            away = away && std::abs(b) > std::abs(a);
        }
        if ((inc || dec) && toward) pc.verdict = OrbitVerdict::monotone_converging;
        if ((inc || dec) && away) pc.verdict = OrbitVerdict::monotone_diverging;
    }
    return pc;
}

}  // namespace foliation
