#include "foliation/holonomy.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <optional>

#include "foliation/errors.hpp"

namespace foliation {

namespace {

struct ChartOde {
    NumericPolynomial A, B;
    int z = 0, t = 1;
    std::complex<double> c, r0;  // t(theta) = c + r0 e^{i theta}

    void check(const BlowupChart& chart, const HolonomyLoop& loop, double margin) {
        if (chart.strict_transform.nvars() != 2) throw PreconditionError("holonomy needs a planar chart");
        if (chart.dicritical) throw PreconditionError("dicritical chart: the divisor is not invariant");
        z = chart.chart;
        t = 1 - z;
        A = NumericPolynomial(chart.strict_transform.component(z));
        B = NumericPolynomial(chart.strict_transform.component(t));
        c = loop.center;
        r0 = loop.anchor - loop.center;
        if (std::abs(r0) == 0) throw PreconditionError("loop radius is zero");
        for (const auto& s : divisor_singularities(chart))
            if (std::abs(std::abs(s.t - c) - std::abs(r0)) < margin)
                throw PreconditionError("loop passes too close to a divisor singularity");
    }

    void rhs(double theta, std::span<const double> y, std::span<double> dy) const {
        const std::complex<double> e = r0 * std::exp(std::complex<double>(0, theta));
        std::complex<double> p[2];
        p[z] = {y[0], y[1]};
        p[t] = c + e;
        const std::complex<double> a = A.eval(p);
        if (std::abs(a) < 1e-300) throw NumericalError("leaf reached the polar locus of the chart equation");
        const std::complex<double> v = -B.eval(p) / a * std::complex<double>(0, 1) * e;
        dy[0] = v.real();
        dy[1] = v.imag();
    }
};

std::optional<std::complex<double>> continue_leaf(const ChartOde& ode, std::complex<double> x0, double th0,
                                                  double escape, const IntegratorConfig& icfg) {
    IntegrateOptions opt;
    opt.stop = [escape](double, std::span<const double> y) { return std::hypot(y[0], y[1]) > escape; };
    const double y0[2] = {x0.real(), x0.imag()};
    auto f = [&ode](double th, std::span<const double> y, std::span<double> dy) { ode.rhs(th, y, dy); };
    auto r = integrate(f, th0, y0, th0 + 2 * std::numbers::pi, icfg, opt);
    if (r.status != IntegrationStatus::completed) return std::nullopt;
    return std::complex<double>(r.y[0], r.y[1]);
}

}  // namespace

std::complex<double> linear_model_multiplier(const BlowupChart& chart, const HolonomyLoop& loop) {
    const double rho = std::abs(loop.anchor - loop.center);
    std::complex<double> m = 1;
    for (const auto& s : divisor_singularities(chart)) {
        if (std::abs(s.t - loop.center) >= rho) continue;
        if (std::abs(s.ratio) == 0) throw NumericalError("degenerate divisor singularity inside the loop");
        m *= std::exp(std::complex<double>(0, 2 * std::numbers::pi) / s.ratio);
    }
    return m;
}

std::optional<std::complex<double>> holonomy_map(const BlowupChart& chart, const HolonomyLoop& loop,
                                                 std::complex<double> x0, const HolonomyConfig& cfg) {
    ChartOde ode;
    ode.check(chart, loop, cfg.divisor_margin);
    return continue_leaf(ode, x0, 0.0, cfg.escape_factor * std::abs(x0), cfg.integrator);
}

HolonomyGerm holonomy_germ(const BlowupChart& chart, const HolonomyLoop& loop, const HolonomyConfig& cfg) {
    if (cfg.radii.empty() || cfg.angles < 1 || cfg.fit_degree < 1) throw PreconditionError("empty seed fan");
    ChartOde ode;
    ode.check(chart, loop, cfg.divisor_margin);
    HolonomyGerm g;
    for (double r : cfg.radii) {
        for (int k = 0; k < cfg.angles; ++k) {
            const double phi = cfg.angle_offset + 2 * std::numbers::pi * k / cfg.angles;
            const std::complex<double> x0 = std::polar(r, phi);
            const double escape = cfg.escape_factor * r;
            auto h = continue_leaf(ode, x0, 0.0, escape, cfg.integrator);
            if (!h) {
                ++g.dropped;
                continue;
            }
            HolonomySample s{x0, *h, {0, 0}, false};
            if (cfg.period_two) {
                auto hh = continue_leaf(ode, *h, 0.0, escape, cfg.integrator);
                if (!hh) {
                    ++g.dropped;
                    continue;
                }
                s.hhx = *hh;
                g.period_two_defect = std::max(g.period_two_defect, std::abs(*hh - x0));
            }
            g.samples.push_back(s);
        }
    }
    const int m = static_cast<int>(g.samples.size());
    if (m < 3) throw NumericalError("fewer than 3 holonomy seeds survived");
    const int deg = std::min(cfg.fit_degree, m - 1);
    Eigen::MatrixXcd V(m, deg);
    Eigen::VectorXcd rhs(m);
    for (int i = 0; i < m; ++i) {
        std::complex<double> p = 1;
        for (int k = 0; k < deg; ++k) {
            p *= g.samples[static_cast<std::size_t>(i)].x0;
            V(i, k) = p;
        }
        rhs(i) = g.samples[static_cast<std::size_t>(i)].hx;
    }
    Eigen::VectorXcd a = V.colPivHouseholderQr().solve(rhs);
    g.fit_residual = (V * a - rhs).cwiseAbs().maxCoeff();
    for (int k = 0; k < deg; ++k) g.coefficients.push_back(a(k));
    g.abs_a1 = std::abs(a(0));
    g.arg_a1 = std::arg(a(0));
    return g;
}

}  // namespace foliation
