#include "foliation/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "foliation/errors.hpp"

namespace foliation {

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(event_tol > 0)) throw PreconditionError("tolerances must be positive");
    if (max_steps <= 0) throw PreconditionError("max_steps must be positive");
    if (max_step < 0) throw PreconditionError("max_step must be non-negative");
}

const char* status_name(IntegrationStatus s) noexcept {
    switch (s) {
        case IntegrationStatus::completed: return "completed";
        case IntegrationStatus::event: return "event";
        case IntegrationStatus::step_limit: return "step-limit";
        case IntegrationStatus::step_underflow: return "step-underflow";
        case IntegrationStatus::stopped: return "stopped";
    }
    return "?";
}

namespace {

// Dormand & Prince (1980) tableau; dense output from Hairer, Norsett & Wanner.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Dense {
    double t0 = 0, h = 0;
    std::vector<double> r1, r2, r3, r4, r5;
    void eval(double t, std::vector<double>& out) const {
        const double th = (t - t0) / h, th1 = 1.0 - th;
        out.resize(r1.size());
        for (std::size_t i = 0; i < r1.size(); ++i)
            out[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    }
};

double error_norm(const std::vector<double>& err, const std::vector<double>& y0, const std::vector<double>& y1,
                  const IntegratorConfig& cfg) {
    double s = 0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        s += (err[i] / sk) * (err[i] / sk);
    }
    return std::sqrt(s / static_cast<double>(err.size()));
}

}  // namespace

IntegrationResult integrate(const OdeRhs& f, double t0, std::span<const double> y0_in, double t1,
                            const IntegratorConfig& cfg, const IntegrateOptions& options) {
    cfg.validate();
    const std::size_t n = y0_in.size();
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    std::vector<double> y(y0_in.begin(), y0_in.end()), y1(n), ytmp(n), err(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    IntegrationResult res;
    if (options.record) {
        res.times.push_back(t0);
        res.states.push_back(y);
    }
    double t = t0;
    f(t, y, k1);

    const double span = std::abs(t1 - t0);
    const double hmax = cfg.max_step > 0 ? cfg.max_step : span;
    double h = cfg.initial_step;
    if (h <= 0) {
        // Hairer's starting step heuristic
        double dnf = 0, dny = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
            dnf += (k1[i] / sk) * (k1[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, hmax);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h * k1[i];
        f(t + dir * h, ytmp, k2);
        double der2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
            der2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
        }
        der2 = std::sqrt(der2 / static_cast<double>(n)) / h;
        double der12 = std::max(std::abs(der2), std::sqrt(dnf / static_cast<double>(n)));
        double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
        h = std::min({100 * h, h1, hmax});
    }
    if (span == 0) {
        res.y = y;
        res.t = t;
        return res;
    }

    std::vector<double> gprev(options.events.size());
    for (std::size_t e = 0; e < options.events.size(); ++e) gprev[e] = options.events[e].g(t, y);

    const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9, facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
    double facold = 1e-4;
    bool last_rejected = false;
    Dense dense;
    long steps = 0;
    while (true) {
        if (steps++ >= cfg.max_steps) {
            res.status = IntegrationStatus::step_limit;
            break;
        }
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
            res.status = IntegrationStatus::step_underflow;
            break;
        }
        bool final_step = false;
        if ((t + dir * h - t1) * dir >= 0) {
            h = std::abs(t1 - t);
            final_step = true;
        }
        const double hs = dir * h;
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        f(t + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + hs, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f(t + hs, y1, k7);
        for (std::size_t i = 0; i < n; ++i)
            err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        bool finite = true;
        for (double v : y1) finite = finite && std::isfinite(v);
        double errn = finite ? error_norm(err, y, y1, cfg) : std::numeric_limits<double>::infinity();

        if (!(errn <= 1.0)) {
            double fac11 = std::isfinite(errn) ? std::pow(errn, expo1) : 10.0;
            h = h / std::min(facc1, fac11 / safe);
            last_rejected = true;
            ++res.rejected;
            continue;
        }

        // accepted
        dense.t0 = t;
        dense.h = hs;
        dense.r1 = y;
        dense.r2.resize(n);
        dense.r3.resize(n);
        dense.r4.resize(n);
        dense.r5.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ydiff = y1[i] - y[i];
            double bspl = hs * k1[i] - ydiff;
            dense.r2[i] = ydiff;
            dense.r3[i] = bspl;
            dense.r4[i] = ydiff - hs * k7[i] - bspl;
            dense.r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        const double tnew = final_step ? t1 : t + hs;
        ++res.accepted;

        // events
        int hit = -1;
        double thit = 0;
        for (std::size_t e = 0; e < options.events.size(); ++e) {
            const auto& ev = options.events[e];
            double g1 = ev.g(tnew, y1);
            double g0 = gprev[e];
            bool up = g0 < 0 && g1 >= 0, down = g0 > 0 && g1 <= 0;
            bool trig = (ev.direction >= 0 && up) || (ev.direction <= 0 && down);
            gprev[e] = g1;
            if (!trig) continue;
            double lo = t, hi = tnew;
            std::vector<double> ym;
            while (std::abs(hi - lo) > cfg.event_tol * std::max(1.0, std::abs(hi))) {
                double mid = 0.5 * (lo + hi);
                dense.eval(mid, ym);
                double gm = ev.g(mid, ym);
                bool same_side_as_start = up ? gm < 0 : gm > 0;
                (same_side_as_start ? lo : hi) = mid;
            }
            double tc = 0.5 * (lo + hi);
            if (hit < 0 || (tc - thit) * dir < 0) {
                hit = static_cast<int>(e);
                thit = tc;
            }
        }
        if (hit >= 0) {
            EventHit eh;
            eh.index = hit;
            eh.t = thit;
            dense.eval(thit, eh.y);
            res.events.push_back(eh);
            if (options.events[static_cast<std::size_t>(hit)].terminal) {
                res.status = IntegrationStatus::event;
                res.t = thit;
                res.y = eh.y;
                if (options.record) {
                    res.times.push_back(thit);
                    res.states.push_back(eh.y);
                }
                return res;
            }
        }

        t = tnew;
        y.swap(y1);
        k1.swap(k7);
        if (options.record) {
            res.times.push_back(t);
            res.states.push_back(y);
        }
        if (final_step) {
            res.status = IntegrationStatus::completed;
            break;
        }
        if (options.stop && options.stop(t, y)) {
            res.status = IntegrationStatus::stopped;
            break;
        }

        double fac11 = std::pow(std::max(errn, 1e-300), expo1);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        double hnew = h / fac;
        facold = std::max(errn, 1e-4);
        if (last_rejected) hnew = std::min(hnew, h);
        last_rejected = false;
        h = std::min(hnew, hmax);
    }
    res.t = t;
    res.y = y;
    return res;
}

NumericPolynomial::NumericPolynomial(const TruncatedSeries& s) : nvars_(s.nvars()) {
    for (const auto& t : s.terms()) {
        terms_.push_back({t.coeff.to_complex(), t.index.exponents(nvars_)});
        maxdeg_ = std::max(maxdeg_, t.index.degree());
    }
}

double NumericPolynomial::eval_real(std::span<const double> x) const {
    double pw[kMaxVars][kMaxExponent + 1];
    for (int v = 0; v < nvars_; ++v) {
        pw[v][0] = 1.0;
        for (int e = 1; e <= maxdeg_; ++e) pw[v][e] = pw[v][e - 1] * x[static_cast<std::size_t>(v)];
    }
    double s = 0;
    for (const auto& m : terms_) {
        double p = m.c.real();
        for (int v = 0; v < nvars_; ++v) p *= pw[v][m.exps[static_cast<std::size_t>(v)]];
        s += p;
    }
    return s;
}

std::complex<double> NumericPolynomial::eval(std::span<const std::complex<double>> z) const {
    std::complex<double> pw[kMaxVars][kMaxExponent + 1];
    for (int v = 0; v < nvars_; ++v) {
        pw[v][0] = 1.0;
        for (int e = 1; e <= maxdeg_; ++e) pw[v][e] = pw[v][e - 1] * z[static_cast<std::size_t>(v)];
    }
    std::complex<double> s = 0;
    for (const auto& m : terms_) {
        std::complex<double> p = m.c;
        for (int v = 0; v < nvars_; ++v) p *= pw[v][m.exps[static_cast<std::size_t>(v)]];
        s += p;
    }
    return s;
}

OdeRhs polynomial_field(std::span<const TruncatedSeries> field) {
    std::vector<NumericPolynomial> comps;
    for (const auto& c : field) {
        if (!c.is_real()) throw PreconditionError("real integration needs real coefficients");
        comps.emplace_back(c);
    }
    return [comps = std::move(comps)](double, std::span<const double> y, std::span<double> dy) {
        for (std::size_t i = 0; i < comps.size(); ++i) dy[i] = comps[i].eval_real(y);
    };
}

}  // namespace foliation
