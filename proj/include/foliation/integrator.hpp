#pragma once

// Dormand-Prince 5(4) with PI step control, native dense output and
// event location by bisection on the interpolant.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "foliation/series.hpp"

namespace foliation {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;  // 0: unbounded
    long max_steps = 200000;
    double event_tol = 1e-11;
    double initial_step = 0.0;  // 0: automatic

    void validate() const;
};

// dy/dt = f(t, y) on R^n.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct EventSpec {
    std::function<double(double t, std::span<const double> y)> g;
    // +1: g increasing through 0; -1: decreasing; 0: either.
    int direction = 0;
    bool terminal = true;
};

struct EventHit {
    int index = 0;
    double t = 0.0;
    std::vector<double> y;
};

enum class IntegrationStatus { completed, event, step_limit, step_underflow, stopped };

const char* status_name(IntegrationStatus s) noexcept;

struct IntegrationResult {
    IntegrationStatus status = IntegrationStatus::completed;
    double t = 0.0;
    std::vector<double> y;
    std::vector<EventHit> events;
    long accepted = 0;
    long rejected = 0;
    // Accepted step endpoints, when requested.
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

struct IntegrateOptions {
    std::vector<EventSpec> events;
    bool record = false;
    // Checked after every accepted step; returning true stops with status `stopped`.
    std::function<bool(double t, std::span<const double> y)> stop;
};

IntegrationResult integrate(const OdeRhs& f, double t0, std::span<const double> y0, double t1,
                            const IntegratorConfig& cfg, const IntegrateOptions& options = {});

// Double-precision copy of a series for fast repeated evaluation.
class NumericPolynomial {
public:
    NumericPolynomial() = default;
    explicit NumericPolynomial(const TruncatedSeries& s);

    int nvars() const noexcept { return nvars_; }
    double eval_real(std::span<const double> x) const;
    std::complex<double> eval(std::span<const std::complex<double>> z) const;

private:
    struct Mono {
        std::complex<double> c;
        std::vector<int> exps;
    };
    int nvars_ = 0;
    int maxdeg_ = 0;
    std::vector<Mono> terms_;
};

// Real planar (or n-dimensional) polynomial vector field.
OdeRhs polynomial_field(std::span<const TruncatedSeries> field);

}  // namespace foliation
