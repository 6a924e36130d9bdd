#include "foliation/totally_real.hpp"

#include <Eigen/Dense>

#include "foliation/errors.hpp"

namespace foliation {

const char* contact_name(ContactClass c) noexcept {
    switch (c) {
        case ContactClass::transverse: return "transverse";
        case ContactClass::totally_real_contact_one: return "totally-real-contact-one";
        case ContactClass::invariant: return "invariant";
    }
    return "?";
}

TotallyRealSurfaceData totally_real_surface(const TruncatedSeries& f_in, const TruncatedSeries& g_in) {
    if (f_in.nvars() != 2 || g_in.nvars() != 2) throw PreconditionError("totally real construction needs n = 2");
    TruncatedSeries f = f_in.complexify(), g = g_in.complexify();
    if (f.order() != g.order()) {
        int o = std::min(f.order(), g.order());
        f = f.truncate(o);
        g = g.truncate(o);
    }
    if (!f.bucket(0).empty() || !g.bucket(0).empty()) throw PreconditionError("f and g must vanish at the origin");
    auto lin = [](const TruncatedSeries& s, int i) { return s.coefficient(MultiIndex::unit(i)); };
    GaussianRational det = lin(f, 0) * lin(g, 1) - lin(f, 1) * lin(g, 0);
    if (det.is_zero()) throw PreconditionError("f and g are not in general position (dependent linear parts)");

    TotallyRealSurfaceData s;
    s.f = f;
    s.g = g;
    const GaussianRational half(Rational(1, 2));
    const GaussianRational inv2i = GaussianRational(1) / (GaussianRational(2) * GaussianRational::i());
    s.X = scale(f + g, half);
    s.Y = scale(f - g, inv2i);
    const GaussianRational i = GaussianRational::i();
    const bool parts = (s.X + scale(s.Y, i) == f) && (s.X - scale(s.Y, i) == g);
    const bool product = f * g == s.X * s.X + s.Y * s.Y;
    s.identity_holds = parts && product;

    // z_k = a_k + i b_k
    const int order = f.order();
    std::vector<TruncatedSeries> z;
    for (int k = 0; k < 2; ++k) {
        auto a = TruncatedSeries::variable(4, order, 2 * k, Field::gaussian);
        auto b = TruncatedSeries::variable(4, order, 2 * k + 1, Field::gaussian);
        z.push_back(a + scale(b, i));
    }
    s.re_equation = substitute(f - g, z).real_part();
    s.im_equation = substitute(f + g, z).imag_part();
    return s;
}

RealSurface RealSurface::from(const TotallyRealSurfaceData& s) {
    RealSurface r;
    r.h = {s.f - s.g, s.f + s.g};
    r.part = {Part::re, Part::im};
    r.name = "totally-real(f,g)";
    return r;
}

RealSurface RealSurface::standard_real_slice(int order) {
    RealSurface r;
    r.h = {TruncatedSeries::variable(2, order, 0), TruncatedSeries::variable(2, order, 1)};
    r.part = {Part::im, Part::im};
    r.name = "real-slice";
    return r;
}

RealSurface RealSurface::complex_curve(const TruncatedSeries& h) {
    RealSurface r;
    r.h = {h, h};
    r.part = {Part::re, Part::im};
    r.name = "complex-curve";
    return r;
}

std::array<double, 2> RealSurface::equations(std::span<const std::complex<double>> p) const {
    std::array<double, 2> out{};
    for (int k = 0; k < 2; ++k) {
        auto v = evaluate(h[static_cast<std::size_t>(k)], p);
        out[static_cast<std::size_t>(k)] = part[static_cast<std::size_t>(k)] == Part::re ? v.real() : v.imag();
    }
    return out;
}

namespace {

// Real row for Re(c . v) or Im(c . v), v = (Re v1, Im v1, Re v2, Im v2).
void real_row(Eigen::Matrix4d& M, int row, const std::array<std::complex<double>, 2>& c, bool imag) {
    for (int k = 0; k < 2; ++k) {
        const auto ck = c[static_cast<std::size_t>(k)];
        if (!imag) {
            M(row, 2 * k) = ck.real();
            M(row, 2 * k + 1) = -ck.imag();
        } else {
            M(row, 2 * k) = ck.imag();
            M(row, 2 * k + 1) = ck.real();
        }
    }
}

}  // namespace

ContactReport contact_order(const KForm& omega, const RealSurface& surface, std::span<const std::complex<double>> p) {
    if (omega.degree() != 1 || omega.nvars() != 2) throw PreconditionError("contact order needs a planar 1-form");
    if (p.size() != 2) throw StructuralError("point must have two coordinates");
    auto eq = surface.equations(p);
    if (std::abs(eq[0]) > 1e-10 || std::abs(eq[1]) > 1e-10) throw PreconditionError("point is not on the surface");
    auto w = evaluate(omega, p);
    std::array<std::complex<double>, 2> wc{w[0], w[1]};
    if (std::abs(wc[0]) + std::abs(wc[1]) < 1e-12) throw PreconditionError("omega vanishes at the point");

    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 2; ++k) {
        const auto& h = surface.h[static_cast<std::size_t>(k)];
        std::array<std::complex<double>, 2> grad{evaluate(partial_derivative(h, 0), p), evaluate(partial_derivative(h, 1), p)};
        real_row(M, k, grad, surface.part[static_cast<std::size_t>(k)] == RealSurface::Part::im);
    }
    real_row(M, 2, wc, false);
    real_row(M, 3, wc, true);
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(M);
    const auto& sv = svd.singularValues();
    const double tol = 1e-9 * std::max(1.0, sv(0));
    int rank = 0;
    for (int i = 0; i < 4; ++i) rank += sv(i) > tol;
    // the surface is assumed smooth at p: its two constraints are independent
    ContactReport r;
    r.point = {p[0], p[1]};
    r.dimension = 4 - rank;
    r.classification = r.dimension >= 2   ? ContactClass::invariant
                       : r.dimension == 1 ? ContactClass::totally_real_contact_one
                                          : ContactClass::transverse;
    return r;
}

std::array<std::complex<double>, 2> surface_point(const TotallyRealSurfaceData& s, std::complex<double> w) {
    std::array<std::complex<double>, 2> z{0.0, 0.0};
    const auto f0 = partial_derivative(s.f, 0), f1 = partial_derivative(s.f, 1);
    const auto g0 = partial_derivative(s.g, 0), g1 = partial_derivative(s.g, 1);
    for (int it = 0; it < 100; ++it) {
        std::complex<double> F = evaluate(s.f, z) - w;
        std::complex<double> G = evaluate(s.g, z) - std::conj(w);
        if (std::abs(F) + std::abs(G) < 1e-15) return z;
        Eigen::Matrix2cd J;
        J << evaluate(f0, z), evaluate(f1, z), evaluate(g0, z), evaluate(g1, z);
        Eigen::Vector2cd rhs(F, G);
        Eigen::Vector2cd step = J.partialPivLu().solve(rhs);
        z[0] -= step(0);
        z[1] -= step(1);
        if (step.norm() < 1e-16) return z;
    }
    std::complex<double> F = evaluate(s.f, z) - w;
    std::complex<double> G = evaluate(s.g, z) - std::conj(w);
    if (std::abs(F) + std::abs(G) < 1e-12) return z;
    throw NumericalError("surface point Newton iteration did not converge");
}

}  // namespace foliation
