#pragma once

// Totally real surfaces V = {Re f = Re g, Im f = -Im g} in C^2 and their
// contact with a holomorphic foliation.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "foliation/forms.hpp"

namespace foliation {

struct TotallyRealSurfaceData {
    TruncatedSeries f{2, 0, Field::gaussian};
    TruncatedSeries g{2, 0, Field::gaussian};
    TruncatedSeries X{2, 0, Field::gaussian};  // (f + g) / 2
    TruncatedSeries Y{2, 0, Field::gaussian};  // (f - g) / (2i)
    // Real defining series in (a1, b1, a2, b2), z_k = a_k + i b_k:
    // Re(f - g) and Im(f + g).
    TruncatedSeries re_equation{4, 0};
    TruncatedSeries im_equation{4, 0};
    bool identity_holds = false;  // f g = X^2 + Y^2, f = X + iY, g = X - iY
};

// Throws PreconditionError when f(0) or g(0) is nonzero or the linear
// parts are not independent (general position).
TotallyRealSurfaceData totally_real_surface(const TruncatedSeries& f, const TruncatedSeries& g);

// A real surface {part_k(h_k) = 0, k = 0, 1} with h_k holomorphic and
// part_k either the real or the imaginary part.
struct RealSurface {
    enum class Part { re, im };
    std::array<TruncatedSeries, 2> h{TruncatedSeries(2, 0), TruncatedSeries(2, 0)};
    std::array<Part, 2> part{Part::re, Part::re};
    std::string name;

    static RealSurface from(const TotallyRealSurfaceData& s);
    // Im z1 = Im z2 = 0.
    static RealSurface standard_real_slice(int order);
    // The complex curve {h = 0} seen as a real surface.
    static RealSurface complex_curve(const TruncatedSeries& h);

    std::array<double, 2> equations(std::span<const std::complex<double>> p) const;
};

enum class ContactClass { transverse, totally_real_contact_one, invariant };

const char* contact_name(ContactClass c) noexcept;

struct ContactReport {
    std::array<std::complex<double>, 2> point{};
    int dimension = 0;
    ContactClass classification = ContactClass::transverse;
};

// dim T_pV ∩ ker omega_p from the stacked 4x4 real system. Rejects points
// off the surface (|equations| > 1e-10) and zeros of omega.
ContactReport contact_order(const KForm& omega, const RealSurface& surface,
                            std::span<const std::complex<double>> p);

// Solves f(z) = w, g(z) = conj(w) by Newton's method from z = 0 for a
// point on the surface of f, g; throws NumericalError on failure.
std::array<std::complex<double>, 2> surface_point(const TotallyRealSurfaceData& s, std::complex<double> w);

}  // namespace foliation
