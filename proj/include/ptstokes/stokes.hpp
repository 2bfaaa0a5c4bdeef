#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ptstokes/canonical.hpp"
#include "ptstokes/potential.hpp"

namespace ptstokes {

// Connection coefficient C(a, E) in Y_{-1} = C Y_0 + Y_1 and its derivative
// in E, assembled from Wronskians of the ray solutions at the matching point.

struct StokesOptions {
    RayOptions ray{};
    Complex X0{};
    double rootTol = 1e-9;
    double wrTol = 1e-6;
};

struct StokesValue {
    Complex C{};
    Complex Cprime{};
    Complex wr01{};
    double wrCheck = 0.0;
    Complex E{};
    std::uint64_t specHash = 0;
    bool reliable = true;
};

namespace detail {

struct PhysicalRay {
    Complex Y, Yp, Z, Zp;
};

inline PhysicalRay physical_values(const RaySolution& ray) {
    const Complex s = std::exp(ray.logScale);
    return {s * ray.atOrigin.Y, s * ray.atOrigin.Yp, s * ray.atOrigin.Z, s * ray.atOrigin.Zp};
}

inline Complex wronskian(Complex f, Complex fp, Complex g, Complex gp) { return f * gp - fp * g; }

} // namespace detail

inline StokesValue stokes_multiplier_from_rays(const RaySolution& rm1, const RaySolution& r0, const RaySolution& rp1,
                                               const ProblemSpec& spec, Complex E, const StokesOptions& opts) {
    const auto m1 = detail::physical_values(rm1);
    const auto c0 = detail::physical_values(r0);
    const auto p1 = detail::physical_values(rp1);

    StokesValue sv;
    sv.E = E;
    sv.specHash = spec.hash();
    sv.C = 0.5 * detail::wronskian(m1.Y, m1.Yp, p1.Y, p1.Yp);
    sv.Cprime = 0.5 * (detail::wronskian(m1.Z, m1.Zp, p1.Y, p1.Yp) + detail::wronskian(m1.Y, m1.Yp, p1.Z, p1.Zp));
    sv.wr01 = detail::wronskian(c0.Y, c0.Yp, p1.Y, p1.Yp);
    sv.wrCheck = std::abs(sv.wr01 - Complex{2.0});
    sv.reliable = sv.wrCheck <= opts.wrTol;
    return sv;
}

inline StokesValue stokes_multiplier(const ProblemSpec& spec, Complex E, const StokesOptions& opts = {}) {
    const RaySolution rm1 = ray_solution(spec, E, -1, opts.X0, opts.ray);
    const RaySolution r0 = ray_solution(spec, E, 0, opts.X0, opts.ray);
    const RaySolution rp1 = ray_solution(spec, E, 1, opts.X0, opts.ray);
    return stokes_multiplier_from_rays(rm1, r0, rp1, spec, E, opts);
}

// Central second difference of C' with one Richardson refinement.
inline Complex stokes_second_derivative(const ProblemSpec& spec, Complex E, double h = 0.0,
                                        const StokesOptions& opts = {}) {
    if (h <= 0.0) h = 1e-4 * (1.0 + std::abs(E));
    auto diff = [&](double step) {
        const StokesValue a = stokes_multiplier(spec, E + step, opts);
        const StokesValue b = stokes_multiplier(spec, E - step, opts);
        return (a.Cprime - b.Cprime) / (2.0 * step);
    };
    const Complex dh = diff(h);
    const Complex dh2 = diff(0.5 * h);
    return (4.0 * dh2 - dh) / 3.0;
}

// Numeric resolution of the closed form of -iC(0) for the all-zero
// coefficient family.  Two candidate expressions circulate; only positivity
// is asserted, the better match is reported.
struct C0Resolution {
    double value = 0.0;     // computed -iC(0)
    double formHalf = 0.0;  // 2 sin(pi m / (2 (m+2)))
    double formFull = 0.0;  // 2 sin(pi m / (m+2))
    double devHalf = 0.0;
    double devFull = 0.0;
    bool positive = false;
};

inline C0Resolution resolve_c0_closed_form(int m, const StokesOptions& opts = {}) {
    using std::numbers::pi;
    ProblemSpec spec{m, std::vector<double>(static_cast<std::size_t>(m - 1), 0.0)};
    const StokesValue sv = stokes_multiplier(spec, Complex{}, opts);
    C0Resolution r;
    r.value = std::real(Complex(0.0, -1.0) * sv.C);
    r.formHalf = 2.0 * std::sin(pi * m / (2.0 * (m + 2)));
    r.formFull = 2.0 * std::sin(pi * m / (m + 2.0));
    r.devHalf = std::abs(r.value - r.formHalf);
    r.devFull = std::abs(r.value - r.formFull);
    r.positive = r.value > 0.0;
    return r;
}

} // namespace ptstokes
