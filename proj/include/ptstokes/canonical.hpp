#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ptstokes/detail/jet.hpp"
#include "ptstokes/detail/tseries.hpp"
#include "ptstokes/errors.hpp"
#include "ptstokes/odecore.hpp"
#include "ptstokes/potential.hpp"

namespace ptstokes {

// Construction of the recessive solution of Y'' = W(X) Y on the anti-Stokes
// rays, frame by frame.
//
// In the frame coordinate xi (positive real axis of the rotated frame) the
// solution and its logarithmic derivative admit the asymptotic representation
//
//   F(xi) = exp(-u(xi)),      F'(xi)/F(xi) = -v(xi),
//
// where v solves the Riccati equation v^2 - v' = W and is expanded as
// v = sqrt(W) + delta with delta = (sqrt(W)' + delta' - delta^2) / (2 sqrt(W)).
// All of this lives in a truncated Laurent algebra in t = xi^{-1/2}.  The
// primitive u(xi) collects the growing powers, the log term (the power
// prefactor exponent) and the decaying tail of the series.  Keeping the
// decaying terms and the Riccati corrections is what makes initialization at
// moderate radius accurate to ~1e-12; the leading-order form alone would need
// astronomically large radii for odd degree.
//
// Coefficients are dual numbers carrying d/dE, so the variational components
// (Z, Z') are seeded analytically in every frame, including the log-term
// contribution that appears for even degree.

struct RayOptions {
    IntegratorOptions integ{};
    double radiusOverride = 0.0; // 0 = automatic schedule
    bool certify = true;
    double certTol = 1e-8;
    int seriesCut = 48;     // truncation degree in t = X^{-1/2}
    double chunkEFolds = 25.0; // renormalize after roughly this much growth
};

namespace detail {

struct WkbSeries {
    TSeries v;  // full Riccati-corrected logarithmic derivative
    int m = 2;

    // Evaluate v at X = R.
    Jet v_at(double R) const { return v.eval(R); }

    // Evaluate the primitive u(R) = Int v dX with the constant fixed so that
    // the decaying part vanishes at infinity.  Term t^j integrates to
    // (2/(2-j)) X^{(2-j)/2}; the j = 2 term integrates to a logarithm.
    Jet u_at(double R) const {
        Jet acc;
        const double lnR = std::log(R);
        for (int j = v.lo(); j <= v.cut(); ++j) {
            const Jet cj = v.get(j);
            if (cj.v == Complex{} && cj.d == Complex{}) continue;
            if (j == 2) {
                acc += cj * lnR;
            } else {
                acc += cj * (2.0 / (2.0 - j)) * std::pow(R, 0.5 * (2.0 - j));
            }
        }
        return acc;
    }

    // Relative size of the last retained terms at radius R; a crude
    // self-consistency measure for the truncation.
    double truncation_estimate(double R) const {
        const double t = 1.0 / std::sqrt(R);
        double tail = 0.0;
        for (int j = v.cut() - 3; j <= v.cut(); ++j)
            tail += std::abs(v.get(j).v) * std::pow(t, j);
        const double scale = std::abs(v_at(R).v) + 1.0;
        return tail / scale;
    }
};

// Build the Riccati-corrected series for frame coefficients fc whose last
// slot depends on the spectral parameter with weight eScale.
inline WkbSeries build_wkb_series(const FullCoefficients& fc, Complex eScale, int cut) {
    const int m = fc.m;
    TSeries frac(0, cut);
    frac.set(0, Jet{1.0});
    for (int j = 1; j <= m; ++j) {
        if (2 * j > cut) break;
        Jet cj{fc.c[static_cast<size_t>(j - 1)]};
        if (j == m) cj.d = eScale;
        frac.set(2 * j, frac.get(2 * j) + cj);
    }
    const TSeries g = TSeries::sqrt_unit(frac);
    const TSeries v0 = TSeries::monomial(-m, Jet{1.0}, cut) * g;
    const TSeries inv2v0 = (v0 * TSeries::monomial(0, Jet{2.0}, cut)).reciprocal();

    TSeries delta(0, cut);
    const TSeries v0p = v0.ddx();
    const int iters = cut / (m + 2) + 3;
    for (int it = 0; it < iters; ++it) delta = (v0p + delta.ddx() - delta * delta) * inv2v0;

    WkbSeries w;
    w.v = v0 + delta;
    w.m = m;
    return w;
}

// d/dE of the power-prefactor exponent r for the frame-0 coefficients;
// nonzero only for even degree, where r = -m/4 - b_{1+m/2}.
inline Jet r_exponent_jet(const FullCoefficients& a0) {
    const int m = a0.m;
    if (m % 2 == 1) return Jet{Complex(-m / 4.0, 0.0)};
    const int n = 1 + m / 2;
    std::vector<Jet> b(static_cast<size_t>(n));
    auto cj = [&](int j) -> Jet {
        if (j < 1 || j > m) return Jet{};
        Jet out{a0.c[static_cast<size_t>(j - 1)]};
        if (j == m) out.d = Complex{1.0};
        return out;
    };
    for (int k = 1; k <= n; ++k) {
        Jet acc = cj(k);
        for (int i = 1; i < k; ++i) acc -= b[static_cast<size_t>(i - 1)] * b[static_cast<size_t>(k - i - 1)];
        b[static_cast<size_t>(k - 1)] = acc * 0.5;
    }
    return Jet{Complex(-m / 4.0, 0.0)} - b[static_cast<size_t>(n - 1)];
}

} // namespace detail

// Recessive-solution data on one ray, mapped back to unrotated coordinates.
// Physical values are exp(logScale) * atOrigin.{Y,Yp,Z,Zp}; the physical
// square integral from X0 out to infinity along the ray is
// exp(2 * logScale) * Jray.
struct RaySolution {
    int k = 0;
    SolutionState atOrigin{};
    Complex logScale{};
    Complex Jray{};
    double Rused = 0.0;
    double certResidual = 0.0;
};

// Sampled value of the ray solution at frame radius s (X = s * omega^{-k});
// physical value is exp(logScale) * Y.
struct RaySample {
    double s = 0.0;
    Complex Y{};
    Complex logScale{};
};

// Asymptotic initial data at frame radius R.  Returns the rescaled state
// (Y = 1) together with the removed log-magnitude.  J is seeded to zero; the
// ray driver adds the analytic tail of the square integral separately.
inline std::pair<SolutionState, Complex> initial_state(const FullCoefficients& fc, double R,
                                                       const detail::WkbSeries& series, Complex eScale) {
    if (series.truncation_estimate(R) > 1e-8)
        throw RadiusTooSmall("initial_state: asymptotic series not converged at this radius");
    const detail::Jet u = series.u_at(R);
    const detail::Jet v = series.v_at(R);
    SolutionState st;
    st.X = Complex(R, 0.0);
    st.Y = Complex{1.0};
    st.Yp = -v.v;
    st.Z = -u.d;
    st.Zp = -v.d + v.v * u.d;
    st.J = Complex{};
    st.eScale = eScale;
    return {st, -u.v};
}

// Spec-facing overload: builds the series from the coefficients directly.
inline std::pair<SolutionState, Complex> initial_state(const FullCoefficients& fc, double R,
                                                       const AsymptoticData& /*asym*/, Complex eScale = Complex{1.0},
                                                       int seriesCut = 48) {
    return initial_state(fc, R, detail::build_wkb_series(fc, eScale, seriesCut), eScale);
}

namespace detail {

struct RayRunResult {
    SolutionState state{}; // frame coordinates at xi0
    Complex logScale{};
    std::vector<RaySample> frameSamples;
};

inline RayRunResult run_ray_inward(const FullCoefficients& fcK, const WkbSeries& series, Complex eScale, double R,
                                   Complex xi0, const RayOptions& opts, const std::vector<double>* sampleRadii) {
    auto [st, logScale] = initial_state(fcK, R, series, eScale);
    st.J = -inverse(series.v_at(R)).v * 0.5; // analytic tail of Int Y^2 beyond R

    RayRunResult out;

    // Waypoints: renormalization boundaries plus requested sample radii,
    // walked from R toward xi0 along the straight segment.
    std::vector<double> stops; // distances from R along the segment
    const Complex dir = (xi0 - st.X) / std::abs(xi0 - st.X);
    const double L = std::abs(xi0 - st.X);
    std::vector<double> sampleDist;
    if (sampleRadii) {
        // Sampling assumes the ray through the origin (xi0 = 0), where frame
        // radius s sits at distance R - s.
        for (double s : *sampleRadii)
            if (s < R) sampleDist.push_back(R - s);
        std::sort(sampleDist.begin(), sampleDist.end());
    }
    std::size_t nextSample = 0;
    double travelled = 0.0;
    while (travelled < L) {
        const Complex xi = st.X;
        double step = opts.chunkEFolds / (1.0 + std::sqrt(std::abs(eval_w(xi, fcK))));
        step = std::min(step, L - travelled);
        double target = travelled + step;
        bool isSample = false;
        if (nextSample < sampleDist.size() && sampleDist[nextSample] <= target + 1e-12) {
            target = sampleDist[nextSample];
            ++nextSample;
            isSample = true;
        }
        if (target > travelled) {
            const Complex xiTarget = (target >= L) ? xi0 : Complex(R, 0.0) + dir * target;
            st = integrate_segment(st, fcK, xiTarget, opts.integ);
            travelled = target;
        }
        if (isSample) out.frameSamples.push_back({R - travelled, st.Y, logScale});
        auto [renorm, logG] = renormalize(st);
        st = renorm;
        logScale += logG;
    }
    out.state = st;
    out.logScale = logScale;
    return out;
}

} // namespace detail

// Canonical ray solution Y_k with prefactors applied, evaluated at X0, plus
// the square-integral accumulator along the ray.  When sampleRadii is given
// (requires X0 = 0), values at those frame radii are appended to samples.
inline RaySolution ray_solution(const ProblemSpec& spec, Complex E, int k, Complex X0, const RayOptions& opts = {},
                                const std::vector<double>* sampleRadii = nullptr,
                                std::vector<RaySample>* samples = nullptr) {
    spec.validate();
    if (k < -1 || k > 1) throw InvalidInput("ray_solution: frame index must be -1, 0 or 1");
    if (sampleRadii && X0 != Complex{}) throw InvalidInput("ray_solution: sampling requires X0 = 0");

    const int m = spec.m;
    const FullCoefficients a0 = assemble(spec, E);
    const FullCoefficients fcK = rotate_coefficients(a0, k);
    const Complex eScale = omega_pow(m, Complex(static_cast<double>(k) * m, 0.0));
    const detail::WkbSeries series = detail::build_wkb_series(fcK, eScale, opts.seriesCut);
    const Complex xi0 = omega_pow(m, Complex(static_cast<double>(k), 0.0)) * X0;

    double R = opts.radiusOverride > 0.0
                   ? opts.radiusOverride
                   : std::max({8.0, std::pow(6.0 * (m + 2), 2.0 / (m + 2)), 3.0 * std::pow(std::abs(E), 1.0 / m)});
    if (sampleRadii)
        for (double s : *sampleRadii) R = std::max(R, 1.05 * s);

    detail::RayRunResult lo = detail::run_ray_inward(fcK, series, eScale, R, xi0, opts, sampleRadii);
    double certResidual = 0.0;
    double Rused = R;
    if (opts.certify) {
        // A fixed override radius gets a single-shot certificate; the
        // automatic schedule grows R until the comparison settles.
        const int attempts = opts.radiusOverride > 0.0 ? 1 : 10;
        bool ok = false;
        for (int attempt = 0; attempt < attempts; ++attempt) {
            const double Rhi = 1.5 * R;
            detail::RayRunResult hi = detail::run_ray_inward(fcK, series, eScale, Rhi, xi0, opts, sampleRadii);
            const Complex yLo = std::exp(lo.logScale) * lo.state.Y, ypLo = std::exp(lo.logScale) * lo.state.Yp;
            const Complex yHi = std::exp(hi.logScale) * hi.state.Y, ypHi = std::exp(hi.logScale) * hi.state.Yp;
            certResidual = (std::abs(yLo - yHi) + std::abs(ypLo - ypHi)) / (std::abs(yHi) + std::abs(ypHi));
            lo = std::move(hi);
            R = Rhi;
            Rused = Rhi;
            if (certResidual <= opts.certTol) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConvergenceFailure("ray_solution: radius certificate failed to converge");
    }

    // Map frame values to unrotated coordinates.
    const detail::Jet r0 = detail::r_exponent_jet(a0);
    const Complex Pk = omega_pow(m, static_cast<double>(k) * (0.5 * m + r0.v));
    using std::numbers::pi;
    const Complex lnw(0.0, -2.0 * pi / (m + 2));
    const Complex dk = static_cast<double>(k) * lnw * r0.d; // d/dE log Pk
    const Complex wk = omega_pow(m, Complex(static_cast<double>(k), 0.0));

    RaySolution ray;
    ray.k = k;
    ray.Rused = Rused;
    ray.certResidual = certResidual;
    ray.logScale = lo.logScale;
    const SolutionState& fs = lo.state;
    ray.atOrigin.X = X0;
    ray.atOrigin.Y = Pk * fs.Y;
    ray.atOrigin.Yp = Pk * wk * fs.Yp;
    ray.atOrigin.Z = Pk * (dk * fs.Y + fs.Z);
    ray.atOrigin.Zp = Pk * wk * (dk * fs.Yp + fs.Zp);
    ray.atOrigin.J = fs.J;
    ray.atOrigin.eScale = eScale;
    // J accumulated R -> xi0 with a seeded tail; orientation flip gives the
    // outward integral, and dX = omega^{-k} dxi maps it to unrotated
    // coordinates.
    ray.Jray = -omega_pow(m, Complex(-static_cast<double>(k), 0.0)) * Pk * Pk * fs.J;

    if (samples) {
        samples->clear();
        samples->reserve(lo.frameSamples.size());
        for (const RaySample& fsamp : lo.frameSamples)
            samples->push_back({fsamp.s, Pk * fsamp.Y, fsamp.logScale});
        std::reverse(samples->begin(), samples->end()); // ascending radius
    }
    return ray;
}

} // namespace ptstokes
