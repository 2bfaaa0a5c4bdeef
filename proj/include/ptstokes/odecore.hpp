#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "ptstokes/errors.hpp"
#include "ptstokes/potential.hpp"

namespace ptstokes {

// State advected along a straight segment in the complex plane:
//   Y'' = W(X) Y
//   Z'' = W(X) Z + eScale * Y      (variational equation in the spectral
//                                   parameter; eScale = dW/dE in this frame)
//   J'  = Y^2                      (running square integral)
struct SolutionState {
    Complex X{};
    Complex Y{};
    Complex Yp{};
    Complex Z{};
    Complex Zp{};
    Complex J{};
    Complex eScale{1.0};
};

struct IntegratorOptions {
    double relTol = 1e-11;
    double absTol = 1e-14;
    long maxSteps = 4000000;
    double initialStep = 0.0; // 0 = choose automatically

    void validate() const {
        if (!(relTol > 0.0) || !(absTol > 0.0)) throw InvalidInput("IntegratorOptions: tolerances must be positive");
        if (maxSteps < 1) throw InvalidInput("IntegratorOptions: maxSteps must be >= 1");
    }
};

namespace detail {

using Vec5 = std::array<Complex, 5>; // (Y, Yp, Z, Zp, J)

template <class WFn>
inline Vec5 rhs(const WFn& w, Complex x, Complex dir, const Vec5& y, Complex eScale) {
    const Complex W = w(x);
    return {dir * y[1], dir * (W * y[0]), dir * y[3], dir * (W * y[2] + eScale * y[0]), dir * (y[0] * y[0])};
}

inline double max_abs(const Vec5& y) {
    double m = 0.0;
    for (const auto& v : y) m = std::max(m, std::abs(v));
    return m;
}

} // namespace detail

// Adaptive Dormand-Prince 5(4) along the straight segment state.X -> target.
template <class WFn>
SolutionState integrate_segment(SolutionState state, WFn&& w, Complex target, const IntegratorOptions& opts) {
    opts.validate();
    if (state.X == target) throw InvalidInput("integrate_segment: target coincides with the current position");

    using detail::Vec5;
    const Complex dir = (target - state.X) / std::abs(target - state.X);
    const double L = std::abs(target - state.X);
    const Complex X0 = state.X;
    const Complex eScale = state.eScale;

    Vec5 y{state.Y, state.Yp, state.Z, state.Zp, state.J};

    double s = 0.0;
    double h = opts.initialStep > 0.0 ? opts.initialStep : std::min(L, 0.1 / (1.0 + std::sqrt(std::abs(w(X0)))));

    auto f = [&](double sv, const Vec5& yv) { return detail::rhs(w, X0 + sv * dir, dir, yv, eScale); };

    Vec5 k1 = f(s, y);
    long steps = 0;
    bool lastStep = false;
    while (true) {
        if (s >= L) break;
        if (++steps > opts.maxSteps) throw StepLimitExceeded("integrate_segment: step limit exceeded");
        if (s + h >= L) {
            h = L - s;
            lastStep = true;
        }

        Vec5 k2, k3, k4, k5, k6, k7, y5, y4err, ytmp;
        auto stage = [&](const Vec5& base, std::initializer_list<std::pair<const Vec5*, double>> terms) {
            Vec5 out = base;
            for (auto& [kp, a] : terms)
                for (int i = 0; i < 5; ++i) out[i] += h * a * (*kp)[i];
            return out;
        };

        ytmp = stage(y, {{&k1, 1.0 / 5}});
        k2 = f(s + h / 5, ytmp);
        ytmp = stage(y, {{&k1, 3.0 / 40}, {&k2, 9.0 / 40}});
        k3 = f(s + 3 * h / 10, ytmp);
        ytmp = stage(y, {{&k1, 44.0 / 45}, {&k2, -56.0 / 15}, {&k3, 32.0 / 9}});
        k4 = f(s + 4 * h / 5, ytmp);
        ytmp = stage(y, {{&k1, 19372.0 / 6561}, {&k2, -25360.0 / 2187}, {&k3, 64448.0 / 6561}, {&k4, -212.0 / 729}});
        k5 = f(s + 8 * h / 9, ytmp);
        ytmp = stage(y, {{&k1, 9017.0 / 3168}, {&k2, -355.0 / 33}, {&k3, 46732.0 / 5247}, {&k4, 49.0 / 176}, {&k5, -5103.0 / 18656}});
        k6 = f(s + h, ytmp);
        y5 = stage(y, {{&k1, 35.0 / 384}, {&k3, 500.0 / 1113}, {&k4, 125.0 / 192}, {&k5, -2187.0 / 6784}, {&k6, 11.0 / 84}});
        k7 = f(s + h, y5);

        // embedded 4th-order difference
        static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                                e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                                e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
        double errNorm = 0.0;
        for (int i = 0; i < 5; ++i) {
            const Complex e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opts.absTol + opts.relTol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double r = std::abs(e) / sc;
            errNorm += r * r;
        }
        errNorm = std::sqrt(errNorm / 5.0);

        if (errNorm <= 1.0) {
            s += h;
            y = y5;
            k1 = k7; // first-same-as-last
            if (detail::max_abs(y) > 1e250) throw Overflow("integrate_segment: component magnitude exceeded 1e250");
            if (lastStep) break;
        } else {
            lastStep = false;
        }
        const double fac = 0.9 * std::pow(std::max(errNorm, 1e-12), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
    }

    state.X = target;
    state.Y = y[0];
    state.Yp = y[1];
    state.Z = y[2];
    state.Zp = y[3];
    state.J = y[4];
    return state;
}

inline SolutionState integrate_segment(const SolutionState& state, const FullCoefficients& fc, Complex target,
                                       const IntegratorOptions& opts) {
    return integrate_segment(state, [&fc](Complex x) { return eval_w(x, fc); }, target, opts);
}

// Divide (Y, Yp, Z, Zp) by g = max(|Y|, |Yp|) and J by g^2.  The returned log
// factor accumulates so absolute magnitudes stay recoverable; Wronskian ratios
// and the connection coefficient are invariant under this rescaling.
inline std::pair<SolutionState, Complex> renormalize(SolutionState state) {
    const double g = std::max(std::abs(state.Y), std::abs(state.Yp));
    if (g == 0.0 || g == 1.0) return {state, Complex{}};
    state.Y /= g;
    state.Yp /= g;
    state.Z /= g;
    state.Zp /= g;
    state.J /= g * g;
    return {state, Complex(std::log(g), 0.0)};
}

} // namespace ptstokes
