#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ptstokes/errors.hpp"

namespace ptstokes {

using Complex = std::complex<double>;

// Hamiltonian family p^2 - [(iq)^m + a_1 (iq)^{m-1} + ... + a_{m-1}(iq)].
// The constant coefficient is always absorbed into the spectral parameter, so
// only a_1 .. a_{m-1} are stored.
struct ProblemSpec {
    int m = 2;
    std::vector<double> coeffs; // a_1 .. a_{m-1}

    void validate() const {
        if (m < 2) throw InvalidInput("ProblemSpec: degree m must be >= 2");
        if (coeffs.size() != static_cast<std::size_t>(m - 1))
            throw InvalidInput("ProblemSpec: expected exactly m-1 coefficients");
        for (double a : coeffs)
            if (!std::isfinite(a)) throw InvalidInput("ProblemSpec: coefficients must be finite");
    }

    std::uint64_t hash() const {
        // FNV-1a over the degree and raw coefficient bytes
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](const void* p, std::size_t n) {
            const auto* b = static_cast<const unsigned char*>(p);
            for (std::size_t i = 0; i < n; ++i) {
                h ^= b[i];
                h *= 1099511628211ull;
            }
        };
        mix(&m, sizeof m);
        if (!coeffs.empty()) mix(coeffs.data(), coeffs.size() * sizeof(double));
        return h;
    }
};

// Full monic polynomial data W(X) = X^m + c_1 X^{m-1} + ... + c_m in some
// rotated frame; c_m carries the spectral parameter.
struct FullCoefficients {
    int m = 2;
    std::vector<Complex> c; // c_1 .. c_m
    int frame = 0;
};

inline Complex omega(int m) {
    using std::numbers::pi;
    return std::exp(Complex(0.0, -2.0 * pi / (m + 2)));
}

// omega(m) raised to an arbitrary complex exponent, defined through the
// principal logarithm -2*pi*i/(m+2) so that the power is entire in w.
inline Complex omega_pow(int m, Complex w) {
    using std::numbers::pi;
    return std::exp(w * Complex(0.0, -2.0 * pi / (m + 2)));
}

inline FullCoefficients assemble(const ProblemSpec& spec, Complex E) {
    spec.validate();
    FullCoefficients fc;
    fc.m = spec.m;
    fc.c.assign(spec.coeffs.begin(), spec.coeffs.end());
    fc.c.push_back(E);
    fc.frame = 0;
    return fc;
}

// Frame rotation: c_j -> omega^{kj} c_j.
inline FullCoefficients rotate_coefficients(const FullCoefficients& fc, int k) {
    FullCoefficients out = fc;
    if (k == 0) return out;
    for (int j = 1; j <= fc.m; ++j)
        out.c[static_cast<std::size_t>(j - 1)] *= omega_pow(fc.m, Complex(static_cast<double>(j) * k, 0.0));
    out.frame += k;
    return out;
}

// Coefficients b_k of sqrt(1 + c_1 X^{-1} + ... + c_m X^{-m}) =
// 1 + sum b_k X^{-k}, plus the exponent r of the recessive solution's power
// prefactor.
struct AsymptoticData {
    std::vector<Complex> b; // b_1 .. b_N
    Complex r{};
    int m = 2;

    Complex bval(int k) const {
        if (k < 1 || k > static_cast<int>(b.size())) return Complex{};
        return b[static_cast<std::size_t>(k - 1)];
    }
};

inline Complex r_exponent(const FullCoefficients& fc, const AsymptoticData& asym);

inline AsymptoticData sqrt_w_series(const FullCoefficients& fc, int order) {
    if (order < fc.m + 2) throw InvalidInput("sqrt_w_series: order must be >= m + 2");
    AsymptoticData a;
    a.m = fc.m;
    a.b.assign(static_cast<std::size_t>(order), Complex{});
    auto cval = [&fc](int j) -> Complex {
        if (j < 1 || j > fc.m) return Complex{};
        return fc.c[static_cast<std::size_t>(j - 1)];
    };
    for (int n = 1; n <= order; ++n) {
        Complex acc = cval(n);
        for (int i = 1; i < n; ++i) acc -= a.b[static_cast<std::size_t>(i - 1)] * a.b[static_cast<std::size_t>(n - i - 1)];
        a.b[static_cast<std::size_t>(n - 1)] = 0.5 * acc;
    }
    a.r = r_exponent(fc, a);
    return a;
}

inline Complex r_exponent(const FullCoefficients& fc, const AsymptoticData& asym) {
    if (fc.m % 2 == 1) return Complex(-fc.m / 4.0, 0.0);
    return Complex(-fc.m / 4.0, 0.0) - asym.bval(1 + fc.m / 2);
}

// Principal part of the primitive of sqrt(W): only strictly positive powers of
// X are kept; the X^0 and log terms are excluded (the log term lives in r).
inline Complex action_S(Complex X, const FullCoefficients& fc, const AsymptoticData& asym) {
    if (X == Complex{}) throw InvalidInput("action_S: X must be nonzero");
    const int m = fc.m;
    Complex s{};
    for (int k = 0; 2 * k < m + 2; ++k) {
        const Complex bk = (k == 0) ? Complex{1.0} : asym.bval(k);
        const double p = 0.5 * (m + 2 - 2 * k);
        s += bk * (2.0 / (m + 2 - 2 * k)) * std::pow(X, Complex(p, 0.0));
    }
    return s;
}

// Termwise derivative of action_S (the positive-power truncation of sqrt(W)).
inline Complex action_S_deriv(Complex X, const FullCoefficients& fc, const AsymptoticData& asym) {
    if (X == Complex{}) throw InvalidInput("action_S_deriv: X must be nonzero");
    const int m = fc.m;
    Complex s{};
    for (int k = 0; 2 * k < m + 2; ++k) {
        const Complex bk = (k == 0) ? Complex{1.0} : asym.bval(k);
        const double p = 0.5 * m - k;
        s += bk * std::pow(X, Complex(p, 0.0));
    }
    return s;
}

inline Complex eval_w(Complex X, const FullCoefficients& fc) {
    Complex w{1.0};
    for (int j = 1; j <= fc.m; ++j) w = w * X + fc.c[static_cast<std::size_t>(j - 1)];
    return w;
}

} // namespace ptstokes
