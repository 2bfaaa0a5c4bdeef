#pragma once

#include <complex>

namespace ptstokes::detail {

using Complex = std::complex<double>;

// First-order dual number over the complex field: value plus derivative with
// respect to the spectral parameter.  Propagating these through the series
// construction yields the variational seed analytically instead of by finite
// differences.
struct Jet {
    Complex v{0.0, 0.0};
    Complex d{0.0, 0.0};

    Jet() = default;
    Jet(Complex value) : v(value) {}
    Jet(Complex value, Complex deriv) : v(value), d(deriv) {}
    Jet(double value) : v(value) {}

    Jet& operator+=(const Jet& o) {
        v += o.v;
        d += o.d;
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v -= o.v;
        d -= o.d;
        return *this;
    }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator-(const Jet& a) { return {-a.v, -a.d}; }
inline Jet operator*(const Jet& a, const Jet& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
inline Jet operator*(const Jet& a, Complex s) { return {a.v * s, a.d * s}; }
inline Jet operator*(Complex s, const Jet& a) { return a * s; }
inline Jet operator*(const Jet& a, double s) { return {a.v * s, a.d * s}; }
inline Jet operator*(double s, const Jet& a) { return a * s; }

inline Jet inverse(const Jet& a) {
    const Complex iv = 1.0 / a.v;
    return {iv, -a.d * iv * iv};
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
inline Jet operator/(const Jet& a, double s) { return {a.v / s, a.d / s}; }

inline Jet exp(const Jet& a) {
    const Complex e = std::exp(a.v);
    return {e, e * a.d};
}

} // namespace ptstokes::detail
