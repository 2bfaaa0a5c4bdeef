#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace ptstokes::detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
struct GK15 {
    // Kronrod abscissae (positive half; nodes are symmetric)
    static constexpr std::array<double, 8> xgk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wgk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

struct PanelResult {
    std::complex<double> kronrod{};
    double error = 0.0;
};

// One Gauss-Kronrod panel of f over the real interval [a, b]; f may be
// complex-valued.
template <class Fn>
PanelResult gk15_panel(Fn&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    std::complex<double> gauss{}, kron{};
    for (std::size_t i = 0; i < 8; ++i) {
        const double x = GK15::xgk[i];
        if (i == 7) {
            const auto fm = f(mid);
            kron += GK15::wgk[7] * fm;
            gauss += GK15::wg[3] * fm;
            break;
        }
        const auto fp = f(mid + h * x);
        const auto fmn = f(mid - h * x);
        kron += GK15::wgk[i] * (fp + fmn);
        if (i % 2 == 1) gauss += GK15::wg[i / 2] * (fp + fmn);
    }
    PanelResult r;
    r.kronrod = kron * h;
    r.error = std::abs((kron - gauss) * h);
    return r;
}

// Adaptive bisection driver.
template <class Fn>
std::complex<double> gk15_adaptive(Fn&& f, double a, double b, double tol, int maxDepth, double* errOut = nullptr) {
    struct Frame {
        double a, b;
        int depth;
    };
    std::complex<double> total{};
    double errTotal = 0.0;
    std::vector<Frame> stack{{a, b, 0}};
    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        const PanelResult pr = gk15_panel(f, fr.a, fr.b);
        const double localTol = tol * (fr.b - fr.a) / (b - a);
        if (pr.error <= localTol || fr.depth >= maxDepth) {
            total += pr.kronrod;
            errTotal += pr.error;
        } else {
            const double m = 0.5 * (fr.a + fr.b);
            stack.push_back({fr.a, m, fr.depth + 1});
            stack.push_back({m, fr.b, fr.depth + 1});
        }
    }
    if (errOut) *errOut = errTotal;
    return total;
}

} // namespace ptstokes::detail
