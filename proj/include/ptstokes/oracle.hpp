#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <vector>

#include "ptstokes/errors.hpp"
#include "ptstokes/potential.hpp"

namespace ptstokes {

// Low-accuracy cross-validation oracle: dense diagonalization of
// p^2 + V(q) in a real harmonic-oscillator basis.  Valid for m = 2 and m = 3,
// where the decay sectors contain the real axis; the eigensolver is the only
// external numerical routine in the artifact.
struct OracleResult {
    std::vector<Complex> eigenvalues; // sorted by real part
    int basisSize = 0;
    double scale = 1.0;
};

inline OracleResult diagonalize(int m, double alpha, int basisSize, double scale = 1.0) {
    if (m != 2 && m != 3) throw UnsupportedDegree("diagonalize: oracle supports m = 2 and m = 3 only");
    if (basisSize < 4 || basisSize > 400) throw InvalidInput("diagonalize: basis size out of range");
    if (!(scale > 0.0)) throw InvalidInput("diagonalize: scale must be positive");

    using Mat = Eigen::MatrixXcd;
    const int pad = m + 1; // keep truncation artifacts out of the retained block
    const int N = basisSize + pad;

    Mat a = Mat::Zero(N, N);
    for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Mat ad = a.adjoint();

    const double invSqrt2 = 1.0 / std::sqrt(2.0);
    const Mat q = scale * invSqrt2 * (a + ad);
    Mat p2 = -(ad - a) * (ad - a) / (2.0 * scale * scale);

    // V(q) = -[(iq)^m + a_{m-1} (iq)] with a_{m-1} = -alpha, expanded in
    // powers of q with complex coefficients
    std::vector<Complex> vq(static_cast<size_t>(m) + 1, Complex{});
    const Complex iunit{0.0, 1.0};
    vq[static_cast<size_t>(m)] = -std::pow(iunit, m);
    vq[1] += -(-alpha) * iunit;

    Mat H = p2;
    Mat qpow = Mat::Identity(N, N);
    for (int d = 0; d <= m; ++d) {
        if (vq[static_cast<size_t>(d)] != Complex{}) H += vq[static_cast<size_t>(d)] * qpow;
        if (d < m) qpow = qpow * q;
    }

    const Mat Hcrop = H.topLeftCorner(basisSize, basisSize);
    Eigen::ComplexEigenSolver<Mat> solver(Hcrop, false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("diagonalize: eigensolver failed");

    OracleResult out;
    out.basisSize = basisSize;
    out.scale = scale;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + basisSize);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return out;
}

// First `count` oracle levels near the real axis (or conjugate pairs), with a
// basis-doubling self-convergence certificate.
inline std::vector<Complex> oracle_levels(int m, double alpha, int count, int basisSize = 200, double scale = 1.0,
                                          double imWindow = 6.0) {
    auto pick = [&](const OracleResult& res) {
        std::vector<Complex> sel;
        for (const Complex& e : res.eigenvalues) {
            if (std::abs(e.imag()) > imWindow) continue;
            sel.push_back(e);
            if (static_cast<int>(sel.size()) == count) break;
        }
        return sel;
    };
    const auto base = pick(diagonalize(m, alpha, basisSize, scale));
    const int bigger = std::min(400, basisSize + basisSize / 2);
    const auto refined = pick(diagonalize(m, alpha, bigger, scale));
    if (static_cast<int>(base.size()) < count || static_cast<int>(refined.size()) < count)
        throw ConvergenceFailure("oracle_levels: not enough levels in the window");
    // conjugate partners can swap order between runs; match by distance
    for (const Complex& e : base) {
        double best = 1e300;
        for (const Complex& f : refined) best = std::min(best, std::abs(e - f));
        if (best > 1e-4) throw ConvergenceFailure("oracle_levels: basis-growth certificate failed");
    }
    return refined;
}

} // namespace ptstokes
