#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "ptstokes/detail/gauss_kronrod.hpp"
#include "ptstokes/detail/parallel.hpp"
#include "ptstokes/stokes.hpp"

namespace ptstokes {

// Eigenvalues are the zeros of C(a, E) in E.  This module brackets them on the
// real axis, polishes them by Newton iteration with the variational
// derivative, certifies counts with the argument principle, and compares the
// tail against the large-index asymptotic law.

struct EigenRecord {
    Complex E{};
    int n = -1; // position in the real-ordered spectrum, -1 if complex
    bool simple = true;
    double residual = 0.0; // |C(E)|
    Complex Cprime{};
};

struct SpectrumResult {
    std::vector<EigenRecord> records;
    int windowCount = 0;
    bool complete = false;
    std::vector<double> asymptoticDeviation; // per real record, vs the tail law
};

struct SpectrumOptions {
    StokesOptions stokes{};
    int gridN = 200;
    double rootTol = 1e-9;
    double imHalfWidth = 2.5;
    double nearMissFrac = 0.02; // |g| below this fraction of the median triggers refinement
    int threads = 1;
};

struct Rectangle {
    double reLo = 0.0, reHi = 1.0;
    double imLo = -1.0, imHi = 1.0;
};

namespace detail {

struct ScanData {
    std::vector<double> gridE;
    std::vector<Complex> C;
    std::vector<Complex> Cprime;
    std::vector<std::pair<double, double>> brackets;
    std::vector<double> nearMisses; // local minima of |Im C| without a sign change
};

inline ScanData scan_real_full(const ProblemSpec& spec, double Emin, double Emax, int gridN,
                               const SpectrumOptions& opts) {
    spec.validate();
    if (!(Emin < Emax)) throw InvalidInput("scan_real: requires Emin < Emax");
    if (gridN < 2) throw InvalidInput("scan_real: need at least two grid points");

    ScanData out;
    out.gridE.resize(static_cast<size_t>(gridN));
    out.C.resize(static_cast<size_t>(gridN));
    out.Cprime.resize(static_cast<size_t>(gridN));
    for (int i = 0; i < gridN; ++i)
        out.gridE[static_cast<size_t>(i)] = Emin + (Emax - Emin) * i / (gridN - 1);
    detail::parallel_for(static_cast<size_t>(gridN), opts.threads, [&](size_t i) {
        const StokesValue sv = stokes_multiplier(spec, Complex{out.gridE[i]}, opts.stokes);
        out.C[i] = sv.C;
        out.Cprime[i] = sv.Cprime;
    });

    std::vector<double> g(static_cast<size_t>(gridN));
    for (size_t i = 0; i < g.size(); ++i) g[i] = out.C[i].imag();

    std::vector<double> absg(g.size());
    for (size_t i = 0; i < g.size(); ++i) absg[i] = std::abs(g[i]);

    auto pushBracket = [&](double lo, double hi) { out.brackets.emplace_back(lo, hi); };
    auto crossing = [&](size_t i) { return g[i] * g[i + 1] < 0.0 || g[i + 1] == 0.0; };

    for (size_t i = 0; i + 1 < g.size(); ++i)
        if (g[i] != 0.0 && crossing(i)) pushBracket(out.gridE[i], out.gridE[i + 1]);

    // near-miss dips: interior |g| minima far below the neighbouring scale
    // with no sign change on the adjacent edges (close pairs or off-axis
    // zeros); the envelope of C decays, so the comparison must be local
    for (size_t i = 1; i + 1 < g.size(); ++i) {
        if (crossing(i - 1) || crossing(i)) continue;
        if (absg[i] > opts.nearMissFrac * std::max(absg[i - 1], absg[i + 1])) continue;
        const double lo = out.gridE[i - 1], hi = out.gridE[i + 1];
        const int fine = 21;
        std::vector<double> fe(static_cast<size_t>(fine)), fg(static_cast<size_t>(fine));
        detail::parallel_for(static_cast<size_t>(fine), opts.threads, [&](size_t j) {
            fe[j] = lo + (hi - lo) * static_cast<double>(j) / (fine - 1);
            fg[j] = stokes_multiplier(spec, Complex{fe[j]}, opts.stokes).C.imag();
        });
        bool found = false;
        for (int j = 0; j + 1 < fine; ++j)
            if (fg[static_cast<size_t>(j)] * fg[static_cast<size_t>(j + 1)] < 0.0) {
                pushBracket(fe[static_cast<size_t>(j)], fe[static_cast<size_t>(j + 1)]);
                found = true;
            }
        if (!found) out.nearMisses.push_back(out.gridE[i]);
    }
    std::sort(out.brackets.begin(), out.brackets.end());
    return out;
}

} // namespace detail

// Sign-change brackets of Im C(E) on a uniform grid with local refinement
// near close pairs.
inline std::vector<std::pair<double, double>> scan_real(const ProblemSpec& spec, double Emin, double Emax, int gridN,
                                                        const SpectrumOptions& opts = {}) {
    return detail::scan_real_full(spec, Emin, Emax, gridN, opts).brackets;
}

namespace detail {

inline bool is_simple_root(const ProblemSpec& spec, Complex E, Complex Cprime, const SpectrumOptions& opts,
                           double* floorOut = nullptr) {
    const double a = std::abs(Cprime);
    if (a > 1e-3) {
        if (floorOut) *floorOut = 1e-6;
        return true;
    }
    const Complex c2 = stokes_second_derivative(spec, E, 0.0, opts.stokes);
    const double floor = 1e-6 * (1.0 + std::abs(c2));
    if (floorOut) *floorOut = floor;
    return a > floor;
}

} // namespace detail

// Bisection to a narrow bracket, then Newton with the variational derivative.
inline EigenRecord refine_root(const ProblemSpec& spec, std::pair<double, double> bracket,
                               const SpectrumOptions& opts = {}) {
    spec.validate();
    auto g = [&](double E) { return stokes_multiplier(spec, Complex{E}, opts.stokes); };
    double lo = bracket.first, hi = bracket.second;
    StokesValue svLo = g(lo);
    double gLo = svLo.C.imag();
    {
        const double gHi = g(hi).C.imag();
        if (gLo == 0.0) hi = lo;
        else if (!(gLo * gHi < 0.0))
            throw InvalidInput("refine_root: no sign change on the bracket");
    }

    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        const double gMid = g(mid).C.imag();
        if (gLo * gMid <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            gLo = gMid;
        }
    }

    // Newton polish with a quadratic-convergence guard; stalls fall back to
    // bisection at 1e-12 width.
    Complex E{0.5 * (lo + hi)};
    StokesValue sv = stokes_multiplier(spec, E, opts.stokes);
    bool newtonOk = false;
    double prevAbs = std::abs(sv.C);
    for (int it = 0; it < 30; ++it) {
        if (std::abs(sv.C) <= opts.rootTol * (1.0 + std::abs(sv.Cprime))) {
            newtonOk = true;
            break;
        }
        if (sv.Cprime == Complex{}) break;
        const Complex En = E - sv.C / sv.Cprime;
        if (!(En.real() >= lo - 1.0) || !(En.real() <= hi + 1.0)) break; // left the basin
        const StokesValue svn = stokes_multiplier(spec, En, opts.stokes);
        if (it > 2 && std::abs(svn.C) > 0.5 * prevAbs && std::abs(svn.C) > opts.rootTol) break; // stalled
        prevAbs = std::abs(sv.C);
        E = En;
        sv = svn;
    }
    if (!newtonOk) {
        double blo = lo, bhi = hi, gblo = g(blo).C.imag();
        while (bhi - blo > 1e-12) {
            const double mid = 0.5 * (blo + bhi);
            const double gm = g(mid).C.imag();
            if (gblo * gm <= 0.0) bhi = mid;
            else {
                blo = mid;
                gblo = gm;
            }
        }
        E = Complex{0.5 * (blo + bhi)};
        sv = stokes_multiplier(spec, E, opts.stokes);
    }

    EigenRecord rec;
    rec.E = E;
    rec.residual = std::abs(sv.C);
    rec.Cprime = sv.Cprime;
    rec.simple = detail::is_simple_root(spec, E, sv.Cprime, opts);
    return rec;
}

// Damped complex Newton iteration from an arbitrary seed.
inline EigenRecord newton_complex(const ProblemSpec& spec, Complex guess, const SpectrumOptions& opts = {}) {
    spec.validate();
    Complex E = guess;
    StokesValue sv = stokes_multiplier(spec, E, opts.stokes);
    for (int it = 0; it < 50; ++it) {
        if (std::abs(sv.C) <= opts.rootTol * (1.0 + std::abs(sv.Cprime))) {
            EigenRecord rec;
            rec.E = E;
            rec.residual = std::abs(sv.C);
            rec.Cprime = sv.Cprime;
            rec.simple = detail::is_simple_root(spec, E, sv.Cprime, opts);
            return rec;
        }
        if (sv.Cprime == Complex{}) throw NoConvergence("newton_complex: vanishing derivative");
        const Complex full = -sv.C / sv.Cprime;
        double damp = 1.0;
        StokesValue svn = sv;
        Complex En = E;
        for (int half = 0; half < 8; ++half) {
            En = E + damp * full;
            svn = stokes_multiplier(spec, En, opts.stokes);
            if (std::abs(svn.C) < std::abs(sv.C)) break;
            damp *= 0.5;
        }
        E = En;
        sv = svn;
    }
    throw NoConvergence("newton_complex: no convergence after 50 iterations");
}

// Argument-principle count of zeros (with multiplicity) inside a rectangle.
inline int count_zeros(const ProblemSpec& spec, Rectangle rect, const SpectrumOptions& opts = {}) {
    spec.validate();
    using std::numbers::pi;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const Complex corners[4] = {Complex{rect.reLo, rect.imLo}, Complex{rect.reHi, rect.imLo},
                                    Complex{rect.reHi, rect.imHi}, Complex{rect.reLo, rect.imHi}};
        bool boundaryHit = false;
        Complex loop{};
        double errSum = 0.0;
        for (int e = 0; e < 4 && !boundaryHit; ++e) {
            const Complex a = corners[e], b = corners[(e + 1) % 4];
            auto f = [&](double t) {
                const Complex E = a + t * (b - a);
                const StokesValue sv = stokes_multiplier(spec, E, opts.stokes);
                if (std::abs(sv.C) < 1e-7 * (1.0 + std::abs(sv.Cprime))) boundaryHit = true;
                return sv.Cprime / sv.C;
            };
            double err = 0.0;
            const Complex edge = detail::gk15_adaptive(f, 0.0, 1.0, 2e-3, 9, &err) * (b - a);
            loop += edge;
            errSum += err * std::abs(b - a);
        }
        if (boundaryHit) {
            const double dre = 0.01 * (rect.reHi - rect.reLo), dim = 0.01 * (rect.imHi - rect.imLo);
            rect.reLo -= dre;
            rect.reHi += dre;
            rect.imLo -= dim;
            rect.imHi += dim;
            continue;
        }
        const double winding = (loop / Complex{0.0, 2.0 * pi}).real();
        const double rounded = std::round(winding);
        if (std::abs(winding - rounded) >= 0.25)
            throw QuadratureNoise("count_zeros: winding number residual too large");
        return static_cast<int>(rounded);
    }
    throw BoundaryZero("count_zeros: zero persists on the contour after inflation");
}

// Tail law constant K = Int_0^inf (sqrt(1+t^m) - t^{m/2}) dt, m >= 3.
inline double asymptotic_K(int m) {
    if (m < 3) throw UnsupportedDegree("asymptotic_K: the tail integral diverges for m = 2");
    // geometric panels to T, then the analytic tail through two orders
    const double T = 32.0;
    auto f = [m](double t) { return std::sqrt(1.0 + std::pow(t, m)) - std::pow(t, 0.5 * m); };
    double K = 0.0;
    double a = 0.0, b = 0.5;
    while (a < T) {
        K += detail::gk15_adaptive([&](double t) { return Complex{f(t), 0.0}; }, a, std::min(b, T), 1e-13, 10).real();
        a = b;
        b *= 2.0;
    }
    // sqrt(1+u) - sqrt(u) = 1/(2 sqrt(u)) - 1/(8 u^{3/2}) + ..., u = t^m
    K += std::pow(T, 1.0 - 0.5 * m) / (m - 2.0);
    K -= 0.125 * std::pow(T, 1.0 - 1.5 * m) / (1.5 * m - 1.0);
    return K;
}

// Large-index eigenvalue law with the correction factor set to one; n is the
// one-based index of the law.
inline std::vector<double> asymptotic_levels(int m, int nFrom, int nTo) {
    if (m < 3) throw UnsupportedDegree("asymptotic_levels: unsupported for m = 2");
    if (nFrom < 1 || nTo < nFrom) throw InvalidInput("asymptotic_levels: bad index range");
    using std::numbers::pi;
    const double K = asymptotic_K(m);
    const double s = std::sin(2.0 * pi / m);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(nTo - nFrom + 1));
    for (int n = nFrom; n <= nTo; ++n)
        out.push_back(std::pow((2.0 * n - 1.0) * pi / (2.0 * K * s), 2.0 * m / (m + 2.0)));
    return out;
}

// Full pipeline: bracket, polish, certify the count, hunt complex pairs when
// the count exceeds the real roots found, index and compare with the tail law.
inline SpectrumResult spectrum_pipeline(const ProblemSpec& spec, double Emin, double Emax,
                                        const SpectrumOptions& opts = {}) {
    spec.validate();
    SpectrumResult result;

    detail::ScanData scan = detail::scan_real_full(spec, Emin, Emax, opts.gridN, opts);
    for (const auto& br : scan.brackets) result.records.push_back(refine_root(spec, br, opts));

    auto tryAdd = [&](const EigenRecord& rec) {
        for (const auto& have : result.records)
            if (std::abs(have.E - rec.E) < 1e-6 * (1.0 + std::abs(rec.E))) return false;
        result.records.push_back(rec);
        return true;
    };

    double imH = opts.imHalfWidth;
    for (int round = 0; round < 4; ++round) {
        result.windowCount = count_zeros(spec, Rectangle{Emin, Emax, -imH, imH}, opts);
        const int missing = result.windowCount - static_cast<int>(result.records.size());
        if (missing > 0) {
            // complex seeds around near-miss dips first, then a coarse sweep
            std::vector<Complex> seeds;
            for (double e : scan.nearMisses)
                for (double d : {0.25, 0.5, 0.85})
                    seeds.push_back(Complex{e, d * imH});
            for (int i = 1; i < 8; ++i)
                for (double d : {0.35, 0.75})
                    seeds.push_back(Complex{Emin + (Emax - Emin) * i / 8.0, d * imH});
            for (const Complex& seed : seeds) {
                if (static_cast<int>(result.records.size()) >= result.windowCount) break;
                try {
                    EigenRecord rec = newton_complex(spec, seed, opts);
                    if (rec.E.real() < Emin || rec.E.real() > Emax || std::abs(rec.E.imag()) > imH) continue;
                    if (!tryAdd(rec)) continue;
                    if (std::abs(rec.E.imag()) > 1e-8) tryAdd(newton_complex(spec, std::conj(rec.E), opts));
                } catch (const NoConvergence&) {
                }
            }
        }
        // stability ladder: the count must not change under window doubling,
        // and no root may crowd the imaginary boundary
        double maxIm = 0.0;
        for (const auto& rec : result.records) maxIm = std::max(maxIm, std::abs(rec.E.imag()));
        const int wide = count_zeros(spec, Rectangle{Emin, Emax, -2.0 * imH, 2.0 * imH}, opts);
        if (wide != result.windowCount || maxIm > 0.8 * imH) {
            imH *= 2.0;
            continue;
        }
        break;
    }

    std::sort(result.records.begin(), result.records.end(), [](const EigenRecord& a, const EigenRecord& b) {
        if (a.E.real() != b.E.real()) return a.E.real() < b.E.real();
        return a.E.imag() < b.E.imag();
    });
    int n = 0;
    for (auto& rec : result.records) {
        const bool real = std::abs(rec.E.imag()) <= 1e-8 * (1.0 + std::abs(rec.E.real()));
        rec.n = real ? n++ : -1;
    }

    if (spec.m >= 3) {
        for (const auto& rec : result.records) {
            if (rec.n < 0) continue;
            const double law = asymptotic_levels(spec.m, rec.n + 1, rec.n + 1).front();
            result.asymptoticDeviation.push_back(std::abs(rec.E.real() - law) / std::abs(rec.E.real()));
        }
    }

    result.complete = static_cast<int>(result.records.size()) == result.windowCount;
    return result;
}

} // namespace ptstokes
