#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "ptstokes/canonical.hpp"
#include "ptstokes/stokes.hpp"

using namespace ptstokes;
using Catch::Matchers::WithinAbs;

namespace {

Complex physical_Y(const RaySolution& r) { return std::exp(r.logScale) * r.atOrigin.Y; }
Complex physical_Yp(const RaySolution& r) { return std::exp(r.logScale) * r.atOrigin.Yp; }

} // namespace

TEST_CASE("initial data magnitude for the pure cubic") {
    // With all coefficients zero the exponent reduces to the leading action
    // plus the power prefactor; Riccati corrections are tiny at R >= 10.
    FullCoefficients fc{3, {Complex{}, Complex{}, Complex{}}, 0};
    const auto asym = sqrt_w_series(fc, 10);
    const double R = 12.0;
    auto [st, logScale] = initial_state(fc, R, asym);
    const Complex expected = -0.75 * std::log(R) - (2.0 / 5.0) * std::pow(R, 2.5);
    REQUIRE_THAT(std::abs(logScale - expected), WithinAbs(0.0, 1e-2));
    REQUIRE(st.Y == Complex{1.0});
    // derivative ratio close to -sqrt(W)
    REQUIRE_THAT(std::abs(st.Yp + std::sqrt(std::pow(R, 3.0))) / std::pow(R, 1.5), WithinAbs(0.0, 1e-2));
}

TEST_CASE("variational seed at the initial radius") {
    const double R = 14.0;
    SECTION("degree above two: suppressed like the first decaying term") {
        FullCoefficients fc{3, {Complex{}, Complex{}, Complex{2.0}}, 0};
        const auto asym = sqrt_w_series(fc, 10);
        auto [st, logScale] = initial_state(fc, R, asym);
        // leading decaying contribution to d/dE of the exponent is R^{-1/2}
        REQUIRE(std::abs(st.Z) <= 2.0 / std::sqrt(R));
        REQUIRE(std::abs(st.Z) > 0.0);
    }
    SECTION("degree two: log-term derivative dominates") {
        FullCoefficients fc{2, {Complex{}, Complex{1.0}}, 0};
        const auto asym = sqrt_w_series(fc, 8);
        auto [st, logScale] = initial_state(fc, R, asym);
        REQUIRE_THAT(std::abs(st.Z + 0.5 * std::log(R)), WithinAbs(0.0, 0.05));
    }
}

TEST_CASE("radius guard") {
    FullCoefficients fc{3, {Complex{}, Complex{}, Complex{30.0}}, 0};
    const auto asym = sqrt_w_series(fc, 10);
    REQUIRE_THROWS_AS(initial_state(fc, 1.2, asym), RadiusTooSmall);
}

TEST_CASE("recessive gaussian for the degree-two problem") {
    // W = X^2 + E with E = -1 admits exp(-X^2/2), which is the canonical
    // solution itself (prefactor exponent 0, action X^2/2).
    ProblemSpec spec{2, {0.0}};
    const RaySolution ray = ray_solution(spec, Complex{-1.0}, 0, Complex{});
    const Complex y0 = physical_Y(ray);
    const Complex yp0 = physical_Yp(ray);
    REQUIRE_THAT(std::abs(y0 - 1.0), WithinAbs(0.0, 1e-8));
    REQUIRE_THAT(std::abs(yp0), WithinAbs(0.0, 1e-8));

    // interior point check against the closed form
    const RaySolution at = ray_solution(spec, Complex{-1.0}, 0, Complex{0.8});
    REQUIRE_THAT(std::abs(physical_Y(at) - std::exp(-0.32)), WithinAbs(0.0, 1e-8));
}

TEST_CASE("reflection pairing of the two boundary rays") {
    ProblemSpec spec{3, {0.4, -1.1}};
    const Complex E{2.3, 0.0};
    const RaySolution r1 = ray_solution(spec, E, 1, Complex{});
    const RaySolution rm1 = ray_solution(spec, E, -1, Complex{});
    REQUIRE_THAT(std::abs(physical_Y(rm1) - std::conj(physical_Y(r1))), WithinAbs(0.0, 1e-8));
    REQUIRE_THAT(std::abs(physical_Yp(rm1) - std::conj(physical_Yp(r1))), WithinAbs(0.0, 1e-8));
}

TEST_CASE("wronskian normalization across random problems") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> energy(-5.0, 30.0);
    for (int trial = 0; trial < 8; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 4);
        ProblemSpec spec{m, std::vector<double>(static_cast<size_t>(m - 1))};
        for (auto& a : spec.coeffs) a = coeff(rng);
        const Complex E{energy(rng), 0.0};
        const StokesValue sv = stokes_multiplier(spec, E);
        INFO("m=" << m << " E=" << E.real());
        REQUIRE(sv.wrCheck <= 1e-6);
    }
}

TEST_CASE("matching point independence") {
    ProblemSpec spec{3, {0.0, 0.0}};
    const Complex E{1.5, 0.0};
    StokesOptions optA;
    StokesOptions optB;
    optB.X0 = Complex{0.3, 0.1};
    const StokesValue a = stokes_multiplier(spec, E, optA);
    const StokesValue b = stokes_multiplier(spec, E, optB);
    REQUIRE_THAT(std::abs(a.C - b.C), WithinAbs(0.0, 1e-8));
    REQUIRE_THAT(std::abs(a.wr01 - b.wr01), WithinAbs(0.0, 1e-8));
}

TEST_CASE("radius robustness") {
    ProblemSpec spec{4, {0.5, -0.3, 1.2}};
    const Complex E{6.0, 0.0};
    StokesOptions base;
    const StokesValue ref = stokes_multiplier(spec, E, base);
    StokesOptions doubled;
    doubled.ray.radiusOverride = 2.0 * std::max(8.0, 3.0 * std::pow(std::abs(E), 0.25));
    doubled.ray.certify = false;
    const StokesValue big = stokes_multiplier(spec, E, doubled);
    REQUIRE_THAT(std::abs(ref.C - big.C), WithinAbs(0.0, 1e-8));
}

TEST_CASE("conjugation symmetry of the canonical solution") {
    ProblemSpec spec{3, {0.7, -0.4}};
    const Complex E{3.1, 0.0};
    for (const Complex X : {Complex{0.2, 0.3}, Complex{-0.1, 0.6}, Complex{0.5, -0.2}, Complex{0.9, 0.1}, Complex{0.0, 0.4}}) {
        const RaySolution at = ray_solution(spec, E, 0, X);
        const RaySolution atConj = ray_solution(spec, E, 0, std::conj(X));
        REQUIRE_THAT(std::abs(std::conj(physical_Y(atConj)) - physical_Y(at)), WithinAbs(0.0, 1e-8));
    }
}

TEST_CASE("convergence certificate is recorded") {
    ProblemSpec spec{2, {0.0}};
    const RaySolution ray = ray_solution(spec, Complex{1.0}, 0, Complex{});
    REQUIRE(ray.Rused > 0.0);
    REQUIRE(ray.certResidual <= 1e-8);
}
