#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "ptstokes/odecore.hpp"

using namespace ptstokes;
using Catch::Matchers::WithinAbs;

namespace {

// Power-series oracle for Y'' = X Y with given initial data at 0, summed to
// `terms` terms.  Independent of the integrator.
std::pair<Complex, Complex> airy_like_series(Complex y0, Complex yp0, double x, int terms) {
    // coefficients a_n of Y = sum a_n x^n, recursion (n+2)(n+1) a_{n+2} = a_{n-1}
    std::vector<Complex> a(static_cast<size_t>(terms), Complex{});
    a[0] = y0;
    a[1] = yp0;
    for (int n = 2; n < terms; ++n) {
        if (n - 3 >= 0)
            a[static_cast<size_t>(n)] = a[static_cast<size_t>(n - 3)] / (static_cast<double>(n) * (n - 1));
        else if (n == 2)
            a[2] = Complex{}; // a_2 = 0 since Y''(0) = 0 * Y(0)
    }
    Complex y{}, yp{};
    for (int n = terms - 1; n >= 0; --n) {
        y = y * x + a[static_cast<size_t>(n)];
        if (n >= 1) yp = yp * x + static_cast<double>(n) * a[static_cast<size_t>(n)];
    }
    return {y, yp};
}

SolutionState unit_state(Complex x0, Complex y, Complex yp) {
    SolutionState s;
    s.X = x0;
    s.Y = y;
    s.Yp = yp;
    return s;
}

} // namespace

TEST_CASE("constant coefficient segment") {
    auto W = [](Complex) { return Complex{1.0}; };
    IntegratorOptions opts;
    auto end = integrate_segment(unit_state(0.0, 1.0, -1.0), W, Complex{1.0}, opts);
    REQUIRE_THAT(std::abs(end.Y - std::exp(-1.0)), WithinAbs(0.0, 1e-10));
    REQUIRE_THAT(std::abs(end.Yp + std::exp(-1.0)), WithinAbs(0.0, 1e-10));
}

TEST_CASE("gaussian closed form") {
    auto W = [](Complex x) { return x * x - 1.0; };
    IntegratorOptions opts;
    SolutionState s = unit_state(0.0, 1.0, 0.0);
    double maxErr = 0.0;
    for (double xt : {0.5, 1.0, 1.5, 2.0}) {
        s = integrate_segment(s, W, Complex{xt}, opts);
        maxErr = std::max(maxErr, std::abs(s.Y - std::exp(-xt * xt / 2.0)));
    }
    REQUIRE_THAT(maxErr, WithinAbs(0.0, 1e-9));
}

TEST_CASE("linear potential against power series") {
    auto W = [](Complex x) { return x; };
    IntegratorOptions opts;
    const Complex y0{0.8, 0.1}, yp0{-0.3, 0.2};
    auto end = integrate_segment(unit_state(0.0, y0, yp0), W, Complex{1.0}, opts);
    const auto [ys, yps] = airy_like_series(y0, yp0, 1.0, 60);
    REQUIRE_THAT(std::abs(end.Y - ys), WithinAbs(0.0, 1e-10));
    REQUIRE_THAT(std::abs(end.Yp - yps), WithinAbs(0.0, 1e-10));
}

TEST_CASE("square-integral accumulator") {
    // With W = 1 and Y = e^{-X}, J(1) = Int_0^1 e^{-2x} dx
    auto W = [](Complex) { return Complex{1.0}; };
    IntegratorOptions opts;
    auto end = integrate_segment(unit_state(0.0, 1.0, -1.0), W, Complex{1.0}, opts);
    REQUIRE_THAT(std::abs(end.J - 0.5 * (1.0 - std::exp(-2.0))), WithinAbs(0.0, 1e-10));
}

TEST_CASE("wronskian conservation along a complex path") {
    auto W = [](Complex x) { return x * x + Complex{0.3, 0.4}; };
    IntegratorOptions opts;
    SolutionState s1 = unit_state(Complex{1.0, 0.5}, 1.0, 0.0);
    SolutionState s2 = unit_state(Complex{1.0, 0.5}, 0.0, 1.0);
    const Complex target{-0.7, 1.2};
    auto e1 = integrate_segment(s1, W, target, opts);
    auto e2 = integrate_segment(s2, W, target, opts);
    const Complex wrStart = s1.Y * s2.Yp - s1.Yp * s2.Y;
    const Complex wrEnd = e1.Y * e2.Yp - e1.Yp * e2.Y;
    REQUIRE_THAT(std::abs(wrEnd - wrStart), WithinAbs(0.0, 1e-10));
}

TEST_CASE("linearity in the initial data") {
    auto W = [](Complex x) { return x + 1.0; };
    IntegratorOptions opts;
    const Complex a{1.3, -0.2}, b{0.4, 0.9};
    SolutionState s1 = unit_state(0.0, 1.0, 0.5);
    SolutionState s2 = unit_state(0.0, -0.5, 1.0);
    SolutionState sc = unit_state(0.0, a * s1.Y + b * s2.Y, a * s1.Yp + b * s2.Yp);
    auto e1 = integrate_segment(s1, W, Complex{1.5}, opts);
    auto e2 = integrate_segment(s2, W, Complex{1.5}, opts);
    auto ec = integrate_segment(sc, W, Complex{1.5}, opts);
    REQUIRE_THAT(std::abs(ec.Y - (a * e1.Y + b * e2.Y)), WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(std::abs(ec.Yp - (a * e1.Yp + b * e2.Yp)), WithinAbs(0.0, 1e-9));
}

TEST_CASE("tolerance scaling") {
    auto W = [](Complex) { return Complex{1.0}; };
    auto errAt = [&](double tol) {
        IntegratorOptions opts;
        opts.relTol = tol;
        opts.absTol = tol * 1e-3;
        auto end = integrate_segment(unit_state(0.0, 1.0, -1.0), W, Complex{3.0}, opts);
        return std::abs(end.Y - std::exp(-3.0));
    };
    // two halvings of the tolerance should cut the error at least in half each
    const double e0 = errAt(1e-5);
    const double e2 = errAt(2.5e-6);
    REQUIRE(e2 <= 0.25 * e0 * 1.05);
}

TEST_CASE("variational component against finite differences") {
    // degree-3 problem with only the spectral slot occupied
    auto make = [](double E) {
        return [E](Complex x) { return x * x * x + E; };
    };
    IntegratorOptions opts;
    const double E = 2.0, h = 1e-5 * (1.0 + E);
    const Complex target{0.5};

    SolutionState s = unit_state(3.0, 1.0, -0.7);
    s.eScale = 1.0;
    auto end = integrate_segment(s, make(E), target, opts);

    auto run = [&](double Ev) {
        SolutionState t = unit_state(3.0, 1.0, -0.7);
        return integrate_segment(t, make(Ev), target, opts);
    };
    const Complex fd = (run(E + h).Y - run(E - h).Y) / (2.0 * h);
    REQUIRE_THAT(std::abs(end.Z - fd) / std::abs(fd), WithinAbs(0.0, 1e-5));
}

TEST_CASE("renormalization bookkeeping") {
    SolutionState s;
    s.Y = 2.0;
    s.Yp = 1.0;
    s.Z = 4.0;
    s.J = 8.0;
    auto [out, logF] = renormalize(s);
    REQUIRE_THAT(std::abs(out.Y - 1.0), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(out.Z - 2.0), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(out.J - 2.0), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(logF - std::log(2.0)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("square integral composes across renormalization") {
    auto W = [](Complex x) { return x * x + 2.0; };
    IntegratorOptions opts;
    SolutionState whole = unit_state(2.0, 0.3, 1.1);
    auto wholeEnd = integrate_segment(whole, W, Complex{0.0}, opts);

    SolutionState part = unit_state(2.0, 0.3, 1.1);
    auto mid = integrate_segment(part, W, Complex{1.0}, opts);
    auto [midR, logG] = renormalize(mid);
    auto end = integrate_segment(midR, W, Complex{0.0}, opts);
    const Complex g2 = std::exp(2.0 * logG);
    REQUIRE_THAT(std::abs(end.J * g2 - wholeEnd.J), WithinAbs(0.0, 1e-10));
    REQUIRE_THAT(std::abs(end.Y * std::exp(logG) - wholeEnd.Y), WithinAbs(0.0, 1e-10));
}

TEST_CASE("error reporting") {
    auto W = [](Complex) { return Complex{1.0}; };
    IntegratorOptions opts;
    SolutionState s = unit_state(0.0, 1.0, -1.0);
    REQUIRE_THROWS_AS(integrate_segment(s, W, Complex{0.0}, opts), InvalidInput);
    IntegratorOptions tiny;
    tiny.maxSteps = 3;
    REQUIRE_THROWS_AS(integrate_segment(s, W, Complex{10.0}, tiny), StepLimitExceeded);
    // growth of e^{x^2/2} over a long real segment overflows the state
    auto Wg = [](Complex x) { return x * x + 1.0; };
    SolutionState g = unit_state(0.0, 1.0, 0.0);
    REQUIRE_THROWS_AS(integrate_segment(g, Wg, Complex{60.0}, opts), Overflow);
}
