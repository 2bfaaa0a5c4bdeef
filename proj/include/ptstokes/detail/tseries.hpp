#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "ptstokes/detail/jet.hpp"
#include "ptstokes/errors.hpp"

namespace ptstokes::detail {

// Truncated Laurent series in t = X^{-1/2}.  Degrees run from `lo` upward and
// everything beyond degree `cut` is discarded.  This grading makes half-integer
// powers of X (odd polynomial degree) and integer powers (even degree) live in
// one integer-indexed algebra.
//
// Differentiation with respect to X acts termwise:
//   d/dX t^j = -(j/2) t^{j+2}.
class TSeries {
  public:
    TSeries() = default;
    TSeries(int lo, int cut) : lo_(lo), cut_(cut), c_(static_cast<size_t>(cut - lo + 1)) {
        assert(cut >= lo);
    }

    static TSeries monomial(int degree, Jet coeff, int cut) {
        TSeries s(degree, cut);
        s.c_[0] = coeff;
        return s;
    }

    int lo() const { return lo_; }
    int cut() const { return cut_; }

    Jet get(int degree) const {
        if (degree < lo_ || degree > cut_) return Jet{};
        return c_[static_cast<size_t>(degree - lo_)];
    }
    void set(int degree, const Jet& value) {
        assert(degree >= lo_ && degree <= cut_);
        c_[static_cast<size_t>(degree - lo_)] = value;
    }

    TSeries& operator+=(const TSeries& o) {
        if (o.lo_ < lo_) grow_down(o.lo_);
        for (int j = o.lo_; j <= std::min(o.cut_, cut_); ++j)
            c_[static_cast<size_t>(j - lo_)] += o.get(j);
        return *this;
    }
    TSeries& operator-=(const TSeries& o) {
        if (o.lo_ < lo_) grow_down(o.lo_);
        for (int j = o.lo_; j <= std::min(o.cut_, cut_); ++j)
            c_[static_cast<size_t>(j - lo_)] -= o.get(j);
        return *this;
    }

    friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
    friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }

    friend TSeries operator*(const TSeries& a, const TSeries& b) {
        const int cut = std::min(a.cut_, b.cut_);
        TSeries r(a.lo_ + b.lo_, cut);
        for (int i = a.lo_; i <= a.cut_; ++i) {
            const Jet& ai = a.c_[static_cast<size_t>(i - a.lo_)];
            if (ai.v == Complex{} && ai.d == Complex{}) continue;
            const int jmax = std::min(b.cut_, cut - i);
            for (int j = b.lo_; j <= jmax; ++j)
                r.c_[static_cast<size_t>(i + j - r.lo_)] += ai * b.c_[static_cast<size_t>(j - b.lo_)];
        }
        return r;
    }

    // d/dX, degrees shift by +2
    TSeries ddx() const {
        TSeries r(lo_ + 2, cut_);
        for (int j = lo_; j <= cut_ - 2; ++j)
            r.set(j + 2, get(j) * (-0.5 * static_cast<double>(j)));
        return r;
    }

    // Multiplicative inverse; leading coefficient must be nonzero.
    TSeries reciprocal() const {
        const Jet lead = c_.front();
        if (std::abs(lead.v) == 0.0) throw InvalidInput("TSeries::reciprocal: zero leading coefficient");
        const int n = cut_ - lo_;
        TSeries r(-lo_, cut_);
        std::vector<Jet> inv(static_cast<size_t>(n + 1));
        inv[0] = inverse(lead);
        for (int k = 1; k <= n; ++k) {
            Jet acc;
            for (int i = 1; i <= k; ++i) acc += c_[static_cast<size_t>(i)] * inv[static_cast<size_t>(k - i)];
            inv[static_cast<size_t>(k)] = -acc * inv[0];
        }
        for (int k = 0; k <= std::min(n, r.cut_ + lo_); ++k) r.set(-lo_ + k, inv[static_cast<size_t>(k)]);
        return r;
    }

    // Square root of a unit series 1 + h (lo must be 0 with leading 1).
    static TSeries sqrt_unit(const TSeries& s) {
        assert(s.lo_ == 0);
        const int n = s.cut_;
        TSeries g(0, n);
        g.set(0, Jet{1.0});
        for (int k = 1; k <= n; ++k) {
            Jet acc = s.get(k);
            for (int i = 1; i < k; ++i) acc -= g.get(i) * g.get(k - i);
            g.set(k, acc * 0.5);
        }
        return g;
    }

    // Evaluate at X = R (real, positive) via t = R^{-1/2}.
    Jet eval(double R) const {
        const double t = 1.0 / std::sqrt(R);
        // Horner from the top degree down
        Jet acc;
        for (int j = cut_; j >= lo_; --j) {
            acc = acc * t;
            acc += get(j);
        }
        // multiply by t^{lo}
        double tl = std::pow(t, lo_);
        return acc * tl;
    }

  private:
    void grow_down(int newLo) {
        c_.insert(c_.begin(), static_cast<size_t>(lo_ - newLo), Jet{});
        lo_ = newLo;
    }

    int lo_ = 0;
    int cut_ = 0;
    std::vector<Jet> c_;
};

} // namespace ptstokes::detail
