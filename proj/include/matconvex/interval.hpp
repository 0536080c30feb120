// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "matconvex/errors.hpp"

namespace matconvex {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative margin by which analysis grids stay away from the endpoints.
inline constexpr double kGridMargin = 1e-6;

/// A real interval with possibly infinite endpoints. Infinite endpoints are
/// always open.
class Interval {
public:
    Interval() : Interval(-kInf, kInf) {}

    Interval(double lo, double hi, bool lo_open = true, bool hi_open = true)
        : lo_(lo), hi_(hi), lo_open_(lo_open || std::isinf(lo)), hi_open_(hi_open || std::isinf(hi)) {
        if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
            throw PreconditionError("interval requires lo < hi");
        if (lo == kInf || hi == -kInf) throw PreconditionError("interval endpoints are misordered");
    }

    static Interval open(double lo, double hi) { return Interval(lo, hi, true, true); }
    static Interval whole_line() { return Interval(-kInf, kInf); }
    static Interval half_line(double alpha) { return Interval(alpha, kInf); }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    bool lo_open() const noexcept { return lo_open_; }
    bool hi_open() const noexcept { return hi_open_; }

    bool lo_finite() const noexcept { return std::isfinite(lo_); }
    bool hi_finite() const noexcept { return std::isfinite(hi_); }
    bool bounded() const noexcept { return lo_finite() && hi_finite(); }
    bool is_whole_line() const noexcept { return !lo_finite() && !hi_finite(); }

    bool interior_contains(double t) const noexcept { return t > lo_ && t < hi_; }

    bool contains(double t) const noexcept {
        if (interior_contains(t)) return true;
        return (t == lo_ && !lo_open_) || (t == hi_ && !hi_open_);
    }

    double midpoint() const noexcept {
        if (bounded()) return 0.5 * (lo_ + hi_);
        if (lo_finite()) return lo_ + 1.0;
        if (hi_finite()) return hi_ - 1.0;
        return 0.0;
    }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
    bool lo_open_;
    bool hi_open_;
};

enum class Spacing { Chebyshev, Uniform };

namespace detail {

inline std::vector<double> unit_nodes(double a, double b, int count, Spacing spacing) {
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        nodes.push_back(0.5 * (a + b));
        return nodes;
    }
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < count; ++i) {
        const double s = static_cast<double>(i) / (count - 1);
        if (spacing == Spacing::Chebyshev)
            nodes.push_back(mid - half * std::cos(std::numbers::pi * s));
        else
            nodes.push_back(a + (b - a) * s);
    }
    return nodes;
}

}  // namespace detail

/// Maps a scan parameter u to a point of the interval. Bounded intervals use
/// u in [0,1] affinely; (a,inf) uses t = a + u/(1-u); (-inf,b) uses
/// t = b - u/(1-u); the whole line uses u in (-1,1) with t = u/(1-u^2).
inline double map_parameter(const Interval& iv, double u) {
    if (iv.bounded()) return iv.lo() + u * (iv.hi() - iv.lo());
    if (iv.lo_finite()) return iv.lo() + u / (1.0 - u);
    if (iv.hi_finite()) return iv.hi() - u / (1.0 - u);
    return u / (1.0 - u * u);
}

/// Interior analysis grid of `count` points, sorted ascending. Endpoints are
/// avoided by a relative margin of kGridMargin.
inline std::vector<double> interior_grid(const Interval& iv, int count, Spacing spacing = Spacing::Chebyshev) {
    if (count < 1) throw PreconditionError("grid needs at least one point");
    std::vector<double> u;
    if (iv.bounded()) {
        const double delta = kGridMargin * (iv.hi() - iv.lo());
        return detail::unit_nodes(iv.lo() + delta, iv.hi() - delta, count, spacing);
    }
    if (iv.is_whole_line()) {
        u = detail::unit_nodes(-1.0 + kGridMargin, 1.0 - kGridMargin, count, spacing);
    } else {
        u = detail::unit_nodes(kGridMargin, 1.0 - kGridMargin, count, spacing);
    }
    std::vector<double> t;
    t.reserve(u.size());
    for (double x : u) t.push_back(map_parameter(iv, x));
    if (!iv.lo_finite() && iv.hi_finite()) std::reverse(t.begin(), t.end());
    return t;
}

/// Symmetric grid on [-radius, radius].
inline std::vector<double> symmetric_grid(double radius, int count, Spacing spacing = Spacing::Chebyshev) {
    return detail::unit_nodes(-radius, radius, count, spacing);
}

}  // namespace matconvex
