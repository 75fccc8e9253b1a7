#pragma once

// Axis-aligned frequency boxes: construction, scaling, membership, translated
// intersections and tensor Gauss-Legendre grids.
//
// A box is either a volume box (3D Lebesgue measure) or a surface box, where
// one axis is pinned to a single value and the box carries 2D measure. Volume
// boxes may still be degenerate along an axis; they then have measure zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "knapp/errors.hpp"

namespace knapp {

using Vec3 = std::array<double, 3>;

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool degenerate() const { return lo == hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class MeasureMode { volume, surface };

/// Side lengths of the Knapp boxes.
inline constexpr double kLongSide = 1e-6;       // |xi_1 - lambda| <= 1e-6 lambda
inline constexpr double kTransverseLo = 1e-9;   // 1e-9 sqrt(lambda) <= xi_2, xi_3
inline constexpr double kTransverseHi = 1e-6;   // xi_2, xi_3 <= 1e-6 sqrt(lambda)
inline constexpr double kSurfaceTol = 1e-9;     // surface membership, in units of sqrt(lambda)

class Box3 {
public:
    Box3() = default;

    /// Volume box. Throws if any axis has lo > hi.
    static Box3 volume(const Interval& a1, const Interval& a2, const Interval& a3) {
        Box3 b;
        b.ax_ = {a1, a2, a3};
        b.check();
        return b;
    }

    /// Surface box pinned at `value` on `surface_axis`. `tol` is the absolute
    /// tolerance used for membership on the pinned axis.
    static Box3 surface(const Interval& a, const Interval& b, int surface_axis, double value, double tol) {
        if (surface_axis < 0 || surface_axis > 2)
            throw invalid_parameter("surface axis must be 0, 1 or 2");
        Box3 box;
        int j = 0;
        const std::array<Interval, 2> free{a, b};
        for (int i = 0; i < 3; ++i) box.ax_[i] = (i == surface_axis) ? Interval{value, value} : free[j++];
        box.mode_ = MeasureMode::surface;
        box.surface_axis_ = surface_axis;
        box.tol_ = tol;
        box.check();
        return box;
    }

    const Interval& axis(int i) const { return ax_[static_cast<std::size_t>(i)]; }
    const std::array<Interval, 3>& axes() const { return ax_; }
    MeasureMode mode() const { return mode_; }
    int surface_axis() const { return surface_axis_; }
    double surface_tol() const { return tol_; }

    Vec3 center() const { return {ax_[0].mid(), ax_[1].mid(), ax_[2].mid()}; }

    /// 3D volume, or 2D area for surface boxes (the pinned axis counts as 1).
    double measure() const {
        double m = 1.0;
        for (int i = 0; i < 3; ++i)
            if (i != surface_axis_) m *= ax_[static_cast<std::size_t>(i)].length();
        return m;
    }

    friend bool operator==(const Box3&, const Box3&) = default;

private:
    friend Box3 box_scale(const Box3& b, double c);
    friend std::optional<Box3> admissible_eta_region(const Vec3& xi, const Box3& a, const Box3& b);

    void check() const {
        for (const auto& iv : ax_)
            if (!(iv.lo <= iv.hi)) throw invalid_parameter("box interval with lo > hi");
    }

    std::array<Interval, 3> ax_{};
    MeasureMode mode_ = MeasureMode::volume;
    int surface_axis_ = -1;
    double tol_ = 0.0;
};

/// W_lambda = { |xi_1 - lambda| <= 1e-6 lambda, 1e-9 sqrt(lambda) <= xi_2, xi_3 <= 1e-6 sqrt(lambda) }.
inline Box3 box_w(double lambda) {
    if (!(lambda > 1.0)) throw invalid_parameter("box_w: lambda must exceed 1");
    const double sq = std::sqrt(lambda);
    const Interval a1{lambda - kLongSide * lambda, lambda + kLongSide * lambda};
    const Interval tr{kTransverseLo * sq, kTransverseHi * sq};
    return Box3::volume(a1, tr, tr);
}

/// W'_lambda = { (xi_1, xi_2, 0) : |xi_1 - lambda| <= 1e-6 lambda, |xi_2| <= 1e-6 sqrt(lambda) }.
///
/// Without `slab_thickness` this is a surface box on xi_3 = 0. With a
/// thickness h the pinned axis is thickened to the slab |xi_3| <= h/2.
inline Box3 box_w_prime(double lambda, std::optional<double> slab_thickness = std::nullopt) {
    if (!(lambda > 1.0)) throw invalid_parameter("box_w_prime: lambda must exceed 1");
    const double sq = std::sqrt(lambda);
    const Interval a1{lambda - kLongSide * lambda, lambda + kLongSide * lambda};
    const Interval a2{-kTransverseHi * sq, kTransverseHi * sq};
    if (!slab_thickness.has_value()) return Box3::surface(a1, a2, 2, 0.0, kSurfaceTol * sq);
    const double h = slab_thickness.value_or(0.0);
    if (!(h > 0.0)) throw invalid_parameter("box_w_prime: slab thickness must be positive");
    return Box3::volume(a1, a2, {-0.5 * h, 0.5 * h});
}

/// c * b, endpoints reordered for c < 0. Measure mode and pinned axis carry over.
inline Box3 box_scale(const Box3& b, double c) {
    if (c == 0.0) throw invalid_parameter("box_scale: c must be nonzero");
    Box3 out = b;
    for (auto& iv : out.ax_) {
        const double x = iv.lo * c;
        const double y = iv.hi * c;
        iv = c > 0 ? Interval{x, y} : Interval{y, x};
    }
    out.tol_ = b.tol_ * std::abs(c);
    return out;
}

inline bool box_contains(const Box3& b, const Vec3& xi) {
    for (int i = 0; i < 3; ++i) {
        const Interval& iv = b.axis(i);
        const double x = xi[static_cast<std::size_t>(i)];
        if (i == b.surface_axis()) {
            if (std::abs(x - iv.lo) > b.surface_tol()) return false;
        } else if (x < iv.lo || x > iv.hi) {
            return false;
        }
    }
    return true;
}

/// (xi - A) ∩ B: the set of eta with chi_A(xi - eta) chi_B(eta) = 1.
///
/// A pinned axis in either operand pins the result; the pinned point is
/// matched against the other operand with the surface tolerance.
inline std::optional<Box3> admissible_eta_region(const Vec3& xi, const Box3& a, const Box3& b) {
    if (a.mode() == MeasureMode::surface && b.mode() == MeasureMode::surface &&
        a.surface_axis() != b.surface_axis()) {
        // Two different pinned axes leave a line: zero 2D measure.
        return std::nullopt;
    }
    const double tol = std::max(a.surface_tol(), b.surface_tol());
    Box3 out;
    for (int i = 0; i < 3; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const Interval shifted{xi[ui] - a.axis(i).hi, xi[ui] - a.axis(i).lo};
        const Interval& other = b.axis(i);
        const bool a_pin = i == a.surface_axis();
        const bool b_pin = i == b.surface_axis();
        Interval r;
        if (a_pin || b_pin) {
            const double p = a_pin ? shifted.lo : other.lo;
            const Interval& against = a_pin ? other : shifted;
            if (p < against.lo - tol || p > against.hi + tol) return std::nullopt;
            r = {p, p};
        } else {
            r = {std::max(shifted.lo, other.lo), std::min(shifted.hi, other.hi)};
            if (r.lo > r.hi) return std::nullopt;
        }
        out.ax_[ui] = r;
    }
    if (a.mode() == MeasureMode::surface || b.mode() == MeasureMode::surface) {
        out.mode_ = MeasureMode::surface;
        out.surface_axis_ = a.mode() == MeasureMode::surface ? a.surface_axis() : b.surface_axis();
        out.tol_ = tol;
    }
    return out;
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw invalid_parameter("gauss_legendre: n must be positive");
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        x[lo] = -z;
        x[hi] = z;
        w[lo] = w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

struct QuadratureNode {
    Vec3 point;
    double weight;
};

struct QuadratureGrid {
    std::vector<QuadratureNode> nodes;
    double total_measure = 0.0;

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (const auto& nd : nodes) s += nd.weight * f(nd.point);
        return s;
    }
};

using GridSize = std::array<int, 3>;

/// Tensor Gauss-Legendre grid mapped to `b`. A pinned axis contributes one node
/// of weight 1; a zero-length volume axis yields an empty grid of measure 0.
inline QuadratureGrid quadrature_grid(const Box3& b, const GridSize& n) {
    std::array<std::vector<double>, 3> px, pw;
    double measure = 1.0;
    for (int i = 0; i < 3; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const Interval& iv = b.axis(i);
        if (i == b.surface_axis()) {
            px[ui] = {iv.lo};
            pw[ui] = {1.0};
            continue;
        }
        if (n[ui] < 1) throw invalid_parameter("quadrature_grid: need at least one node per axis");
        if (iv.degenerate()) return {};
        std::vector<double> x, w;
        gauss_legendre(n[ui], x, w);
        const double half = 0.5 * iv.length();
        const double mid = iv.mid();
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = mid + half * x[j];
            w[j] *= half;
        }
        px[ui] = std::move(x);
        pw[ui] = std::move(w);
        measure *= iv.length();
    }
    QuadratureGrid g;
    g.total_measure = measure;
    g.nodes.reserve(px[0].size() * px[1].size() * px[2].size());
    for (std::size_t i = 0; i < px[0].size(); ++i)
        for (std::size_t j = 0; j < px[1].size(); ++j)
            for (std::size_t k = 0; k < px[2].size(); ++k)
                g.nodes.push_back({{px[0][i], px[1][j], px[2][k]}, pw[0][i] * pw[1][j] * pw[2][k]});
    return g;
}

}  // namespace knapp
