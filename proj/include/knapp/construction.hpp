#pragma once

// The Knapp-type counterexample: parameters and the lambda window rule, the
// indicator initial data, the first delta-derivative curvature symbol, and the
// real bilinear kernels of the two leading second-derivative terms.
//
// The Lie-algebra factor [T^1, T^2] multiplying every bilinear output is set
// to 1 throughout.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knapp/errors.hpp"
#include "knapp/geometry.hpp"
#include "knapp/wave_symbols.hpp"

namespace knapp {

/// How the support of a2-hat is realised: the literal plane xi_3 = 0 with 2D
/// measure, or a slab |xi_3| <= h/2 of thickness h = thickness * sqrt(lambda)
/// carrying amplitude alpha.
struct SlabMode {
    bool surface = false;
    double thickness = 1e-6;  // in units of sqrt(lambda)
    double alpha = 1.0;

    static SlabMode make_surface() { return {true, 0.0, 1.0}; }
    static SlabMode make_slab(double thickness = 1e-6, double alpha = 1.0) { return {false, thickness, alpha}; }

    std::string name() const { return surface ? "surface" : "slab"; }
};

inline constexpr GridSize kDefaultGrid{32, 16, 16};
inline constexpr double kDefaultRho = 2e-6;
inline constexpr double kDefaultEps = 0.01;

/// Full experiment configuration. The evaluation time is always derived,
/// t = eps / sqrt(lambda).
struct KnappParams {
    double lambda = 0.0;
    double eps = 0.0;
    double rho = 0.0;
    int k = 0;
    SlabMode slab{};
    double s_exp = 0.0;
    double r_exp = 0.0;
    GridSize grid = kDefaultGrid;

    double t() const { return eps / std::sqrt(lambda); }
    double alpha() const { return slab.surface ? 1.0 : slab.alpha; }

    Box3 w() const { return box_w(lambda); }
    Box3 two_w() const { return box_scale(box_w(lambda), 2.0); }
    /// -W'_lambda, as surface or slab.
    Box3 minus_w_prime() const {
        if (slab.surface) return box_scale(box_w_prime(lambda), -1.0);
        return box_scale(box_w_prime(lambda, slab.thickness * std::sqrt(lambda)), -1.0);
    }
};

/// Open interval for sqrt(lambda).
using Window = std::pair<double, double>;

/// ((2k pi - eps) / (eps (1 - rho)), (2k pi + eps) / (eps (1 + rho))) for
/// sqrt(lambda), or nullopt when it is empty. Nonempty iff rho < eps / (2k pi).
inline std::optional<Window> lambda_window(double eps, double rho, int k) {
    if (!(eps > 0.0 && eps <= 0.1)) throw invalid_parameter("lambda_window: need 0 < eps <= 0.1");
    if (!(rho > 0.0 && rho < 1.0)) throw invalid_parameter("lambda_window: need 0 < rho < 1");
    if (k < 1) throw invalid_parameter("lambda_window: need k >= 1");
    const double two_k_pi = 2.0 * k * std::numbers::pi;
    const double lo = (two_k_pi - eps) / (eps * (1.0 - rho));
    const double hi = (two_k_pi + eps) / (eps * (1.0 + rho));
    if (!(lo < hi)) return std::nullopt;
    return Window{lo, hi};
}

/// Relative spread of |xi| / lambda over W_lambda: the long side plus a bound
/// on the transverse correction |xi_perp|^2 / (2 lambda^2) <= 1e-12 / lambda.
inline constexpr double kRadialSpread = kLongSide + 1e-12;

/// Validated parameters with sqrt(lambda) at the window midpoint.
inline KnappParams make_params(double eps, double rho, int k, SlabMode slab, double s_exp, double r_exp,
                               GridSize grid = kDefaultGrid) {
    const auto win = lambda_window(eps, rho, k);
    const double max_rho = eps / (2.0 * k * std::numbers::pi);
    if (!win)
        throw window_empty("lambda window empty for k=" + std::to_string(k) + "; need rho < " + std::to_string(max_rho),
                           max_rho);
    if (!(rho > kRadialSpread))
        throw invalid_parameter("rho=" + std::to_string(rho) + " does not cover the |xi|/lambda spread over W_lambda");
    for (int n : grid)
        if (n < 1) throw invalid_parameter("grid sizes must be positive");
    if (!slab.surface && !(slab.thickness > 0.0 && slab.alpha > 0.0))
        throw invalid_parameter("slab thickness and amplitude must be positive");
    const double sq = 0.5 * (win->first + win->second);
    KnappParams p;
    p.lambda = sq * sq;
    p.eps = eps;
    p.rho = rho;
    p.k = k;
    p.slab = slab;
    p.s_exp = s_exp;
    p.r_exp = r_exp;
    p.grid = grid;
    if (!(p.lambda > 1e3)) throw invalid_parameter("lambda must exceed 1e3");
    return p;
}

enum class Datum { a1, a2 };

/// a1-hat = indicator of 2W_lambda, a2-hat = alpha * indicator of -W'_lambda.
inline double a_hat(const KnappParams& p, Datum which, const Vec3& xi) {
    if (which == Datum::a1) return box_contains(p.two_w(), xi) ? 1.0 : 0.0;
    return box_contains(p.minus_w_prime(), xi) ? p.alpha() : 0.0;
}

/// The two polynomial-symbol pieces of curl(d_delta F) at delta = 0, without
/// the half-wave phases, for given data values a1 = a1-hat(xi), a2 = a2-hat(xi):
///   a1 part: (-(i xi2)^2 - (i xi3)^2, (i xi1)(i xi2), (i xi1)(i xi3)) a1
///   a2 part: ((i xi1)(i xi2), -(i xi1)^2, 0) a2
struct CurlPieces {
    CVec3 a1_part;
    CVec3 a2_part;
};

inline CurlPieces curl_dF_symbol(const Vec3& xi, double a1, double a2) {
    if (dot(xi, xi) == 0.0) throw singular_frequency("curl_dF_symbol: xi = 0");
    const cplx i1{0.0, xi[0]};
    const cplx i2{0.0, xi[1]};
    const cplx i3{0.0, xi[2]};
    return {{(-(i2 * i2) - i3 * i3) * a1, (i1 * i2) * a1, (i1 * i3) * a1},
            {(i1 * i2) * a2, -(i1 * i1) * a2, cplx{0.0, 0.0}}};
}

inline CurlPieces curl_dF_hat(const KnappParams& p, const Vec3& xi) {
    return curl_dF_symbol(xi, a_hat(p, Datum::a1, xi), a_hat(p, Datum::a2, xi));
}

enum class Component { lambda1, lambda2, both };

enum class KernelLabel { lambda1_term1, lambda1_term2, lambda2_term1, lambda2_term2 };

inline const char* to_string(KernelLabel l) {
    switch (l) {
        case KernelLabel::lambda1_term1: return "L1_term1";
        case KernelLabel::lambda1_term2: return "L1_term2";
        case KernelLabel::lambda2_term1: return "L2_term1";
        case KernelLabel::lambda2_term2: return "L2_term2";
    }
    return "?";
}

/// One signed term of F_x[Lambda^1_1] or F_x[Lambda^2_1]:
///   term1: (xi1-eta1)^2 eta1^2 eta_j               on xi-eta in -W', eta in 2W
///   term2: -(xi1-eta1)(xi_j-eta_j) eta1^3           on xi-eta in 2W, eta in -W'
/// with j = 2 for Lambda^1 and j = 3 for Lambda^2, each divided by
/// |xi| |xi-eta|^2 |eta|^2 and multiplied by the a2 amplitude.
struct BilinearKernel {
    KernelLabel label;
    Box3 support_a;  // constraint on xi - eta
    Box3 support_b;  // constraint on eta
    double amplitude = 1.0;

    int transverse_axis() const {
        return label == KernelLabel::lambda1_term1 || label == KernelLabel::lambda1_term2 ? 1 : 2;
    }
    bool is_term1() const { return label == KernelLabel::lambda1_term1 || label == KernelLabel::lambda2_term1; }

    double weight(const Vec3& xi, const Vec3& eta) const {
        const Vec3 d = xi - eta;
        return numerator(xi, eta, d) / (norm(xi) * dot(d, d) * dot(eta, eta));
    }

    /// Same as weight() with |xi|, |xi-eta|, |eta| supplied by the caller.
    double weight(const Vec3& xi, const Vec3& eta, double n_xi, double n_diff, double n_eta) const {
        return numerator(xi, eta, xi - eta) / (n_xi * n_diff * n_diff * n_eta * n_eta);
    }

private:
    double numerator(const Vec3& /*xi*/, const Vec3& eta, const Vec3& d) const {
        const auto j = static_cast<std::size_t>(transverse_axis());
        if (is_term1()) return amplitude * d[0] * d[0] * eta[0] * eta[0] * eta[j];
        return -amplitude * d[0] * d[j] * eta[0] * eta[0] * eta[0];
    }
};

inline std::vector<BilinearKernel> kernels(const KnappParams& p, Component which) {
    const Box3 two_w = p.two_w();
    const Box3 mwp = p.minus_w_prime();
    const double a = p.alpha();
    std::vector<BilinearKernel> out;
    if (which != Component::lambda2) {
        out.push_back({KernelLabel::lambda1_term1, mwp, two_w, a});
        out.push_back({KernelLabel::lambda1_term2, two_w, mwp, a});
    }
    if (which != Component::lambda1) {
        out.push_back({KernelLabel::lambda2_term1, mwp, two_w, a});
        out.push_back({KernelLabel::lambda2_term2, two_w, mwp, a});
    }
    return out;
}

}  // namespace knapp
