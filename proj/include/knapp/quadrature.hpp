#pragma once

// Numerical evaluation of the second-derivative Fourier amplitudes
// F_x[Lambda^1_1], F_x[Lambda^2_1] over the half-wave sign triples, with the
// resonant / nonresonant split, and H^r norms of the data and of the output.
//
// Sobolev norms are computed on the frequency side with the (2 pi)^{-3}
// normalisation: ||u||_{H^r}^2 = (2 pi)^{-3} int <xi>^{2r} |u-hat|^2 dxi.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "knapp/construction.hpp"
#include "knapp/geometry.hpp"
#include "knapp/wave_symbols.hpp"

namespace knapp {

inline constexpr double kTwoPiCubedInv = 1.0 / (8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi);

/// Relative change below which node doubling stops.
inline constexpr double kRefineTol = 1e-6;
inline constexpr int kMaxRefinements = 3;

/// |omega| <= lambda^{3/4} is classed as resonant.
inline double resonance_threshold(double lambda) { return std::pow(lambda, 0.75); }

struct AmplitudeBreakdown {
    cplx total{};
    std::array<cplx, SignTriple::count> per_sign{};
    SignSet signs = kAllSigns;
    cplx resonant_sum{};
    cplx nonresonant_sum{};
    double nonresonant_envelope = 0.0;
    Vec3 eval_point{};
    double t = 0.0;
    bool converged = true;
    int refinements = 0;  // max node doublings used by any term
};

namespace detail {

struct TermSums {
    std::array<cplx, SignTriple::count> res{};
    std::array<cplx, SignTriple::count> non{};
    double envelope = 0.0;  // sum w K 2/|omega| over nonresonant nodes

    cplx total(int s) const { return res[static_cast<std::size_t>(s)] + non[static_cast<std::size_t>(s)]; }
};

/// int m(t, omega_sigma) K dEta over `region` for every requested sigma, where
/// K is the sum of the kernels in `group` (they share supports).
inline TermSums integrate_group(const std::vector<const BilinearKernel*>& group, const Box3& region, const Vec3& xi,
                                double t, double threshold, SignSet signs, const GridSize& n) {
    TermSums out;
    const QuadratureGrid grid = quadrature_grid(region, n);
    const double n_xi = norm(xi);
    for (const auto& node : grid.nodes) {
        const Vec3& eta = node.point;
        const double n_diff = norm(xi - eta);
        const double n_eta = norm(eta);
        double k = 0.0;
        for (const auto* kern : group) k += kern->weight(xi, eta, n_xi, n_diff, n_eta);
        const double wk = node.weight * k;
        for (int s = 0; s < SignTriple::count; ++s) {
            const SignTriple sig(s);
            if (!contains(signs, sig)) continue;
            const double w = omega(n_xi, n_diff, n_eta, sig);
            const cplx v = wk * duhamel_multiplier(t, w).value;
            const auto us = static_cast<std::size_t>(s);
            if (std::abs(w) <= threshold) {
                out.res[us] += v;
            } else {
                out.non[us] += v;
                out.envelope += wk * 2.0 / std::abs(w);
            }
        }
    }
    return out;
}

inline double relative_change(const TermSums& a, const TermSums& b) {
    double diff = 0.0;
    double scale = 0.0;
    for (int s = 0; s < SignTriple::count; ++s) {
        diff = std::max(diff, std::abs(a.total(s) - b.total(s)));
        scale = std::max(scale, std::abs(b.total(s)));
    }
    return scale == 0.0 ? 0.0 : diff / scale;
}

inline GridSize doubled(const GridSize& n) { return {2 * n[0], 2 * n[1], 2 * n[2]}; }

}  // namespace detail

/// F_x[Lambda](t, xi) = (1/4i) sum_sigma e^{-i s1 t |xi|} int m(t, omega_sigma) K(xi, eta) d eta
/// restricted to the sign triples in `signs`. Each kernel-support group is
/// integrated by Gauss-Legendre on its admissible region, doubling the nodes
/// until the relative change is below kRefineTol (at most kMaxRefinements
/// times); a group that does not settle clears `converged`.
inline AmplitudeBreakdown lambda_hat(const KnappParams& p, const Vec3& xi, Component which,
                                     SignSet signs = kAllSigns) {
    if (dot(xi, xi) == 0.0) throw singular_frequency("lambda_hat: xi = 0");
    AmplitudeBreakdown out;
    out.eval_point = xi;
    out.t = p.t();
    out.signs = signs;

    const auto ks = kernels(p, which);
    // Term 1 and term 2 kernels of Lambda^1 and Lambda^2 pairwise share supports.
    std::vector<std::vector<const BilinearKernel*>> groups;
    for (const auto& k : ks) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
            return g.front()->support_a == k.support_a && g.front()->support_b == k.support_b;
        });
        if (it == groups.end()) groups.push_back({&k});
        else it->push_back(&k);
    }

    const double threshold = resonance_threshold(p.lambda);
    const double t = out.t;
    detail::TermSums sum;
    for (const auto& g : groups) {
        const auto region = admissible_eta_region(xi, g.front()->support_a, g.front()->support_b);
        if (!region) continue;
        GridSize n = p.grid;
        detail::TermSums cur = detail::integrate_group(g, *region, xi, t, threshold, signs, n);
        bool ok = false;
        int used = 0;
        for (int r = 0; r < kMaxRefinements; ++r) {
            n = detail::doubled(n);
            detail::TermSums next = detail::integrate_group(g, *region, xi, t, threshold, signs, n);
            ++used;
            const double change = detail::relative_change(cur, next);
            cur = std::move(next);
            if (change < kRefineTol) {
                ok = true;
                break;
            }
        }
        out.converged = out.converged && ok;
        out.refinements = std::max(out.refinements, used);
        for (std::size_t s = 0; s < SignTriple::count; ++s) {
            sum.res[s] += cur.res[s];
            sum.non[s] += cur.non[s];
        }
        sum.envelope += cur.envelope;
    }

    const cplx prefactor{0.0, -0.25};  // 1 / (4i)
    const double n_xi = norm(xi);
    for (int s = 0; s < SignTriple::count; ++s) {
        const auto us = static_cast<std::size_t>(s);
        const cplx phase = std::polar(1.0, -SignTriple(s).s1() * t * n_xi);
        const cplx res = prefactor * phase * sum.res[us];
        const cplx non = prefactor * phase * sum.non[us];
        out.per_sign[us] = res + non;
        out.resonant_sum += res;
        out.nonresonant_sum += non;
    }
    out.total = out.resonant_sum + out.nonresonant_sum;
    out.nonresonant_envelope = 0.25 * sum.envelope;
    return out;
}

struct ResonanceClass {
    double omega = 0.0;
    bool empirical = false;  // |omega| <= lambda^{3/4}
    bool pattern = false;    // s1 = s2 = s3
};

inline std::array<ResonanceClass, SignTriple::count> resonance_classify(const KnappParams& p, const Vec3& xi,
                                                                        const Vec3& eta) {
    std::array<ResonanceClass, SignTriple::count> out{};
    const double threshold = resonance_threshold(p.lambda);
    for (int s = 0; s < SignTriple::count; ++s) {
        const SignTriple sig(s);
        const double w = omega(xi, eta, sig);
        out[static_cast<std::size_t>(s)] = {w, std::abs(w) <= threshold, sig.uniform()};
    }
    return out;
}

using Monomial = std::array<int, 3>;

inline double japanese_bracket_pow(const Vec3& xi, double two_r) { return std::pow(1.0 + dot(xi, xi), 0.5 * two_r); }

/// ((2 pi)^{-3} int_b <xi>^{2r} |amplitude xi^monomial|^2 dxi)^{1/2}. Surface
/// boxes integrate with 2D measure and give a formal value.
inline double sobolev_norm_monomial(const Box3& b, const Monomial& mono, double amplitude, double r,
                                    const GridSize& grid = kDefaultGrid) {
    // Weight degree is 2|mono| per axis; add nodes so the polynomial part is exact.
    GridSize n = grid;
    for (std::size_t i = 0; i < 3; ++i) n[i] = std::max(n[i], mono[i] + 1);
    const QuadratureGrid g = quadrature_grid(b, n);
    const double integral = g.integrate([&](const Vec3& xi) {
        double v = amplitude;
        for (std::size_t i = 0; i < 3; ++i) v *= std::pow(xi[i], mono[i]);
        return japanese_bracket_pow(xi, 2.0 * r) * v * v;
    });
    return std::sqrt(kTwoPiCubedInv * integral);
}

/// ||u v||_{H^r} for u-hat = chi_A, v-hat = amplitude chi_B. The product has
/// Fourier transform (2 pi)^{-3} (chi_A * chi_B)(xi), whose inner integral is
/// the measure of the admissible region (xi - A) ∩ B; the outer integral runs
/// over A ⊕ B split at the kinks of that piecewise-polynomial function.
inline double product_norm(const Box3& a, const Box3& b, double r, double amplitude = 1.0,
                           const GridSize& grid = kDefaultGrid) {
    std::array<std::vector<Interval>, 3> pieces;
    std::array<bool, 3> pinned{};
    for (int i = 0; i < 3; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        std::array<double, 4> e{a.axis(i).lo + b.axis(i).lo, a.axis(i).lo + b.axis(i).hi,
                                a.axis(i).hi + b.axis(i).lo, a.axis(i).hi + b.axis(i).hi};
        std::sort(e.begin(), e.end());
        if (e.front() == e.back()) {
            pinned[ui] = true;
            pieces[ui].push_back({e.front(), e.front()});
            continue;
        }
        for (std::size_t j = 0; j + 1 < e.size(); ++j)
            if (e[j] < e[j + 1]) pieces[ui].push_back({e[j], e[j + 1]});
    }
    int pinned_axis = -1;
    for (int i = 0; i < 3; ++i)
        if (pinned[static_cast<std::size_t>(i)]) pinned_axis = i;

    double integral = 0.0;
    for (const auto& p0 : pieces[0])
        for (const auto& p1 : pieces[1])
            for (const auto& p2 : pieces[2]) {
                Box3 sub;
                if (pinned_axis < 0) {
                    sub = Box3::volume(p0, p1, p2);
                } else {
                    const std::array<Interval, 3> all{p0, p1, p2};
                    std::array<Interval, 2> free{};
                    int j = 0;
                    for (int i = 0; i < 3; ++i)
                        if (i != pinned_axis) free[static_cast<std::size_t>(j++)] = all[static_cast<std::size_t>(i)];
                    sub = Box3::surface(free[0], free[1], pinned_axis, all[static_cast<std::size_t>(pinned_axis)].lo, 0.0);
                }
                const QuadratureGrid g = quadrature_grid(sub, grid);
                integral += g.integrate([&](const Vec3& xi) {
                    const auto region = admissible_eta_region(xi, a, b);
                    const double conv = region ? kTwoPiCubedInv * amplitude * region->measure() : 0.0;
                    return japanese_bracket_pow(xi, 2.0 * r) * conv * conv;
                });
            }
    return std::sqrt(kTwoPiCubedInv * integral);
}

inline double product_norm(const KnappParams& p, double r) {
    return product_norm(p.two_w(), p.minus_w_prime(), r, p.alpha(), p.grid);
}

/// Sub-box of W_lambda on which every kernel's admissible region is nonempty:
/// xi_2 in [1e-9, 1e-6] sqrt(lambda), xi_3 in [2e-9, 1e-6] sqrt(lambda).
inline Box3 wsamp_box(const KnappParams& p) {
    const Box3 w = p.w();
    const double sq = std::sqrt(p.lambda);
    return Box3::volume(w.axis(0), {kTransverseLo * sq, kTransverseHi * sq},
                        {2.0 * kTransverseLo * sq, kTransverseHi * sq});
}

/// Gauss-Legendre lattice on W_samp with floor(cbrt(samples)) >= 2 nodes per axis.
inline QuadratureGrid wsamp_grid(const KnappParams& p, int samples) {
    if (samples < 8) throw invalid_parameter("output_norm_lower: need at least 8 samples");
    const int n = std::max(2, static_cast<int>(std::floor(std::cbrt(static_cast<double>(samples)) + 1e-9)));
    return quadrature_grid(wsamp_box(p), {n, n, n});
}

/// ((2 pi)^{-3} sum_j w_j <xi_j>^{2s} |amp_j|^2)^{1/2} over the lattice nodes.
inline double output_norm_from_samples(const QuadratureGrid& g, const std::vector<double>& amplitudes, double s) {
    double sum = 0.0;
    for (std::size_t j = 0; j < g.nodes.size(); ++j)
        sum += g.nodes[j].weight * japanese_bracket_pow(g.nodes[j].point, 2.0 * s) * amplitudes[j] * amplitudes[j];
    return std::sqrt(kTwoPiCubedInv * sum);
}

struct OutputNorm {
    double value = 0.0;
    bool converged = true;
};

/// Lower bound for ||d_delta^2 A_1(t)||_{H^s} from the amplitude
/// |F_x[Lambda^1_1 + Lambda^2_1](t, xi)| sampled on the W_samp lattice and
/// integrated with the lattice's Gauss-Legendre weights. `amplitude`
/// overrides the evaluation (for testing the norm machinery alone).
inline OutputNorm output_norm_lower(const KnappParams& p, int samples,
                                    const std::function<double(const Vec3&)>& amplitude = {}) {
    const QuadratureGrid g = wsamp_grid(p, samples);
    std::vector<double> amps;
    amps.reserve(g.nodes.size());
    OutputNorm out;
    for (const auto& nd : g.nodes) {
        if (amplitude) {
            amps.push_back(amplitude(nd.point));
            continue;
        }
        const auto b = lambda_hat(p, nd.point, Component::both);
        out.converged = out.converged && b.converged;
        amps.push_back(std::abs(b.total));
    }
    out.value = output_norm_from_samples(g, amps, p.s_exp);
    return out;
}

}  // namespace knapp
