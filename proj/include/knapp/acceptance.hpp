#pragma once

// Acceptance criteria, runnable from the test suite and from `knapp verify`.
// Every tolerance below is fixed; nothing is calibrated at run time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "knapp/construction.hpp"
#include "knapp/experiment.hpp"
#include "knapp/quadrature.hpp"
#include "knapp/wave_symbols.hpp"

namespace knapp::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

inline std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Sweeps shared by several criteria, computed on first use.
class Context {
public:
    const std::vector<KSamples>& slab() {
        if (!slab_) {
            const auto t0 = Clock::now();
            SweepConfig cfg;
            cfg.mode = SlabMode::make_slab();
            slab_ = sample_sweep(cfg);
            slab_seconds_ = seconds_since(t0);
        }
        return *slab_;
    }

    const std::vector<KSamples>& surface() {
        if (!surface_) {
            SweepConfig cfg;
            cfg.mode = SlabMode::make_surface();
            surface_ = sample_sweep(cfg);
        }
        return *surface_;
    }

    double slab_seconds() const { return slab_seconds_; }

private:
    std::optional<std::vector<KSamples>> slab_;
    std::optional<std::vector<KSamples>> surface_;
    double slab_seconds_ = 0.0;
};

inline CriterionResult multiplier_oracle() {
    CriterionResult r{1, "multiplier oracle", false, {}};
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    std::uniform_real_distribution<double> uth(-100.0, 100.0);
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double t = 1.0 - ut(rng);  // (0, 1]
        const double w = uth(rng) / t;
        const cplx m = duhamel_multiplier(t, w).value;
        const cplx o = duhamel_multiplier_oracle(t, w, 4096);
        worst = std::max(worst, std::abs(m - o) / std::abs(m));
    }
    const double secs = seconds_since(t0);
    r.passed = worst <= 1e-9 && secs < 5.0;
    r.detail = fmt("max relative diff %.3e (tol 1e-9), %.2f s (limit 5 s)", worst, secs);
    return r;
}

inline CriterionResult curl_identity() {
    CriterionResult r{2, "curl identity", false, {}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        // a2 lives on xi_3 = 0 (d_3 a2 = 0); alternate on- and off-plane points.
        const bool on_plane = i % 2 == 0;
        const Vec3 xi{u(rng), u(rng), on_plane ? 0.0 : u(rng)};
        const double a1 = u(rng);
        const double a2 = on_plane ? u(rng) : 0.0;
        const auto pieces = curl_dF_symbol(xi, a1, a2);
        const Vec3 a{a1, a2, 0.0};
        const double xa = dot(xi, a);
        const double n2 = dot(xi, xi);
        double diff = 0.0, scale = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const double oracle = -xi[c] * xa + n2 * a[c];
            diff = std::max(diff, std::abs(pieces.a1_part[c] + pieces.a2_part[c] - oracle));
            scale = std::max(scale, std::abs(oracle));
        }
        worst = std::max(worst, diff / scale);
    }
    r.passed = worst <= 1e-12;
    r.detail = fmt("max relative diff %.3e over 1000 points (tol 1e-12)", worst);
    return r;
}

inline CriterionResult quadrature_exactness() {
    CriterionResult r{3, "quadrature exactness", false, {}};
    const double c = std::pow(2.0 * std::numbers::pi, -1.5);
    const Box3 unit = Box3::volume({0, 1}, {0, 1}, {0, 1});
    const KnappParams p = make_params(kDefaultEps, kDefaultRho, 3, SlabMode::make_slab(), 0.5, -0.25);
    const Box3 tw = p.two_w();
    const double lo = tw.axis(1).lo, hi = tw.axis(1).hi;
    struct Case {
        const char* what;
        Box3 box;
        Monomial mono;
        double r;
        double exact;
    };
    const std::vector<Case> cases{
        {"indicator unit cube r=0", unit, {0, 0, 0}, 0.0, c},
        {"xi1 unit cube r=0", unit, {1, 0, 0}, 0.0, c / std::sqrt(3.0)},
        {"xi1 unit cube r=1", unit, {1, 0, 0}, 1.0, c * std::sqrt(1.0 / 3 + 1.0 / 5 + 2.0 / 9)},
        {"xi2 on 2W r=0", tw, {0, 1, 0}, 0.0,
         c * std::sqrt(tw.axis(0).length() * (hi * hi * hi - lo * lo * lo) / 3.0 * tw.axis(2).length())},
    };
    double worst_default = 0.0, worst_doubled = 0.0;
    for (const auto& k : cases) {
        const double d = sobolev_norm_monomial(k.box, k.mono, 1.0, k.r, kDefaultGrid);
        const double dd = sobolev_norm_monomial(k.box, k.mono, 1.0, k.r, detail::doubled(kDefaultGrid));
        worst_default = std::max(worst_default, std::abs(d - k.exact) / k.exact);
        worst_doubled = std::max(worst_doubled, std::abs(dd - k.exact) / k.exact);
    }
    // Measure of a box-box admissible region against closed form.
    const double tent = product_norm(unit, unit, 0.0);
    const double tent_exact = std::pow(2.0 * std::numbers::pi, -4.5) * std::sqrt(8.0 / 27.0);
    worst_default = std::max(worst_default, std::abs(tent - tent_exact) / tent_exact);
    const double tent2 = product_norm(unit, unit, 0.0, 1.0, detail::doubled(kDefaultGrid));
    worst_doubled = std::max(worst_doubled, std::abs(tent2 - tent_exact) / tent_exact);
    r.passed = worst_default <= 1e-3 && worst_doubled <= 1e-6;
    r.detail = fmt("max rel err %.3e at default grids (tol 1e-3), %.3e doubled (tol 1e-6)", worst_default,
                   worst_doubled);
    return r;
}

/// Uniform point of a box; a pinned axis returns its pinned value.
inline Vec3 draw(const Box3& b, std::mt19937_64& rng) {
    Vec3 x{};
    for (int i = 0; i < 3; ++i) {
        const Interval& iv = b.axis(i);
        std::uniform_real_distribution<double> u(iv.lo, iv.hi);
        x[static_cast<std::size_t>(i)] = iv.degenerate() ? iv.lo : u(rng);
    }
    return x;
}

inline CriterionResult kernel_nonnegativity() {
    CriterionResult r{4, "kernel nonnegativity", false, {}};
    std::mt19937_64 rng(11);
    long violations = 0;
    long checked = 0;
    for (const SlabMode mode : {SlabMode::make_slab(), SlabMode::make_surface()}) {
        for (int k : {1, 10}) {
            const KnappParams p = make_params(kDefaultEps, kDefaultRho, k, mode, 0.5, -0.25);
            for (const auto& kern : kernels(p, Component::both)) {
                for (int i = 0; i < 100000; ++i) {
                    const Vec3 d = draw(kern.support_a, rng);
                    const Vec3 eta = draw(kern.support_b, rng);
                    const Vec3 xi = d + eta;
                    ++checked;
                    if (!(kern.weight(xi, eta) >= 0.0)) ++violations;
                }
            }
        }
    }
    r.passed = violations == 0;
    r.detail = fmt("%ld violations in %ld samples (1e5 per term, slab+surface, k=1 and k=10)", violations, checked);
    return r;
}

inline CriterionResult realness() {
    CriterionResult r{5, "realness", false, {}};
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int k = 1 + i % 10;
        const KnappParams p = make_params(kDefaultEps, kDefaultRho, k, SlabMode::make_slab(), 0.5, -0.25);
        const Vec3 xi = draw(wsamp_box(p), rng);
        const cplx x = cplx(0.0, 4.0) * lambda_hat(p, xi, Component::lambda1).total;
        worst = std::max(worst, std::abs(x.imag()) / std::abs(x));
    }
    r.passed = worst <= 1e-8;
    r.detail = fmt("max |Im(4i F)|/|4i F| = %.3e over 100 (xi, k) pairs (tol 1e-8)", worst);
    return r;
}

inline CriterionResult resonance_separation() {
    CriterionResult r{6, "resonance separation", false, {}};
    double max_res = 0.0;      // max |omega| / sqrt(lambda) over empirically resonant
    double min_non = 1e300;    // min |omega| / lambda over the rest
    bool ok = true;
    int mismatches = 0;
    for (int k = 1; k <= 10; ++k) {
        const KnappParams p = make_params(kDefaultEps, kDefaultRho, k, SlabMode::make_slab(), 0.5, -0.25);
        const Vec3 xi = wsamp_box(p).center();
        for (const auto& kern : kernels(p, Component::lambda1)) {
            const auto region = admissible_eta_region(xi, kern.support_a, kern.support_b);
            if (!region) return {6, r.name, false, "empty admissible region at box centre"};
            const auto cls = resonance_classify(p, xi, region->center());
            int n_res = 0;
            for (const auto& c : cls) {
                if (c.empirical) {
                    ++n_res;
                    max_res = std::max(max_res, std::abs(c.omega) / std::sqrt(p.lambda));
                    ok = ok && std::abs(c.omega) <= std::pow(p.lambda, 0.75);
                } else {
                    min_non = std::min(min_non, std::abs(c.omega) / p.lambda);
                    ok = ok && std::abs(c.omega) >= 0.5 * p.lambda;
                }
                if (c.empirical != c.pattern) ++mismatches;
            }
            ok = ok && n_res > 0;
        }
    }
    r.passed = ok;
    r.detail = fmt("resonant max |w|/lambda^(1/2) = %.3e; nonresonant min |w|/lambda = %.4f (need >= 0.5); "
                   "%d of 160 triples classified differently by the s1=s2=s3 rule",
                   max_res, min_non, mismatches);
    return r;
}

inline CriterionResult amplitude_scaling(Context& ctx) {
    CriterionResult r{7, "amplitude scaling", false, {}};
    const auto slab = records_for(ctx.slab(), 0.5, -0.25);
    const auto surf = records_for(ctx.surface(), 0.5, -0.25);
    const FitResult fs = fit_records(slab, [](const SweepRecord& x) { return x.sup_amp; });
    const FitResult fu = fit_records(surf, [](const SweepRecord& x) { return x.sup_amp; });
    double cmin = 1e300, cmax = 0.0;
    for (const auto& rec : slab) {
        const double c = rec.sup_amp / (kDefaultEps * rec.lambda);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    const bool slope_ok = std::abs(fs.slope - 1.0) <= 0.10;
    const bool surf_ok = std::abs(fu.slope - 0.5) <= 0.10;
    const bool time_ok = ctx.slab_seconds() < 600.0;
    r.passed = slope_ok && surf_ok && cmin > 0.0 && time_ok;
    r.detail = fmt("slab slope %.4f (1.00 +/- 0.10), c = sup_amp/(eps lambda) in [%.4e, %.4e]; surface slope %.4f "
                   "(0.50 +/- 0.10); slab sweep %.1f s (limit 600 s)",
                   fs.slope, cmin, cmax, fu.slope, ctx.slab_seconds());
    return r;
}

inline CriterionResult data_norm_scaling(Context& ctx) {
    CriterionResult r{8, "data-norm scaling", false, {}};
    bool ok = true;
    std::string d;
    for (double rr : {-0.5, -0.25, 0.0}) {
        const auto recs = records_for(ctx.slab(), 0.5, rr);
        const FitResult f = fit_records(recs, [](const SweepRecord& x) { return x.norms.norm_d2a1; });
        const FitResult g = fit_records(recs, [](const SweepRecord& x) { return x.norms.norm_product; });
        ok = ok && std::abs(f.slope - (rr + 1.5)) <= 0.05;
        d += fmt("r=%.2f: ||d2 a1|| slope %.4f (want %.2f +/- 0.05), ||a1 a2|| slope %.4f vs r+1 = %.2f%s; ", rr,
                 f.slope, rr + 1.5, g.slope, rr + 1.0,
                 std::abs(g.slope - (rr + 1.0)) <= 0.2 ? "" : " [deviation logged]");
    }
    r.passed = ok;
    if (d.size() >= 2) d.resize(d.size() - 2);
    r.detail = d;
    return r;
}

inline CriterionResult output_norm_scaling(Context& ctx) {
    CriterionResult r{9, "output-norm scaling", false, {}};
    bool ok = true;
    std::string d;
    for (double s : {0.5, 0.75, 1.0}) {
        const auto recs = records_for(ctx.slab(), s, -0.25);
        const FitResult f = fit_records(recs, [](const SweepRecord& x) { return x.output_norm; });
        ok = ok && std::abs(f.slope - (s + 2.0)) <= 0.15;
        d += fmt("s=%.2f: slope %.4f (want %.2f +/- 0.15); ", s, f.slope, s + 2.0);
    }
    r.passed = ok;
    if (d.size() >= 2) d.resize(d.size() - 2);
    r.detail = d;
    return r;
}

inline CriterionResult verdict_consistency(Context& ctx) {
    CriterionResult r{10, "verdict consistency", false, {}};
    struct Case {
        double s, r;
        bool expect;
    };
    const std::vector<Case> cases{{0.5, -0.5, true}, {1.0, -0.25, true}, {0.75, -0.375, true}, {0.5, -0.25, false}};
    bool ok = true;
    std::string d;
    for (const auto& c : cases) {
        const Verdict v = smoothness_verdict(c.s, c.r, records_for(ctx.slab(), c.s, c.r));
        ok = ok && v.smooth_bound_fails == c.expect;
        d += fmt("(s,r)=(%.3g,%.3g): measured %.4f, predicted %.4f, fails=%s; ", c.s, c.r, v.measured_ratio_exponent,
                 v.predicted_ratio_exponent, v.smooth_bound_fails ? "true" : "false");
    }
    r.passed = ok;
    if (d.size() >= 2) d.resize(d.size() - 2);
    r.detail = d;
    return r;
}

inline CriterionResult nonresonant_envelope(Context& ctx) {
    CriterionResult r{11, "nonresonant envelope", false, {}};
    const auto recs = records_for(ctx.slab(), 0.5, -0.25);
    const FitResult f = fit_records(recs, [](const SweepRecord& x) { return x.nonres_envelope; });
    double worst = 1e300;  // min |res| / |non| over every lattice evaluation
    for (const auto& ks : ctx.slab())
        for (const auto& a : ks.amps) {
            const double non = std::abs(a.nonresonant_sum);
            worst = std::min(worst, non == 0.0 ? 1e300 : std::abs(a.resonant_sum) / non);
        }
    r.passed = f.slope <= 0.6 && worst >= 5.0;
    r.detail = fmt("envelope slope %.4f (<= 0.6); min |res|/|nonres| = %.3e (>= 5)", f.slope, worst);
    return r;
}

inline std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {}) {
    Context ctx;
    std::vector<std::function<CriterionResult()>> checks{
        multiplier_oracle,
        curl_identity,
        quadrature_exactness,
        kernel_nonnegativity,
        realness,
        resonance_separation,
        [&] { return amplitude_scaling(ctx); },
        [&] { return data_norm_scaling(ctx); },
        [&] { return output_norm_scaling(ctx); },
        [&] { return verdict_consistency(ctx); },
        [&] { return nonresonant_envelope(ctx); },
    };
    std::vector<CriterionResult> out;
    for (auto& c : checks) {
        out.push_back(c());
        if (on_result) on_result(out.back());
    }
    return out;
}

inline std::string line(const CriterionResult& r) {
    return fmt("[%s] %2d %-22s %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
}

}  // namespace knapp::acceptance
