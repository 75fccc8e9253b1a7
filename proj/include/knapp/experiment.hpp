#pragma once

// lambda sweeps over window indices, log-log exponent fits and the C^2
// verdict.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include "knapp/construction.hpp"
#include "knapp/quadrature.hpp"

namespace knapp {

struct NormReport {
    double norm_d2a1 = 0.0;     // ||d_2 a1||_{H^r}
    double norm_d1a2 = 0.0;     // ||d_1 a2||_{H^r}; formal 2D value in surface mode
    double norm_product = 0.0;  // ||a1 a2||_{H^r}
    double norm_total = 0.0;    // curvature data norm entering the closing inequality
    double norm_output_lower = 0.0;
};

/// norm_total combines ||d_2 a1|| and ||a1 a2|| in quadrature (they lie along
/// the orthogonal generators T^1 and [T^1, T^2]). ||d_1 a2|| is reported on its
/// own and does not enter norm_total; see smoothness_verdict for the exponent
/// that includes it.
inline NormReport data_norms(const KnappParams& p, double r) {
    NormReport n;
    n.norm_d2a1 = sobolev_norm_monomial(p.two_w(), {0, 1, 0}, 1.0, r, p.grid);
    n.norm_d1a2 = sobolev_norm_monomial(p.minus_w_prime(), {1, 0, 0}, p.alpha(), r, p.grid);
    n.norm_product = product_norm(p, r);
    n.norm_total = std::hypot(n.norm_d2a1, n.norm_product);
    return n;
}

struct SweepConfig {
    double eps = kDefaultEps;
    double rho = kDefaultRho;
    double s = 0.5;
    double r = -0.5;
    std::vector<int> k_list{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    SlabMode mode = SlabMode::make_slab();
    GridSize grid = kDefaultGrid;
    int samples = 27;  // W_samp lattice size (3 x 3 x 3)
};

/// Amplitude evaluations for one window index; independent of (s, r).
struct KSamples {
    int k = 0;
    bool skipped = false;
    KnappParams params{};
    QuadratureGrid lattice{};
    std::vector<AmplitudeBreakdown> amps;
};

struct SweepRecord {
    int k = 0;
    double lambda = 0.0;
    double t = 0.0;
    double sup_amp = 0.0;
    double res_amp = 0.0;
    double nonres_amp = 0.0;
    double nonres_envelope = 0.0;
    double output_norm = 0.0;
    NormReport norms{};
    std::string mode;
    std::vector<std::string> flags;
};

inline KSamples sample_k(const SweepConfig& cfg, int k) {
    KSamples out;
    out.k = k;
    try {
        out.params = make_params(cfg.eps, cfg.rho, k, cfg.mode, cfg.s, cfg.r, cfg.grid);
    } catch (const window_empty&) {
        out.skipped = true;
        return out;
    }
    out.lattice = wsamp_grid(out.params, cfg.samples);
    out.amps.reserve(out.lattice.nodes.size());
    for (const auto& nd : out.lattice.nodes) out.amps.push_back(lambda_hat(out.params, nd.point, Component::both));
    return out;
}

/// Amplitudes for every k, one task per k; results are kept in k_list order.
inline std::vector<KSamples> sample_sweep(const SweepConfig& cfg) {
    if (cfg.k_list.size() < 3) throw invalid_parameter("run_sweep: need at least three window indices");
    std::vector<std::future<KSamples>> jobs;
    jobs.reserve(cfg.k_list.size());
    for (int k : cfg.k_list) jobs.push_back(std::async(std::launch::async, [&cfg, k] { return sample_k(cfg, k); }));
    std::vector<KSamples> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    if (std::all_of(out.begin(), out.end(), [](const KSamples& s) { return s.skipped; }))
        throw invalid_parameter("run_sweep: every lambda window is empty");
    return out;
}

inline SweepRecord make_record(const KSamples& ks, double s, double r) {
    SweepRecord rec;
    rec.k = ks.k;
    rec.mode = ks.params.slab.name();
    if (ks.skipped) {
        rec.flags.push_back("window_empty");
        return rec;
    }
    const KnappParams& p = ks.params;
    rec.lambda = p.lambda;
    rec.t = p.t();
    std::vector<double> abs_amps;
    abs_amps.reserve(ks.amps.size());
    std::size_t arg = 0;
    bool converged = true;
    for (std::size_t j = 0; j < ks.amps.size(); ++j) {
        abs_amps.push_back(std::abs(ks.amps[j].total));
        if (abs_amps[j] > abs_amps[arg]) arg = j;
        converged = converged && ks.amps[j].converged;
    }
    const AmplitudeBreakdown& top = ks.amps[arg];
    rec.sup_amp = abs_amps[arg];
    rec.res_amp = std::abs(top.resonant_sum);
    rec.nonres_amp = std::abs(top.nonresonant_sum);
    rec.nonres_envelope = top.nonresonant_envelope;
    rec.output_norm = output_norm_from_samples(ks.lattice, abs_amps, s);
    rec.norms = data_norms(p, r);
    rec.norms.norm_output_lower = rec.output_norm;
    if (!converged) rec.flags.push_back("nonconverged");
    return rec;
}

inline std::vector<SweepRecord> records_for(const std::vector<KSamples>& samples, double s, double r) {
    std::vector<SweepRecord> out;
    out.reserve(samples.size());
    for (const auto& ks : samples) out.push_back(make_record(ks, s, r));
    return out;
}

inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    return records_for(sample_sweep(cfg), cfg.s, cfg.r);
}

struct FitPoint {
    double lambda;
    double value;
    std::string label;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

/// Ordinary least squares of log(value) on log(lambda).
inline FitResult fit_exponent(const std::vector<FitPoint>& pts) {
    if (pts.size() < 3) throw invalid_parameter("fit_exponent: need at least three points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i].value > 0.0) || !(pts[i].lambda > 0.0)) {
            const std::string who = pts[i].label.empty() ? "point " + std::to_string(i) : pts[i].label;
            throw invalid_parameter("fit_exponent: nonpositive value at " + who);
        }
    }
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& q : pts) {
        mx += std::log(q.lambda);
        my += std::log(q.value);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& q : pts) {
        const double dx = std::log(q.lambda) - mx;
        const double dy = std::log(q.value) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw invalid_parameter("fit_exponent: all lambda values coincide");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    f.n_points = static_cast<int>(pts.size());
    return f;
}

/// Fit of one record field over the unflagged records.
template <class Field>
FitResult fit_records(const std::vector<SweepRecord>& recs, Field field) {
    std::vector<FitPoint> pts;
    for (const auto& r : recs)
        if (r.flags.empty()) pts.push_back({r.lambda, field(r), "k=" + std::to_string(r.k)});
    return fit_exponent(pts);
}

inline constexpr double kVerdictMargin = 0.05;

struct Verdict {
    double s = 0.0;
    double r = 0.0;
    double measured_ratio_exponent = 0.0;
    double predicted_ratio_exponent = 0.0;  // (s + 2) - (2r + 3)
    bool smooth_bound_fails = false;
    std::vector<std::string> notes;
};

/// Measured exponent of ||d_delta^2 A_1||_{H^s} / ||F||_{H^r}^2 against the
/// predicted s - 1 - 2r. Positive growth beyond kVerdictMargin contradicts the
/// C^2 estimate.
inline Verdict smoothness_verdict(double s, double r, const std::vector<SweepRecord>& sweep) {
    std::vector<SweepRecord> usable;
    Verdict v;
    v.s = s;
    v.r = r;
    for (const auto& rec : sweep) {
        if (rec.flags.empty()) {
            usable.push_back(rec);
            continue;
        }
        std::string f;
        for (const auto& x : rec.flags) f += (f.empty() ? "" : ";") + x;
        v.notes.push_back("excluded k=" + std::to_string(rec.k) + " (" + f + ")");
    }
    if (usable.size() < 3) throw invalid_parameter("smoothness_verdict: need at least three unflagged records");

    const FitResult out = fit_records(usable, [](const SweepRecord& x) { return x.output_norm; });
    const FitResult tot = fit_records(usable, [](const SweepRecord& x) { return x.norms.norm_total; });
    v.measured_ratio_exponent = out.slope - 2.0 * tot.slope;
    v.predicted_ratio_exponent = (s + 2.0) - (2.0 * r + 3.0);
    v.smooth_bound_fails = v.measured_ratio_exponent > kVerdictMargin;

    char buf[256];
    std::snprintf(buf, sizeof buf, "output_norm slope %.4f (predicted s+2 = %.4f); norm_total slope %.4f (predicted r+3/2 = %.4f)",
                  out.slope, s + 2.0, tot.slope, r + 1.5);
    v.notes.emplace_back(buf);
    if (std::abs(v.measured_ratio_exponent - v.predicted_ratio_exponent) > 0.15) {
        std::snprintf(buf, sizeof buf, "measured ratio exponent %.4f differs from predicted %.4f",
                      v.measured_ratio_exponent, v.predicted_ratio_exponent);
        v.notes.emplace_back(buf);
    }
    const FitResult d1a2 = fit_records(usable, [](const SweepRecord& x) { return x.norms.norm_d1a2; });
    const FitResult full = fit_records(
        usable, [](const SweepRecord& x) { return std::hypot(x.norms.norm_total, x.norms.norm_d1a2); });
    std::snprintf(buf, sizeof buf,
                  "||d1 a2||_{H^r} slope %.4f (counted as 0 in the closing inequality); ratio exponent with it "
                  "included: %.4f",
                  d1a2.slope, out.slope - 2.0 * full.slope);
    v.notes.emplace_back(buf);
    if (!usable.empty() && usable.front().mode == "surface")
        v.notes.emplace_back("surface mode: ||d1 a2|| and ||a1 a2|| are formal values with 2D measure on xi_3 = 0");
    return v;
}

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline constexpr const char* kCsvHeader =
    "k,lambda,t,sup_amp,res_amp,nonres_amp,norm_d2a1,norm_d1a2,norm_product,norm_total,output_norm,mode,flags";

inline void write_csv(std::ostream& os, const std::vector<SweepRecord>& recs) {
    os << kCsvHeader << '\n';
    for (const auto& r : recs) {
        std::string flags;
        for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
        os << r.k;
        for (double x : {r.lambda, r.t, r.sup_amp, r.res_amp, r.nonres_amp, r.norms.norm_d2a1, r.norms.norm_d1a2,
                         r.norms.norm_product, r.norms.norm_total, r.output_norm})
            os << ',' << format_g17(x);
        os << ',' << r.mode << ',' << flags << '\n';
    }
}

}  // namespace knapp
