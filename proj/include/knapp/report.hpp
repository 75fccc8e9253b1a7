#pragma once

// JSON views of breakdowns and sweep reports (schema 1).

#include <json.hpp>

#include "knapp/experiment.hpp"
#include "knapp/quadrature.hpp"

namespace knapp {

inline constexpr int kReportSchema = 1;

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json to_json(const AmplitudeBreakdown& b) {
    nlohmann::json per = nlohmann::json::object();
    for (int s = 0; s < SignTriple::count; ++s)
        if (contains(b.signs, SignTriple(s)))
            per[SignTriple(s).str()] = complex_json(b.per_sign[static_cast<std::size_t>(s)]);
    return {{"total", complex_json(b.total)},
            {"per_sign", per},
            {"resonant_sum", complex_json(b.resonant_sum)},
            {"nonresonant_sum", complex_json(b.nonresonant_sum)},
            {"nonresonant_envelope", b.nonresonant_envelope},
            {"eval_point", b.eval_point},
            {"t", b.t},
            {"converged", b.converged},
            {"refinements", b.refinements}};
}

inline nlohmann::json to_json(const FitResult& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"n_points", f.n_points}};
}

inline nlohmann::json to_json(const SweepRecord& r) {
    return {{"k", r.k},
            {"lambda", r.lambda},
            {"t", r.t},
            {"sup_amp", r.sup_amp},
            {"res_amp", r.res_amp},
            {"nonres_amp", r.nonres_amp},
            {"nonres_envelope", r.nonres_envelope},
            {"output_norm", r.output_norm},
            {"norms",
             {{"norm_d2a1", r.norms.norm_d2a1},
              {"norm_d1a2", r.norms.norm_d1a2},
              {"norm_product", r.norms.norm_product},
              {"norm_total", r.norms.norm_total},
              {"norm_output_lower", r.norms.norm_output_lower}}},
            {"mode", r.mode},
            {"flags", r.flags}};
}

inline nlohmann::json to_json(const Verdict& v) {
    return {{"s", v.s},
            {"r", v.r},
            {"measured_ratio_exponent", v.measured_ratio_exponent},
            {"predicted_ratio_exponent", v.predicted_ratio_exponent},
            {"smooth_bound_fails", v.smooth_bound_fails},
            {"notes", v.notes}};
}

/// {schema, params, records[], fits{sup_amp, output_norm, norm_total}, verdict}.
/// Fits and verdict are null when fewer than three records are usable.
inline nlohmann::json sweep_report(const SweepConfig& cfg, const std::vector<SweepRecord>& recs) {
    nlohmann::json params = {{"eps", cfg.eps},
                             {"rho", cfg.rho},
                             {"s", cfg.s},
                             {"r", cfg.r},
                             {"k_list", cfg.k_list},
                             {"mode", cfg.mode.name()},
                             {"grid", cfg.grid},
                             {"samples", cfg.samples}};
    if (!cfg.mode.surface) {
        params["slab_thickness_sqrt_lambda"] = cfg.mode.thickness;
        params["slab_alpha"] = cfg.mode.alpha;
    }
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : recs) records.push_back(to_json(r));

    nlohmann::json fits = nullptr;
    nlohmann::json verdict = nullptr;
    const auto usable = std::count_if(recs.begin(), recs.end(), [](const SweepRecord& r) { return r.flags.empty(); });
    if (usable >= 3) {
        fits = {{"sup_amp", to_json(fit_records(recs, [](const SweepRecord& r) { return r.sup_amp; }))},
                {"output_norm", to_json(fit_records(recs, [](const SweepRecord& r) { return r.output_norm; }))},
                {"norm_total", to_json(fit_records(recs, [](const SweepRecord& r) { return r.norms.norm_total; }))}};
        verdict = to_json(smoothness_verdict(cfg.s, cfg.r, recs));
    }
    return {{"schema", kReportSchema}, {"params", params}, {"records", records}, {"fits", fits}, {"verdict", verdict}};
}

}  // namespace knapp
