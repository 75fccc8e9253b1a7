// knapp: command-line front end for the Knapp counterexample engine.
//
//   knapp window --eps E --rho R --k K
//   knapp eval   --eps E --k K --mode slab|surface --xi x1,x2,x3 [--signs all|+-+]
//   knapp sweep  --eps E --s S --r R --kmin A --kmax B --mode M --grid n1,n2,n3 --out F.csv [--json F.json]
//   knapp verify
//
// Exit codes: 0 success, 1 acceptance failure, 2 invalid parameters.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "knapp/acceptance.hpp"
#include "knapp/experiment.hpp"
#include "knapp/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptance = 1;
constexpr int kExitInvalid = 2;

knapp::SlabMode parse_mode(const std::string& m) {
    if (m == "slab") return knapp::SlabMode::make_slab();
    if (m == "surface") return knapp::SlabMode::make_surface();
    throw knapp::invalid_parameter("mode must be slab or surface, got " + m);
}

knapp::GridSize to_grid(const std::vector<int>& g) {
    if (g.size() != 3) throw knapp::invalid_parameter("grid needs three sizes");
    return {g[0], g[1], g[2]};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knapp counterexample engine for the Yang-Mills flow map in Lorenz gauge"};
    app.require_subcommand(1);

    double eps = knapp::kDefaultEps;
    double rho = knapp::kDefaultRho;
    int k = 1;

    auto* window = app.add_subcommand("window", "print the sqrt(lambda) window or EMPTY");
    window->add_option("--eps", eps)->required();
    window->add_option("--rho", rho)->required();
    window->add_option("--k", k)->required();

    std::string mode = "slab";
    std::vector<double> xi;
    std::string signs = "all";
    std::string which = "both";
    std::vector<int> grid{knapp::kDefaultGrid[0], knapp::kDefaultGrid[1], knapp::kDefaultGrid[2]};

    auto* eval = app.add_subcommand("eval", "JSON amplitude breakdown at one frequency");
    eval->add_option("--eps", eps)->required();
    eval->add_option("--k", k)->required();
    eval->add_option("--mode", mode)->check(CLI::IsMember({"slab", "surface"}));
    eval->add_option("--xi", xi)->required()->delimiter(',')->expected(3);
    eval->add_option("--signs", signs, "all, or a triple such as +-+");
    eval->add_option("--which", which, "L1, L2 or both")->check(CLI::IsMember({"L1", "L2", "both"}));
    eval->add_option("--rho", rho);
    eval->add_option("--grid", grid)->delimiter(',')->expected(3);

    double s = 0.5;
    double r = -0.5;
    int kmin = 1;
    int kmax = 10;
    int samples = 27;
    std::string out_csv;
    std::string out_json;

    auto* sweep = app.add_subcommand("sweep", "lambda sweep to CSV (and optional JSON report)");
    sweep->add_option("--eps", eps)->required();
    sweep->add_option("--s", s)->required();
    sweep->add_option("--r", r)->required();
    sweep->add_option("--kmin", kmin)->required();
    sweep->add_option("--kmax", kmax)->required();
    sweep->add_option("--mode", mode)->required()->check(CLI::IsMember({"slab", "surface"}));
    sweep->add_option("--grid", grid)->required()->delimiter(',')->expected(3);
    sweep->add_option("--out", out_csv)->required();
    sweep->add_option("--json", out_json);
    sweep->add_option("--rho", rho);
    sweep->add_option("--samples", samples, "W_samp lattice size");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (window->parsed()) {
            const auto w = knapp::lambda_window(eps, rho, k);
            if (!w) {
                std::printf("EMPTY\n");
            } else {
                std::printf("%s %s\n", knapp::format_g17(w->first).c_str(), knapp::format_g17(w->second).c_str());
            }
            return kExitOk;
        }

        if (eval->parsed()) {
            const auto p = knapp::make_params(eps, rho, k, parse_mode(mode), s, r, to_grid(grid));
            const knapp::SignSet set = signs == "all" ? knapp::kAllSigns : knapp::only(knapp::SignTriple::parse(signs));
            const auto comp = which == "L1"   ? knapp::Component::lambda1
                              : which == "L2" ? knapp::Component::lambda2
                                              : knapp::Component::both;
            const auto b = knapp::lambda_hat(p, {xi[0], xi[1], xi[2]}, comp, set);
            nlohmann::json j = knapp::to_json(b);
            j["lambda"] = p.lambda;
            j["k"] = p.k;
            j["mode"] = mode;
            std::cout << j.dump(2) << '\n';
            return kExitOk;
        }

        if (sweep->parsed()) {
            if (kmax < kmin) throw knapp::invalid_parameter("kmax must be >= kmin");
            knapp::SweepConfig cfg;
            cfg.eps = eps;
            cfg.rho = rho;
            cfg.s = s;
            cfg.r = r;
            cfg.k_list.clear();
            for (int kk = kmin; kk <= kmax; ++kk) cfg.k_list.push_back(kk);
            cfg.mode = parse_mode(mode);
            cfg.grid = to_grid(grid);
            cfg.samples = samples;
            const auto recs = knapp::run_sweep(cfg);
            std::ofstream csv(out_csv);
            if (!csv) throw knapp::invalid_parameter("cannot open " + out_csv);
            knapp::write_csv(csv, recs);
            if (!out_json.empty()) {
                std::ofstream js(out_json);
                if (!js) throw knapp::invalid_parameter("cannot open " + out_json);
                js << knapp::sweep_report(cfg, recs).dump(2) << '\n';
            }
            return kExitOk;
        }

        if (verify->parsed()) {
            int failed = 0;
            knapp::acceptance::run_all([&](const knapp::acceptance::CriterionResult& res) {
                std::printf("%s\n", knapp::acceptance::line(res).c_str());
                std::fflush(stdout);
                if (!res.passed) ++failed;
            });
            return failed == 0 ? kExitOk : kExitAcceptance;
        }
    } catch (const knapp::invalid_parameter& e) {
        std::fprintf(stderr, "invalid parameter: %s\n", e.what());
        return kExitInvalid;
    } catch (const knapp::singular_frequency& e) {
        std::fprintf(stderr, "invalid parameter: %s\n", e.what());
        return kExitInvalid;
    }
    return kExitOk;
}
