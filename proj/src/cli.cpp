#include "fdlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fdlab/checks.hpp"
#include "fdlab/fracquad.hpp"
#include "fdlab/numutil.hpp"
#include "fdlab/parallel.hpp"

namespace fdlab::cli {

namespace {

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

std::ofstream open_out(const std::string& dir, const std::string& name) {
    ensure_dir(dir);
    std::ofstream out(dir + "/" + name);
    if (!out) throw std::runtime_error("cannot open " + dir + "/" + name);
    return out;
}

} // namespace

void write_reports_json(const std::vector<CheckReport>& reports,
                        const config::RunConfig& cfg, const std::string& path) {
    std::vector<CheckReport> sorted = reports;
    std::sort(sorted.begin(), sorted.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    nlohmann::json out;
    out["provenance"] = cfg.provenance_json();
    out["checks"] = nlohmann::json::array();
    bool all = true;
    for (const auto& r : sorted) {
        out["checks"].push_back(r.to_json());
        all = all && r.passed;
    }
    out["all_passed"] = all;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << out.dump(2) << "\n";
}

int cmd_beta_curve(const config::RunConfig& cfg, double kappa_min, double kappa_max,
                   int count) {
    if (!(kappa_min > 0.0) || !(kappa_max > kappa_min) || count < 2) {
        std::cerr << "beta-curve: need 0 < kappa_min < kappa_max and count >= 2\n";
        return 2;
    }
    auto out = open_out(cfg.out_dir, "beta_curve.csv");
    out << cfg.provenance_comment();
    out << "kappa,beta,residual\n";
    char line[160];
    for (double k : num::logspace(kappa_min, kappa_max, count)) {
        model::BetaSolution sol = model::beta_of_kappa(k, cfg.model);
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", k, sol.beta, sol.residual);
        out << line;
    }
    return 0;
}

int cmd_lyapunov(const config::RunConfig& cfg, std::vector<double> radii) {
    if (radii.empty()) {
        std::cerr << "lyapunov: empty radius list\n";
        return 2;
    }
    model::BetaSolution sol = model::beta_of_kappa(cfg.model.kappa, cfg.model);
    nlohmann::json rows = nlohmann::json::array();
    for (double r : radii) {
        double res = fracops::lyapunov_residual(sol.beta, cfg.model.kappa, r, cfg.model);
        double scaled = std::abs(res) / std::pow(r, sol.beta - cfg.model.alpha);
        rows.push_back({{"r", r}, {"residual", res}, {"residual_scaled", scaled}});
    }
    nlohmann::json out = {{"provenance", cfg.provenance_json()},
                          {"beta", sol.beta},
                          {"beta_residual", sol.residual},
                          {"rows", rows}};
    auto f = open_out(cfg.out_dir, "lyapunov.json");
    f << out.dump(2) << "\n";
    return 0; // report-only mode
}

int cmd_kernel_bound(const config::RunConfig& cfg) {
    model::BetaSolution sol = model::beta_of_kappa(cfg.model.kappa, cfg.model);
    evolve::SolverConfig sc = cfg.solver_config();
    int threads = par::resolve_threads(cfg.threads);
    CheckReport rep = checks::check_kernel_bound(sol.beta, sc, cfg.model, {0.25, 0.5, 1.0},
                                                 0.05, 0.5, 5, 0.5, threads);
    std::vector<double> y0(cfg.model.d, 0.0);
    y0[0] = 0.5;
    CheckReport nn = checks::check_kernel_nonnegativity(0.5, y0, sc, cfg.model);
    write_reports_json({rep, nn}, cfg, cfg.out_dir + "/kernel_bound.json");

    auto out = open_out(cfg.out_dir, "kernel_bound.csv");
    out << cfg.provenance_comment();
    out << "t,y,sup,ratio\n";
    char line[200];
    for (const auto& row : rep.measured["rows"]) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n",
                      row["t"].get<double>(), row["y"].get<double>(),
                      row["sup"].get<double>(), row["ratio"].get<double>());
        out << line;
    }
    std::cout << (rep.passed && nn.passed ? "PASS" : "FAIL") << " kernel-bound\n";
    return rep.passed && nn.passed ? 0 : 1;
}

int cmd_convergence(const config::RunConfig& cfg) {
    evolve::SolverConfig sc = cfg.solver_config();
    std::vector<double> eps_list = {1e-2, 1e-3, 1e-4};
    std::vector<double> r_list = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    std::vector<double> t_list = {0.05, 0.1, 0.2, 0.5, 1.0};
    std::vector<CheckReport> reps;
    reps.push_back(checks::check_claim1_gradient(1.0, 1e-3, sc, cfg.model));
    reps.push_back(checks::check_claim2_cauchy(eps_list, sc, cfg.model));
    reps.push_back(checks::check_lr_contraction(r_list, 1.0, 1e-3, sc, cfg.model));
    reps.push_back(checks::check_ultracontractivity(t_list, 1.0,
                                                    std::numeric_limits<double>::infinity(),
                                                    sc, cfg.model));
    reps.push_back(checks::check_sobolev_ratio(20, cfg.seed, 1e-3, sc, cfg.model));
    write_reports_json(reps, cfg, cfg.out_dir + "/convergence.json");
    bool all = std::all_of(reps.begin(), reps.end(),
                           [](const CheckReport& r) { return r.passed; });
    for (const auto& r : reps)
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "\n";
    return all ? 0 : 1;
}

int cmd_weights(const config::RunConfig& cfg) {
    model::BetaSolution sol = model::beta_of_kappa(cfg.model.kappa, cfg.model);
    evolve::SolverConfig sc = cfg.solver_config();
    int threads = par::resolve_threads(cfg.threads);

    std::vector<CheckReport> reps;
    model::WeightSpec ws = model::WeightSpec::make(1.0, sol.beta, cfg.model);
    reps.push_back(model::check_B22_B23(ws, cfg.model));

    // eta knot audit: values and one-sided derivatives at tau = 1, 2
    {
        CheckReport rep;
        rep.name = "eta_knot_continuity";
        rep.tolerance = 1e-5;
        double b = sol.beta;
        double h = 1e-6;
        double v1 = model::weight_eta(1.0, b);
        double v2 = model::weight_eta(2.0, b);
        double d1l = (model::weight_eta(1.0, b) - model::weight_eta(1.0 - h, b)) / h;
        double d1r = (model::weight_eta(1.0 + h, b) - model::weight_eta(1.0, b)) / h;
        double d2l = (model::weight_eta(2.0, b) - model::weight_eta(2.0 - h, b)) / h;
        double d2r = (model::weight_eta(2.0 + h, b) - model::weight_eta(2.0, b)) / h;
        rep.measured = {{"eta_1", v1},   {"eta_2", v2},   {"dleft_1", d1l},
                        {"dright_1", d1r}, {"dleft_2", d2l}, {"dright_2", d2r}};
        rep.bound = {{"eta_1", 1.0}, {"eta_2", 1.0 + 0.5 * b}, {"d_1", b}, {"d_2", 0.0}};
        rep.passed = std::abs(v1 - 1.0) < 1e-12 && std::abs(v2 - 1.0 - 0.5 * b) < 1e-12 &&
                     std::abs(d1l - b) < 1e-5 && std::abs(d1r - b) < 1e-5 &&
                     std::abs(d2l) < 1e-5 && std::abs(d2r) < 1e-5;
        reps.push_back(rep);
    }

    std::vector<double> eps_list = {1e-2, 1e-3, 1e-4};
    reps.push_back(checks::check_lemma_V(eps_list, 1.0, sol.beta, sc, cfg.model));
    std::vector<double> s_list = {0.5, 1.0, 2.0};
    reps.push_back(checks::check_B3_weighted(s_list, 10, sol.beta, sc, cfg.model, 0.10,
                                             threads));

    write_reports_json(reps, cfg, cfg.out_dir + "/weights.json");
    bool all = std::all_of(reps.begin(), reps.end(),
                           [](const CheckReport& r) { return r.passed; });
    for (const auto& r : reps)
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "\n";
    return all ? 0 : 1;
}

int cmd_sde(const config::RunConfig& cfg) {
    mc::MCConfig mcfg = cfg.mc_config();
    mcfg.threads = par::resolve_threads(cfg.threads);
    mc::ParticleEnsemble ens = mc::simulate_ensemble(mcfg, cfg.model);
    mc::RadialProfile prof = mc::radial_density(ens, mcfg.bin_edges);
    prof.write_csv(cfg.out_dir + "/sde_profile.csv", cfg.provenance_comment());

    CheckReport rep;
    rep.name = "mc_vanishing_exponent";
    double scale = std::pow(mcfg.t_end, 1.0 / cfg.model.alpha);
    double rlo = 0.05 * scale, rhi = 0.5 * scale;
    try {
        mc::ExponentFit fit = mc::fit_vanishing_exponent(prof, rlo, rhi);
        rep.measured = {{"beta_hat", fit.beta_hat},
                        {"stderr", fit.stderr_},
                        {"bins_used", fit.bins_used}};
        if (cfg.model.kappa > 0.0) {
            model::BetaSolution sol = model::beta_of_kappa(cfg.model.kappa, cfg.model);
            double lower = sol.beta - 2.0 * fit.stderr_ - 0.1;
            rep.bound = {{"beta", sol.beta}, {"lower", lower}};
            rep.measured["beta_hat_minus_beta"] = fit.beta_hat - sol.beta;
            rep.passed = fit.beta_hat >= lower;
        } else {
            rep.bound = {{"slope_abs_max", 0.15}};
            rep.passed = std::abs(fit.beta_hat) <= 0.15 + 3.0 * fit.stderr_;
        }
    } catch (const std::exception& e) {
        rep.passed = false;
        rep.metadata = {{"error", e.what()}};
    }
    rep.metadata["window"] = {rlo, rhi};
    rep.provenance = cfg.provenance_json();
    write_reports_json({rep}, cfg, cfg.out_dir + "/sde.json");
    std::cout << (rep.passed ? "PASS " : "FAIL ") << rep.name << "\n";
    return rep.passed ? 0 : 1;
}

std::vector<CheckReport> run_all_checks(const config::RunConfig& cfg) {
    model::ModelParams p = cfg.model;
    std::vector<double> slist = {1e-2, 1e-3, 1e-4, 1e-6};
    model::sigma_bounds(p, slist);
    model::BetaSolution sol = model::beta_of_kappa(p.kappa, p);
    evolve::SolverConfig sc = cfg.solver_config();
    int threads = par::resolve_threads(cfg.threads);

    std::vector<CheckReport> reps;
    auto want = [&](const std::string& name) {
        if (cfg.checks_which.empty()) return true;
        return std::find(cfg.checks_which.begin(), cfg.checks_which.end(), name) !=
               cfg.checks_which.end();
    };

    if (want("B22_B23"))
        reps.push_back(model::check_B22_B23(model::WeightSpec::make(1.0, sol.beta, p), p));
    if (want("kernel_bound")) {
        evolve::SolverConfig kc = sc;
        kc.grid.n = 96;
        kc.grid.L = 2.0;
        kc.delta_width = 0.0;
        reps.push_back(checks::check_kernel_bound(sol.beta, kc, p, {0.25, 0.5, 1.0}, 0.05,
                                                  0.5, 5, 0.5, threads));
        std::vector<double> y0(p.d, 0.0);
        y0[0] = 0.5;
        reps.push_back(checks::check_kernel_nonnegativity(0.5, y0, kc, p));
    }
    if (want("claim1")) reps.push_back(checks::check_claim1_gradient(1.0, 1e-3, sc, p));
    if (want("claim2"))
        reps.push_back(checks::check_claim2_cauchy(std::vector<double>{1e-2, 1e-3, 1e-4}, sc, p));
    if (want("lr_contraction")) {
        std::vector<double> r_list = {1.0, 2.0, std::numeric_limits<double>::infinity()};
        reps.push_back(checks::check_lr_contraction(r_list, 1.0, 1e-3, sc, p));
    }
    if (want("ultracontractivity")) {
        std::vector<double> t_list = {0.05, 0.1, 0.2, 0.5, 1.0};
        reps.push_back(checks::check_ultracontractivity(
            t_list, 1.0, std::numeric_limits<double>::infinity(), sc, p));
    }
    if (want("sobolev")) reps.push_back(checks::check_sobolev_ratio(20, cfg.seed, 1e-3, sc, p));
    if (want("lemma_V"))
        reps.push_back(checks::check_lemma_V(std::vector<double>{1e-2, 1e-3, 1e-4}, 1.0,
                                             sol.beta, sc, p));
    if (want("B3"))
        reps.push_back(checks::check_B3_weighted(std::vector<double>{0.5, 1.0, 2.0}, 10,
                                                 sol.beta, sc, p, 0.10, threads));
    return reps;
}

int cmd_verify_all(const config::RunConfig& cfg) {
    std::vector<CheckReport> reps = run_all_checks(cfg);
    // the SDE battery joins the merged report
    {
        config::RunConfig c2 = cfg;
        mc::MCConfig mcfg = c2.mc_config();
        mcfg.threads = par::resolve_threads(cfg.threads);
        mc::ParticleEnsemble ens = mc::simulate_ensemble(mcfg, cfg.model);
        mc::RadialProfile prof = mc::radial_density(ens, mcfg.bin_edges);
        CheckReport rep;
        rep.name = "mc_vanishing_exponent";
        double scale = std::pow(mcfg.t_end, 1.0 / cfg.model.alpha);
        try {
            mc::ExponentFit fit = mc::fit_vanishing_exponent(prof, 0.05 * scale, 0.5 * scale);
            model::BetaSolution sol = model::beta_of_kappa(cfg.model.kappa, cfg.model);
            rep.measured = {{"beta_hat", fit.beta_hat}, {"stderr", fit.stderr_}};
            rep.bound = {{"lower", sol.beta - 2.0 * fit.stderr_ - 0.1}};
            rep.passed = fit.beta_hat >= sol.beta - 2.0 * fit.stderr_ - 0.1;
        } catch (const std::exception& e) {
            rep.passed = false;
            rep.metadata = {{"error", e.what()}};
        }
        reps.push_back(rep);
    }
    write_reports_json(reps, cfg, cfg.out_dir + "/verify_all.json");
    bool all = true;
    std::vector<CheckReport> sorted = reps;
    std::sort(sorted.begin(), sorted.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    for (const auto& r : sorted) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "\n";
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

} // namespace fdlab::cli
