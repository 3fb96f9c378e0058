#include <CLI11.hpp>

#include <iostream>

#include "fdlab/cli.hpp"

using namespace fdlab;

int main(int argc, char** argv) {
    CLI::App app{"fdlab: numerical laboratory for supercritical fractional diffusion with a "
                 "repulsive Hardy-type drift"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed = -1;
    int threads = -1;
    app.add_option("--config", config_path, "JSON configuration file")->capture_default_str();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "RNG seed (overrides config)");
    app.add_option("--threads", threads, "worker threads, 0 = hardware (overrides config)");

    auto* c_beta = app.add_subcommand("beta-curve", "exponent curve beta(kappa) as CSV");
    double kmin = 1e-2, kmax = 1e2;
    int kcount = 81;
    c_beta->add_option("--kappa-min", kmin, "lower end of the kappa sweep");
    c_beta->add_option("--kappa-max", kmax, "upper end of the kappa sweep");
    c_beta->add_option("--count", kcount, "number of kappa samples");

    auto* c_lyap = app.add_subcommand("lyapunov", "Lyapunov identity residuals (report-only)");
    std::vector<double> radii = {0.25, 0.5, 1.0};
    c_lyap->add_option("--radii", radii, "radii to probe");

    app.add_subcommand("kernel-bound", "vanishing heat-kernel bound audit");
    app.add_subcommand("convergence", "semigroup audits: gradient bound, eps-Cauchy, L^r, "
                                      "ultracontractivity, Sobolev ratio");
    app.add_subcommand("weights", "weight conditions, generator lower bound, weighted "
                                  "contraction");
    app.add_subcommand("sde", "Monte Carlo ensemble, radial profile, exponent fit");
    app.add_subcommand("verify-all", "full desk-scale check battery; exit 1 on any failure");

    CLI11_PARSE(app, argc, argv);

    config::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = config::RunConfig::from_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.seed = (std::uint64_t)seed;
        if (threads >= 0) cfg.threads = threads;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand("beta-curve")) return cli::cmd_beta_curve(cfg, kmin, kmax, kcount);
        if (app.got_subcommand("lyapunov")) return cli::cmd_lyapunov(cfg, radii);
        if (app.got_subcommand("kernel-bound")) return cli::cmd_kernel_bound(cfg);
        if (app.got_subcommand("convergence")) return cli::cmd_convergence(cfg);
        if (app.got_subcommand("weights")) return cli::cmd_weights(cfg);
        if (app.got_subcommand("sde")) return cli::cmd_sde(cfg);
        if (app.got_subcommand("verify-all")) return cli::cmd_verify_all(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage/config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
