#pragma once

#include <string>
#include <vector>

#include "fdlab/config.hpp"
#include "fdlab/report.hpp"

namespace fdlab::cli {

// Exit codes: 0 success, 1 check failure, 2 usage/config error.

int cmd_beta_curve(const config::RunConfig& cfg, double kappa_min, double kappa_max,
                   int count);
int cmd_lyapunov(const config::RunConfig& cfg, std::vector<double> radii = {0.25, 0.5, 1.0});
int cmd_kernel_bound(const config::RunConfig& cfg);
int cmd_convergence(const config::RunConfig& cfg);
int cmd_weights(const config::RunConfig& cfg);
int cmd_sde(const config::RunConfig& cfg);
int cmd_verify_all(const config::RunConfig& cfg);

/// All checks of the verify-all battery, merged deterministically by name.
std::vector<CheckReport> run_all_checks(const config::RunConfig& cfg);

void write_reports_json(const std::vector<CheckReport>& reports,
                        const config::RunConfig& cfg, const std::string& path);

} // namespace fdlab::cli
