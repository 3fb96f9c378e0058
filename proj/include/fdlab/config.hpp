#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdlab/evolve.hpp"
#include "fdlab/mc.hpp"
#include "fdlab/model.hpp"

namespace fdlab::config {

inline constexpr const char* kVersion = "0.1.0";

struct BinSpec {
    double r_min = 0.005;
    double r_max = 4.0;
    int count = 48;
    std::string spacing = "log"; // or "linear"
    std::vector<double> edges() const;
};

/// Fully resolved run configuration.  Parsed from a JSON file (schema below),
/// unknown keys are rejected; every default is explicit in resolved().
struct RunConfig {
    model::ModelParams model;
    grid::GridSpec grid{3, 64, 8.0};
    double solver_dt = 0.0;
    double solver_t_end = 1.0;
    double solver_eps_visc = 0.0;
    std::string solver_splitting = "strang";
    double solver_delta_width = 0.0;
    std::int64_t mc_n_particles = 100000;
    double mc_dt = 0.0;
    double mc_t_end = 0.5;
    std::uint64_t seed = 42;
    std::vector<double> mc_start; // defaults to (1, 0, ..., 0)
    BinSpec bins;
    std::vector<std::string> checks_which; // empty = all
    std::string out_dir = "out";
    std::string formats = "csv,json";
    int threads = 0; // 0 = hardware

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);

    evolve::SolverConfig solver_config() const;
    mc::MCConfig mc_config() const;

    nlohmann::json resolved() const;
    std::string version_hash() const;
    /// '#'-prefixed provenance lines (resolved config + version hash) for CSV files.
    std::string provenance_comment() const;
    /// provenance object for JSON reports.
    nlohmann::json provenance_json() const;

    void validate() const;
};

} // namespace fdlab::config
