#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fdlab/cli.hpp"
#include "fdlab/config.hpp"
#include "fdlab/grid.hpp"

using namespace fdlab;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("config: defaults, overrides, unknown keys rejected") {
    config::RunConfig def = config::RunConfig::from_json(nlohmann::json::object());
    CHECK(def.model.d == 3);
    CHECK(def.model.alpha == 0.5);
    CHECK(def.grid.n == 64);
    CHECK(def.seed == 42);

    nlohmann::json j = {{"model", {{"d", 3}, {"alpha", 1.0}, {"kappa", 2.0}}},
                        {"grid", {{"n", 32}, {"L", 4.0}}},
                        {"seed", 7}};
    config::RunConfig c = config::RunConfig::from_json(j);
    CHECK(c.model.alpha == 1.0);
    CHECK(c.model.kappa == 2.0);
    CHECK(c.grid.n == 32);
    CHECK(c.seed == 7);

    nlohmann::json bad = {{"modell", {{"d", 3}}}};
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), std::invalid_argument);
    nlohmann::json bad2 = {{"model", {{"d", 3}, {"alhpa", 0.5}}}};
    CHECK_THROWS_AS(config::RunConfig::from_json(bad2), std::invalid_argument);
    nlohmann::json bad3 = {{"solver", {{"splitting", "leapfrog"}}}};
    CHECK_THROWS_AS(config::RunConfig::from_json(bad3), std::invalid_argument);

    // defaults are explicit in the resolved provenance
    CHECK(def.resolved()["solver"]["t_end"].get<double>() == 1.0);
    CHECK(def.provenance_comment().rfind("# version=", 0) == 0);
    CHECK(def.version_hash().size() == 16);
}

TEST_CASE("mc defaults: start at |x0| = 1, bins valid") {
    config::RunConfig def = config::RunConfig::from_json(nlohmann::json::object());
    mc::MCConfig m = def.mc_config();
    CHECK(m.start.size() == 3);
    CHECK(m.start[0] == 1.0);
    CHECK(m.bin_edges.size() == (size_t)def.bins.count + 1);
}

TEST_CASE("beta-curve: determinism, monotone output, usage errors") {
    config::RunConfig cfg = config::RunConfig::from_json(nlohmann::json::object());
    cfg.out_dir = "cli_test_out";
    CHECK(cli::cmd_beta_curve(cfg, 1e-2, 1e2, 21) == 0);
    std::string first = slurp("cli_test_out/beta_curve.csv");
    CHECK(cli::cmd_beta_curve(cfg, 1e-2, 1e2, 21) == 0);
    CHECK(first == slurp("cli_test_out/beta_curve.csv")); // byte-identical rerun
    CHECK(first.rfind("# version=", 0) == 0);

    // monotone beta column
    std::istringstream in(first);
    std::string line;
    double prev = -1.0;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'k') continue;
        double kappa, beta, res;
        CHECK(std::sscanf(line.c_str(), "%lg,%lg,%lg", &kappa, &beta, &res) == 3);
        CHECK(beta > prev);
        CHECK(beta < 0.5);
        prev = beta;
        ++rows;
    }
    CHECK(rows == 21);

    CHECK(cli::cmd_beta_curve(cfg, 1e2, 1e-2, 21) == 2); // empty/invalid range
    CHECK(cli::cmd_beta_curve(cfg, 1e-2, 1e2, 1) == 2);
    std::filesystem::remove_all("cli_test_out");
}

TEST_CASE("lyapunov command is report-only") {
    config::RunConfig cfg = config::RunConfig::from_json(nlohmann::json::object());
    cfg.out_dir = "cli_test_out2";
    // deliberately mismatched kappa still exits 0 and reports the residual
    cfg.model.kappa = 2.0;
    CHECK(cli::cmd_lyapunov(cfg, {0.5}) == 0);
    nlohmann::json j;
    std::ifstream in("cli_test_out2/lyapunov.json");
    in >> j;
    CHECK(j.contains("rows"));
    CHECK(j["rows"].size() == 1);
    CHECK(j.contains("provenance"));
    std::filesystem::remove_all("cli_test_out2");
}

TEST_CASE("field binary round trip") {
    grid::GridSpec s{3, 16, 4.0};
    grid::GridField f(s);
    for (size_t i = 0; i < f.v.size(); ++i) f.v[i] = std::sin(0.1 * i);
    grid::write_field(f, "field_test.bin");
    grid::GridField g = grid::read_field("field_test.bin");
    CHECK(g.spec == s);
    CHECK(g.v == f.v);
    std::filesystem::remove("field_test.bin");
}

TEST_SUITE_END();
