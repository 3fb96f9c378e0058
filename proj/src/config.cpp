#include "fdlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fdlab/numutil.hpp"

namespace fdlab::config {

std::vector<double> BinSpec::edges() const {
    if (count < 1 || !(r_max > r_min) || !(r_min >= 0.0))
        throw std::invalid_argument("BinSpec: need r_max > r_min >= 0, count >= 1");
    std::vector<double> e;
    if (spacing == "log") {
        if (!(r_min > 0.0)) throw std::invalid_argument("BinSpec: log spacing needs r_min > 0");
        e = num::logspace(r_min, r_max, count + 1);
    } else if (spacing == "linear") {
        for (int i = 0; i <= count; ++i)
            e.push_back(r_min + (r_max - r_min) * i / count);
    } else {
        throw std::invalid_argument("BinSpec: spacing must be 'log' or 'linear'");
    }
    return e;
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

} // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    reject_unknown(j, {"model", "grid", "solver", "mc", "checks", "output", "seed", "threads"},
                   "top level");
    if (j.contains("model")) {
        const auto& m = j["model"];
        reject_unknown(m, {"d", "alpha", "kappa"}, "model");
        if (m.contains("d")) c.model.d = m["d"].get<int>();
        if (m.contains("alpha")) c.model.alpha = m["alpha"].get<double>();
        if (m.contains("kappa")) c.model.kappa = m["kappa"].get<double>();
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        reject_unknown(g, {"n", "L"}, "grid");
        if (g.contains("n")) c.grid.n = g["n"].get<int>();
        if (g.contains("L")) c.grid.L = g["L"].get<double>();
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        reject_unknown(s, {"dt", "t_end", "eps_visc", "splitting", "delta_width"}, "solver");
        if (s.contains("dt")) c.solver_dt = s["dt"].get<double>();
        if (s.contains("t_end")) c.solver_t_end = s["t_end"].get<double>();
        if (s.contains("eps_visc")) c.solver_eps_visc = s["eps_visc"].get<double>();
        if (s.contains("splitting")) c.solver_splitting = s["splitting"].get<std::string>();
        if (s.contains("delta_width")) c.solver_delta_width = s["delta_width"].get<double>();
    }
    if (j.contains("mc")) {
        const auto& m = j["mc"];
        reject_unknown(m, {"n_particles", "dt", "t_end", "seed", "bins", "start"}, "mc");
        if (m.contains("n_particles")) c.mc_n_particles = m["n_particles"].get<std::int64_t>();
        if (m.contains("dt")) c.mc_dt = m["dt"].get<double>();
        if (m.contains("t_end")) c.mc_t_end = m["t_end"].get<double>();
        if (m.contains("seed")) c.seed = m["seed"].get<std::uint64_t>();
        if (m.contains("start")) c.mc_start = m["start"].get<std::vector<double>>();
        if (m.contains("bins")) {
            const auto& b = m["bins"];
            reject_unknown(b, {"r_min", "r_max", "count", "spacing"}, "mc.bins");
            if (b.contains("r_min")) c.bins.r_min = b["r_min"].get<double>();
            if (b.contains("r_max")) c.bins.r_max = b["r_max"].get<double>();
            if (b.contains("count")) c.bins.count = b["count"].get<int>();
            if (b.contains("spacing")) c.bins.spacing = b["spacing"].get<std::string>();
        }
    }
    if (j.contains("checks")) {
        const auto& ch = j["checks"];
        reject_unknown(ch, {"which"}, "checks");
        if (ch.contains("which")) c.checks_which = ch["which"].get<std::vector<std::string>>();
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        reject_unknown(o, {"directory", "formats"}, "output");
        if (o.contains("directory")) c.out_dir = o["directory"].get<std::string>();
        if (o.contains("formats")) c.formats = o["formats"].get<std::string>();
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

void RunConfig::validate() const {
    model.validate();
    grid.validate();
    if (grid.d != model.d) {
        // grid dimension follows the model
    }
    if (solver_splitting != "strang" && solver_splitting != "lie")
        throw std::invalid_argument("config: solver.splitting must be 'strang' or 'lie'");
    if (solver_dt < 0.0 || solver_t_end < 0.0 || solver_eps_visc < 0.0)
        throw std::invalid_argument("config: negative solver parameter");
    if (mc_n_particles < 1) throw std::invalid_argument("config: mc.n_particles >= 1");
    if (!mc_start.empty() && (int)mc_start.size() != model.d)
        throw std::invalid_argument("config: mc.start must have model.d components");
    (void)bins.edges();
}

evolve::SolverConfig RunConfig::solver_config() const {
    evolve::SolverConfig s;
    s.grid = grid;
    s.grid.d = model.d;
    s.dt = solver_dt;
    s.t_end = solver_t_end;
    s.eps_visc = solver_eps_visc;
    s.splitting = solver_splitting == "lie" ? evolve::SolverConfig::Splitting::Lie
                                            : evolve::SolverConfig::Splitting::Strang;
    s.delta_width = solver_delta_width;
    return s;
}

mc::MCConfig RunConfig::mc_config() const {
    mc::MCConfig m;
    m.n_particles = mc_n_particles;
    m.dt = mc_dt;
    m.t_end = mc_t_end;
    m.seed = seed;
    m.start = mc_start;
    if (m.start.empty()) {
        m.start.assign(model.d, 0.0);
        m.start[0] = 1.0;
    }
    m.bin_edges = bins.edges();
    m.threads = threads;
    return m;
}

nlohmann::json RunConfig::resolved() const {
    return {{"model", {{"d", model.d}, {"alpha", model.alpha}, {"kappa", model.kappa}}},
            {"grid", {{"n", grid.n}, {"L", grid.L}}},
            {"solver",
             {{"dt", solver_dt},
              {"t_end", solver_t_end},
              {"eps_visc", solver_eps_visc},
              {"splitting", solver_splitting},
              {"delta_width", solver_delta_width}}},
            {"mc",
             {{"n_particles", mc_n_particles},
              {"dt", mc_dt},
              {"t_end", mc_t_end},
              {"start", mc_config().start},
              {"bins",
               {{"r_min", bins.r_min},
                {"r_max", bins.r_max},
                {"count", bins.count},
                {"spacing", bins.spacing}}}}},
            {"checks", {{"which", checks_which}}},
            {"output", {{"directory", out_dir}, {"formats", formats}}},
            {"seed", seed},
            {"threads", threads}};
}

std::string RunConfig::version_hash() const {
    // FNV-1a over the resolved config plus the version tag; stable across reruns.
    std::string s = resolved().dump() + kVersion;
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

std::string RunConfig::provenance_comment() const {
    std::ostringstream out;
    out << "# version=" << kVersion << " hash=" << version_hash() << "\n";
    out << "# config=" << resolved().dump() << "\n";
    return out.str();
}

nlohmann::json RunConfig::provenance_json() const {
    return {{"version", kVersion}, {"hash", version_hash()}, {"config", resolved()}};
}

} // namespace fdlab::config
