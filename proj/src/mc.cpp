#include "fdlab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fdlab/numutil.hpp"
#include "fdlab/parallel.hpp"

namespace fdlab::mc {

void MCConfig::validate(const model::ModelParams& p) const {
    if (n_particles < 1) throw std::invalid_argument("MCConfig: n_particles >= 1");
    if (!(t_end >= 0.0)) throw std::invalid_argument("MCConfig: t_end >= 0");
    if ((int)start.size() != p.d)
        throw std::invalid_argument("MCConfig: start must have d components");
    if (dt > 0.0) {
        double bs = drift_sup(p);
        if (dt * bs > 0.01 + 1e-12)
            throw std::invalid_argument("MCConfig: dt * sup|b| <= 0.01 required");
    }
    for (size_t i = 1; i < bin_edges.size(); ++i)
        if (!(bin_edges[i] > bin_edges[i - 1]))
            throw std::invalid_argument("MCConfig: bin edges must be strictly increasing");
}

double sample_one_sided_stable(double a, RngStream& rng) {
    if (!(a > 0.0) || !(a < 1.0))
        throw std::domain_error("sample_one_sided_stable: a in (0,1) required");
    double u = rng.uniform();
    double e = rng.exponential();
    double su = std::sin(M_PI * u);
    double sa = std::sin(M_PI * a * u);
    double sb = std::sin(M_PI * (1.0 - a) * u);
    return sa / std::pow(su, 1.0 / a) * std::pow(sb / e, (1.0 - a) / a);
}

void sample_stable_increment(double alpha, double dt, int d, RngStream& rng, double* out) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("sample_stable_increment: alpha in (0,1] required");
    double S = std::pow(dt, 2.0 / alpha) * sample_one_sided_stable(0.5 * alpha, rng);
    double coef = std::sqrt(2.0 * S);
    for (int i = 0; i < d; ++i) out[i] = coef * rng.normal();
}

void euler_step(double* x, int d, double dt, RngStream& rng, const model::ModelParams& p,
                double noise_scale) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
    double f = model::drift_factor(std::sqrt(r2), p);
    double dl[8];
    sample_stable_increment(p.alpha, dt, d, rng, dl);
    for (int i = 0; i < d; ++i) x[i] += f * x[i] * dt + noise_scale * dl[i];
}

double drift_sup(const model::ModelParams& p) {
    double sup = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        double r = 2.0 * k / 2000.0;
        sup = std::max(sup, model::drift_factor(r, p) * r);
    }
    return sup;
}

ParticleEnsemble simulate_ensemble(const MCConfig& cfg, const model::ModelParams& p) {
    cfg.validate(p);
    double bs = drift_sup(p);
    double dt = cfg.dt > 0.0 ? cfg.dt : (bs > 1e-12 ? 0.01 / bs : std::max(cfg.t_end, 1e-3));

    long nfull = cfg.t_end > 0.0 ? (long)std::floor(cfg.t_end / dt + 1e-9) : 0;
    double rem = cfg.t_end - nfull * dt;
    if (rem < 1e-12) rem = 0.0;

    ParticleEnsemble ens;
    ens.d = p.d;
    ens.n = cfg.n_particles;
    ens.seed = cfg.seed;
    ens.positions.resize((size_t)ens.n * p.d);

    par::parallel_chunks(ens.n, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> x(p.d);
        for (std::int64_t i = lo; i < hi; ++i) {
            std::copy(cfg.start.begin(), cfg.start.end(), x.begin());
            RngStream rng(cfg.seed, (std::uint64_t)i);
            for (long s = 0; s < nfull; ++s) {
                rng.set_step((std::uint64_t)s);
                euler_step(x.data(), p.d, dt, rng, p);
            }
            if (rem > 0.0) {
                rng.set_step((std::uint64_t)nfull);
                euler_step(x.data(), p.d, rem, rng, p);
            }
            std::copy(x.begin(), x.end(), ens.positions.begin() + (size_t)i * p.d);
        }
    });
    return ens;
}

RadialProfile radial_density(const ParticleEnsemble& ens, std::span<const double> edges) {
    if (edges.size() < 2) throw std::invalid_argument("radial_density: need >= 2 edges");
    for (size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw std::invalid_argument("radial_density: edges must increase");

    size_t nb = edges.size() - 1;
    RadialProfile prof;
    prof.d = ens.d;
    prof.n_total = ens.n;
    prof.count.assign(nb, 0);
    for (std::int64_t i = 0; i < ens.n; ++i) {
        double r2 = 0.0;
        auto x = ens.particle(i);
        for (int ax = 0; ax < ens.d; ++ax) r2 += x[ax] * x[ax];
        double r = std::sqrt(r2);
        auto it = std::upper_bound(edges.begin(), edges.end(), r);
        if (it == edges.begin() || it == edges.end()) continue;
        prof.count[(size_t)(it - edges.begin()) - 1]++;
    }
    double area = num::sphere_area(ens.d);
    for (size_t k = 0; k < nb; ++k) {
        prof.r_lo.push_back(edges[k]);
        prof.r_hi.push_back(edges[k + 1]);
        prof.r_mid.push_back(0.5 * (edges[k] + edges[k + 1]));
        double shell = area / ens.d *
                       (std::pow(edges[k + 1], ens.d) - std::pow(edges[k], ens.d));
        double denom = (double)ens.n * shell;
        prof.density.push_back(prof.count[k] / denom);
        prof.stderr_.push_back(std::sqrt((double)prof.count[k]) / denom);
    }
    return prof;
}

void RadialProfile::write_csv(const std::string& path, const std::string& provenance) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("RadialProfile: cannot open " + path);
    out << provenance;
    out << "r_mid,density,stderr\n";
    char line[160];
    for (size_t i = 0; i < r_mid.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", r_mid[i], density[i],
                      stderr_[i]);
        out << line;
    }
}

ExponentFit fit_vanishing_exponent(const RadialProfile& prof, double r_lo, double r_hi) {
    std::vector<double> lx, ly, ls;
    for (size_t k = 0; k < prof.r_mid.size(); ++k) {
        if (prof.r_mid[k] < r_lo || prof.r_mid[k] > r_hi) continue;
        if (prof.count[k] < 5) continue; // empty / starved bins are excluded
        lx.push_back(std::log(prof.r_mid[k]));
        ly.push_back(std::log(prof.density[k]));
        ls.push_back(prof.stderr_[k] / prof.density[k]);
    }
    if (lx.size() < 4)
        throw std::runtime_error("fit_vanishing_exponent: fewer than 4 populated bins in window");
    num::LineFit f = num::wls_line(lx, ly, ls);
    return {f.slope, f.slope_stderr, (int)lx.size()};
}

} // namespace fdlab::mc
