#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fdlab/model.hpp"
#include "fdlab/philox.hpp"

namespace fdlab::mc {

struct MCConfig {
    std::int64_t n_particles = 100000;
    double dt = 0.0; // 0 -> auto: 0.01 / max(sup|b|, 1)
    double t_end = 0.5;
    std::uint64_t seed = 42;
    std::vector<double> start;     // x0 (size d)
    std::vector<double> bin_edges; // radial histogram edges, strictly increasing
    int threads = 1;

    void validate(const model::ModelParams& p) const;
};

struct ParticleEnsemble {
    int d = 3;
    std::int64_t n = 0;
    std::vector<double> positions; // n*d, row-major
    std::uint64_t seed = 0;

    std::span<const double> particle(std::int64_t i) const {
        return {positions.data() + i * d, (size_t)d};
    }
};

/// One-sided a-stable S with E[e^{-lambda S}] = e^{-lambda^a}, 0 < a < 1
/// (Kanter's representation; two uniforms, no rejection).
double sample_one_sided_stable(double a, RngStream& rng);

/// Isotropic alpha-stable increment with E[e^{i xi . dL}] = e^{-dt |xi|^alpha},
/// built by subordinating a Gaussian: dL = sqrt(2 S) G, S = dt^{2/alpha} S_{alpha/2}.
void sample_stable_increment(double alpha, double dt, int d, RngStream& rng, double* out);

/// Euler-Maruyama step x + b(x) dt + dL; noise_scale is a test hook (0
/// suppresses the noise, leaving the drift ODE).
void euler_step(double* x, int d, double dt, RngStream& rng, const model::ModelParams& p,
                double noise_scale = 1.0);

/// sup |b| over radii (for the dt constraint).
double drift_sup(const model::ModelParams& p);

/// N independent trajectories to t_end; particles are partitioned across
/// workers, every particle owns a counter-based stream derived from (seed,
/// particle index), so results are bit-identical for any worker count.
ParticleEnsemble simulate_ensemble(const MCConfig& cfg, const model::ModelParams& p);

struct RadialProfile {
    std::vector<double> r_lo, r_hi, r_mid;
    std::vector<double> density, stderr_;
    std::vector<std::int64_t> count;
    std::int64_t n_total = 0;
    int d = 3;

    void write_csv(const std::string& path, const std::string& provenance) const;
};

/// Radial density of |X_t| around the origin: density_k = count_k / (N *
/// shellvol_k) with Poisson standard errors; empty bins carry density 0 and
/// are excluded from fits.
RadialProfile radial_density(const ParticleEnsemble& ens, std::span<const double> edges);

struct ExponentFit {
    double beta_hat = 0.0;
    double stderr_ = 0.0;
    int bins_used = 0;
};

/// Weighted least squares of log density vs log r over [r_lo, r_hi]; needs at
/// least 4 populated bins inside the window.
ExponentFit fit_vanishing_exponent(const RadialProfile& prof, double r_lo, double r_hi);

} // namespace fdlab::mc
