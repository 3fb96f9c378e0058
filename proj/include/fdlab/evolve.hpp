#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fdlab/grid.hpp"
#include "fdlab/model.hpp"
#include "fdlab/spectral.hpp"

namespace fdlab::evolve {

struct SolverConfig {
    grid::GridSpec grid;
    double eps_visc = 0.0; // epsilon of the regularized operator (viscosity + drift)
    double dt = 0.0;       // 0 -> auto from the advective CFL
    double t_end = 1.0;
    enum class Splitting { Lie, Strang } splitting = Splitting::Strang;
    double delta_width = 0.0; // Gaussian sigma for point masses; 0 -> 2.5 h
    double cfl = 0.5;

    double effective_delta_width() const {
        return delta_width > 0.0 ? delta_width : 2.5 * grid.h();
    }
};

/// Norm time series recorded along a run (L1, L2, Linf, ||grad u||_2).
struct NormSeries {
    std::vector<double> t, l1, l2, linf, gradl2;
    void write_csv(const std::string& path, const std::string& provenance) const;
};

struct ColumnStats {
    double min_value = 0.0;
    double sup = 0.0;
    double clipped_mass = 0.0; // |negative part|, h^d-weighted
    double total_mass = 0.0;
};

/// Splitting integrator for d/dt u = -Lambda^eps u (forward) and
/// d/dt g = -(Lambda^eps)* g (adjoint) on the periodic grid.  The diffusion
/// sub-step is the exact integrating factor of |xi|^alpha + eps |xi|^2; the
/// advection sub-step is RK2 with 2/3-rule dealiasing on products.
class Evolver {
  public:
    Evolver(const SolverConfig& cfg, const model::ModelParams& params);

    const SolverConfig& config() const { return cfg_; }
    double dt() const { return dt_; }
    double drift_sup() const { return bsup_; }

    /// One forward step of size step_dt (defaults to dt()).
    void step_forward(grid::GridField& u, double step_dt = 0.0);
    void step_adjoint(grid::GridField& g, double step_dt = 0.0);

    grid::GridField evolve_forward(const grid::GridField& f, double t,
                                   NormSeries* series = nullptr);
    grid::GridField evolve_adjoint(const grid::GridField& g, double t,
                                   NormSeries* series = nullptr);

    /// Gaussian bump of width sigma (periodic min-image), unit grid mass.
    grid::GridField mollified_delta(std::span<const double> center, double sigma) const;

    /// Column x -> e^{-t Lambda}(x, y): the semigroup applied to an
    /// (approximate) point mass at y.  Returns the field clipped at zero;
    /// stats carries the raw min, sup and clipped mass.
    grid::GridField heat_kernel_column(std::span<const double> y, double t,
                                       ColumnStats* stats = nullptr,
                                       double width_override = 0.0);

    /// phi_{n,eps} = 1/n + e^{-(Lambda^eps)*/n} psi_s on the grid.
    /// min_out receives the minimum of the result; throws if it is <= 0.
    grid::GridField phi_weight(int n_reg, double s, double beta, double* min_out = nullptr);

    /// psi_s sampled on the grid.
    grid::GridField sample_psi(double s, double beta) const;

    fracops::SpectralOps& ops() { return ops_; }
    const model::ModelParams& params() const { return params_; }

  private:
    grid::GridField advection_rhs_forward(const grid::GridField& u);
    grid::GridField advection_rhs_adjoint(const grid::GridField& g);
    void advect_rk2(grid::GridField& u, double step_dt, bool adjoint);
    void check_nan(const grid::GridField& u) const;

    SolverConfig cfg_;
    model::ModelParams params_;
    fracops::SpectralOps ops_;
    std::vector<grid::GridField> b_; // drift components sampled on the grid
    double bsup_ = 0.0;
    double dt_ = 0.0;
};

} // namespace fdlab::evolve
