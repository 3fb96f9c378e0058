#pragma once

#include <memory>
#include <vector>

#include "fdlab/grid.hpp"

namespace fdlab::fracops {

/// FFT-backed Fourier-multiplier machinery on a periodic grid.  One instance
/// owns FFTW plans and scratch buffers for a fixed GridSpec; instances are not
/// thread-safe, but distinct instances may run concurrently (plan creation is
/// serialized internally).
class SpectralOps {
  public:
    explicit SpectralOps(const grid::GridSpec& spec);
    ~SpectralOps();
    SpectralOps(const SpectralOps&) = delete;
    SpectralOps& operator=(const SpectralOps&) = delete;

    const grid::GridSpec& spec() const;

    /// (|xi|^alpha + eps |xi|^2) multiplier; exact for band-limited fields.
    grid::GridField apply_symbol(const grid::GridField& f, double alpha, double eps_visc);
    /// exp(-dt (|xi|^alpha + eps |xi|^2)) multiplier (the diffusion sub-step).
    grid::GridField apply_exp_symbol(const grid::GridField& f, double alpha, double eps_visc,
                                     double dt);
    /// Spectral gradient, one field per axis; with dealias the 2/3-rule mask is
    /// applied in spectral space before transforming back.
    std::vector<grid::GridField> gradient(const grid::GridField& f, bool dealias = true);
    /// Spectral divergence of a vector field (same dealias convention).
    grid::GridField divergence(const std::vector<grid::GridField>& f, bool dealias = true);
    /// 2/3-rule projection of a single field.
    grid::GridField dealias(const grid::GridField& f);

    /// <apply_symbol(u), u> assembled in spectral space (Parseval form).
    double symbol_quadratic_form(const grid::GridField& u, double alpha, double eps_visc);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace fdlab::fracops
