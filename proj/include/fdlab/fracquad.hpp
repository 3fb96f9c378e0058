#pragma once

#include <functional>

#include "fdlab/model.hpp"

namespace fdlab::fracops {

struct QuadOptions {
    int n_ang = 24;          // GL nodes per angular panel
    int ang_levels = 24;     // graded angular panels toward the cusp endpoint
    int n_rad = 16;          // GL nodes per radial panel
    int levels_near_r = 36;  // graded radial panels approaching rho = r
    double delta_cap = 0.02; // inner cutoff delta = min(delta_cap, r/2)
    double r_tail = 1e6;     // truncation radius; analytic power tail beyond
    double fd_step_rel = 1e-4;

    QuadOptions refined(double factor) const {
        QuadOptions o = *this;
        o.n_ang = (int)(o.n_ang * factor);
        o.n_rad = (int)(o.n_rad * factor);
        o.ang_levels += 8;
        o.levels_near_r += 8;
        return o;
    }
};

/// Normalization C(d,alpha) = 2^alpha Gamma((d+alpha)/2) / (pi^{d/2} |Gamma(-alpha/2)|).
double frac_lap_constant(int d, double alpha);

/// Pointwise fractional Laplacian of a radial function at radius r > 0:
///   -(1/2) C(d,alpha) int (f(x+z)+f(x-z)-2f(x)) |z|^{-d-alpha} dz,
/// radial-angular quadrature, second-order Taylor correction inside |z| < delta,
/// analytic power-law tail beyond r_tail.  Throws std::domain_error if the tail
/// growth of f is >= alpha (divergent integral).
double frac_laplacian_radial_point(const std::function<double(double)>& f, double r,
                                   double alpha, int d, const QuadOptions& opt = {});

/// Riesz potential I_nu f(x) = gamma(nu)^{-1} int f(y) |x-y|^{nu-d} dy of a radial f
/// at radius r, 0 < nu < d.  f is integrated as given (compactly supported or
/// decaying input is the caller's responsibility).
double riesz_potential_radial(const std::function<double(double)>& f, double nu, double r,
                              int d, const QuadOptions& opt = {});

/// Residual of the Lyapunov identity at radius r:
///   frac_laplacian(|.|^beta)(r) + kappa (d+beta-alpha) r^{beta-alpha};
/// near zero iff (beta, kappa) satisfy the exponent equation.
double lyapunov_residual(double beta, double kappa, double r, const model::ModelParams& p,
                         const QuadOptions& opt = {});

} // namespace fdlab::fracops
