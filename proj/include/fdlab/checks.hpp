#pragma once

#include <cstdint>
#include <vector>

#include "fdlab/evolve.hpp"
#include "fdlab/grid.hpp"
#include "fdlab/model.hpp"
#include "fdlab/report.hpp"

namespace fdlab::checks {

/// Deterministic smooth test field: a seeded sum of periodic Gaussian bumps
/// (sign-changing unless nonneg).
grid::GridField smooth_test_field(const grid::GridSpec& spec, std::uint64_t seed,
                                  int n_bumps = 6, bool nonneg = false);

/// Smooth compactly supported radial bump (support radius R).
grid::GridField compact_bump(const grid::GridSpec& spec, double R);

/// Vanishing-kernel bound audit.  For each t and each resolvable |y| in
/// [y_lo_frac, y_hi_frac] t^{1/alpha}, the column is evolved at two
/// mollification widths and Richardson-extrapolated; the compensated ratio
///   sup_x column / (t^{-d/alpha} min(1, t^{-beta/alpha} |y|^beta))
/// is fitted against log |y|.  Passes when the fitted growth stays below
/// growth_tol per decade and every ratio is finite.  The report also carries
/// the misfit slope obtained when beta is replaced by beta/2 and by 0
/// (discriminating power), and the list of excluded sub-resolution y.
CheckReport check_kernel_bound(double beta, const evolve::SolverConfig& cfg,
                               const model::ModelParams& p,
                               std::vector<double> t_list = {0.25, 0.5, 1.0},
                               double y_lo_frac = 0.05, double y_hi_frac = 0.5, int n_y = 5,
                               double growth_tol = 0.5, int threads = 1);

/// min_x column >= -1e-4 sup_x column; clipped mass fraction reported.
CheckReport check_kernel_nonnegativity(double t, std::span<const double> y,
                                       const evolve::SolverConfig& cfg,
                                       const model::ModelParams& p);

/// ||grad u(t)||_2 <= e^{t omega3} ||grad f||_2 with omega3 = sigma1 d + sigma2/2.
CheckReport check_claim1_gradient(double t_end, double eps, const evolve::SolverConfig& cfg,
                                  model::ModelParams p, const grid::GridField* f0 = nullptr);

/// sup_{t<=1} ||u_{eps_i} - u_{eps_{i+1}}||_2 strictly decreasing along the
/// eps list (Cauchy behaviour of the regularization).
CheckReport check_claim2_cauchy(std::span<const double> eps_list,
                                const evolve::SolverConfig& cfg, const model::ModelParams& p,
                                const grid::GridField* f0 = nullptr);

/// ||u(t)||_r <= e^{(sigma2/r) t} ||f||_r (5% slack); r = inf means the
/// L^inf contraction for nonnegative data (1% slack).
CheckReport check_lr_contraction(std::span<const double> r_list, double t_end, double eps,
                                 const evolve::SolverConfig& cfg, model::ModelParams p,
                                 const grid::GridField* f0 = nullptr);

/// t^{(d/alpha)(1/r - 1/q)} ||u(t)||_q / ||f||_r bounded with no growth trend
/// as t decreases over the resolvable range t >= (3h)^alpha.
CheckReport check_ultracontractivity(std::span<const double> t_list, double r, double q,
                                     const evolve::SolverConfig& cfg,
                                     const model::ModelParams& p);

/// min over sample fields of Re<Lambda^eps u, u> / ||u||^2_{2d/(d-alpha)} > 0.
CheckReport check_sobolev_ratio(int n_fields, std::uint64_t seed, double eps,
                                const evolve::SolverConfig& cfg, const model::ModelParams& p);

/// Pointwise lower-bound audit of the weighted generator:
///   (Lambda^eps)* psi_s >= -chat s^{-1} psi_s - V_eps,
/// V_eps = P_eps + U_eps + W_eps assembled per the construction (c0 and c are
/// measured minimal constants).  Reports chat(eps), ||V_eps||_1 and the
/// measured c0, c; passes when ||V_eps||_1 strictly decreases along the eps
/// list and chat is stable within stability_tol.
CheckReport check_lemma_V(std::span<const double> eps_list, double s, double beta,
                          const evolve::SolverConfig& cfg, const model::ModelParams& p,
                          double r_exclude = 0.75, double stability_tol = 0.10);

/// Weighted quasi-contraction audit:
///   ||psi_s u(t)||_1 / ||psi_s g||_1 <= (1+tol) e^{(chat/s + sigma2) t}
/// over a set of sign-changing profiles f = psi_s g, t in {s/2, 3s/4, s}.
CheckReport check_B3_weighted(std::span<const double> s_list, int n_funcs, double beta,
                              const evolve::SolverConfig& cfg, model::ModelParams p,
                              double tol = 0.10, int threads = 1);

} // namespace fdlab::checks
