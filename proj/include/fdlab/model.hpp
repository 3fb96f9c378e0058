#pragma once

#include <span>
#include <vector>

#include "fdlab/report.hpp"

namespace fdlab::model {

/// Problem definition.  The drift is b(x) = kappa chi(|x|) |x|^{-alpha} x with
/// a fixed C^inf cutoff chi == 1 on [0,1], == 0 on [2,inf).  sigma1/sigma2 are
/// the measured uniform bounds on |grad_i b_eps| and |div b_eps| over
/// {|x| >= 1} and the epsilon list; they stay negative until sigma_bounds()
/// has filled them in.
struct ModelParams {
    int d = 3;
    double alpha = 0.5;
    double kappa = 1.0;
    double cutoff_inner = 1.0; // fixed by construction
    double cutoff_outer = 2.0;
    double sigma1 = -1.0;
    double sigma2 = -1.0;

    bool has_sigma_bounds() const { return sigma1 >= 0.0 && sigma2 >= 0.0; }
    void validate() const; // d >= 3, 0 < alpha <= 1, kappa >= 0
};

/// Root of the exponent equation together with the achieved residual
/// |kappa_of_beta(beta) - kappa|.
struct BetaSolution {
    double beta = 0.0;
    double residual = 0.0;
};

/// Data of the desingularizing weight family at time scale s:
/// theta = (2-alpha)d / ((2-alpha)d + 8 beta), q' = 2/(1-theta), j' = d/alpha,
/// Omega^s = ball of radius s^{1/alpha}.
struct WeightSpec {
    double s = 1.0;
    double beta = 0.0;
    double theta = 0.0;
    double q_prime = 0.0;
    double j_prime = 0.0;
    double omega_ball_radius = 0.0;
    int d = 3;
    double alpha = 0.5;

    static WeightSpec make(double s, double beta, const ModelParams& p);
};

// --- smooth cutoff profile ---------------------------------------------------

/// chi(r): 1 on [0,1], exp-type transition on (1,2), 0 on [2,inf).
double cutoff_chi(double r);
double cutoff_chi_prime(double r);

// --- drift and its regularization -------------------------------------------

/// Radial factor F(r) with b(x) = F(|x|) x;  F(r) = kappa chi(r) r^{-alpha}.
/// Continuous extension F(0) understood through |b(x)| = kappa chi r^{1-alpha} -> 0.
double drift_factor(double r, const ModelParams& p);
/// F_eps(r) = kappa chi(r) (r^2 + eps)^{-alpha/2}; eps = 0 allowed (gives drift_factor).
double drift_eps_factor(double r, double eps, const ModelParams& p);

/// b(x); writes p.d components into out.
void drift(std::span<const double> x, std::span<double> out, const ModelParams& p);
/// b_eps(x); requires eps > 0.
void drift_eps(std::span<const double> x, double eps, std::span<double> out,
               const ModelParams& p);
/// div b_eps(x) = kappa chi (d |x|_eps^{-alpha} - alpha |x|_eps^{-alpha-2}|x|^2)
///              + kappa chi' |x|_eps^{-alpha} |x|;   requires eps > 0.
double div_drift_eps(std::span<const double> x, double eps, const ModelParams& p);
/// Radial form of the divergence (r = |x|); eps = 0 allowed away from r = 0.
double div_drift_eps_radial(double r, double eps, const ModelParams& p);

/// Measures sup |grad_i b_eps| and sup |div b_eps| over a dense radial grid on
/// [1, 2] and the given eps list, pads by 10%, and stores into p.
/// Returns {sigma1, sigma2}.
std::pair<double, double> sigma_bounds(ModelParams& p, std::span<const double> eps_list,
                                       int n_radial = 4096);

// --- the exponent equation ----------------------------------------------------

/// kappa(beta) = beta (d+beta-2)/(d+beta-alpha) gamma(d+beta-2)/gamma(d+beta-alpha),
/// strictly increasing on (0, alpha), -> 0 at 0+, -> +inf at alpha-.
double kappa_of_beta(double beta, const ModelParams& p);

/// Bracketed root of kappa_of_beta(beta) = kappa on (0, alpha); the solve runs
/// on log kappa to keep the pole at beta = alpha- tame.  Residual target
/// 1e-12 max(1, kappa) (attainable in double precision for kappa up to ~1e4;
/// beyond that the residual is limited by |kappa'(beta)| ulp(beta) and the
/// returned beta is still correct to 1 ulp).
BetaSolution beta_of_kappa(double kappa, const ModelParams& p);

// --- desingularizing weights ---------------------------------------------------

/// eta(tau): tau^beta on [0,1), beta tau (2 - tau/2) + 1 - 3 beta/2 on [1,2),
/// 1 + beta/2 on [2,inf).  C^1 at the knots.
double weight_eta(double tau, double beta);
double weight_eta_prime(double tau, double beta);
/// Second derivative (defined away from the knots; left limit used at them).
double weight_eta_second(double tau, double beta);

/// psi_t(y) = eta(t^{-1/alpha} |y|); requires t > 0.
double weight_psi(double t, double radius_y, double beta, const ModelParams& p);

/// (B22)/(B23) audit: reports c2 = sup_{|x| >= s^{1/alpha}} psi_s^{-theta} (exactly 1)
/// and the log-log fitted s-exponent of ||psi_s^{-theta}||_{L^{q'}(Omega^s)} over a
/// log grid of s, which the closed-form radial integral pins at j'/q'.
CheckReport check_B22_B23(const WeightSpec& spec, const ModelParams& p,
                          std::span<const double> s_list = {});

} // namespace fdlab::model
