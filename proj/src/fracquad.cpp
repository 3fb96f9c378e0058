#include "fdlab/fracquad.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fdlab/numutil.hpp"
#include "fdlab/specfun.hpp"

namespace fdlab::fracops {

namespace {

// Mean of f(|x + rho w|) over w in S^{d-1}, times |S^{d-1}|.  With u = cos(angle),
//   int_S g dw = omega_{d-2} int_{-1}^{1} g(u) (1-u^2)^{(d-3)/2} du,
// and |x + rho w| = sqrt(r^2 + rho^2 + 2 r rho u).  The argument reaches its
// minimum |r - rho| at u = -1, where f may have a cusp (e.g. |.|^beta through
// the origin when rho is near r), so the panels are graded toward u = -1.
double angular_integral(const std::function<double(double)>& f, double r, double rho,
                        int d, int n_ang, int levels) {
    const double pref = d == 3 ? 2.0 * M_PI : num::sphere_area(d - 1);
    auto g = [&](double u) {
        double w2 = r * r + rho * rho + 2.0 * r * rho * u;
        double w = w2 > 0.0 ? std::sqrt(w2) : 0.0;
        double val = f(w);
        if (d != 3) val *= std::pow(1.0 - u * u, 0.5 * (d - 3));
        return val;
    };
    return pref * num::gl_integrate_graded(g, -1.0, 1.0, n_ang, levels);
}

// Estimated power-law exponent of f at infinity, or 0 when f is numerically
// zero out there (compact support / fast decay).
double tail_exponent(const std::function<double(double)>& f, double R, double& cR) {
    double f1 = f(R), f2 = f(100.0 * R);
    cR = f1;
    if (std::abs(f1) < 1e-300 && std::abs(f2) < 1e-300) return 0.0;
    if (std::abs(f1) < 1e-300 || std::abs(f2) < 1e-300 || f1 * f2 < 0.0) return 0.0;
    return std::log(std::abs(f2 / f1)) / std::log(100.0);
}

} // namespace

double frac_lap_constant(int d, double alpha) {
    // |Gamma(-alpha/2)| = (2/alpha) Gamma(1 - alpha/2)
    double lg = alpha * std::log(2.0) + specfun::log_gamma(0.5 * (d + alpha)) -
                0.5 * d * std::log(M_PI) - std::log(2.0 / alpha) -
                specfun::log_gamma(1.0 - 0.5 * alpha);
    return std::exp(lg);
}

double frac_laplacian_radial_point(const std::function<double(double)>& f, double r,
                                   double alpha, int d, const QuadOptions& opt) {
    if (!(r > 0.0)) throw std::domain_error("frac_laplacian_radial_point: r > 0 required");
    if (!(alpha > 0.0) || alpha >= 2.0)
        throw std::domain_error("frac_laplacian_radial_point: alpha in (0,2) required");

    const double fr = f(r);
    const double area = num::sphere_area(d);
    const double delta = std::min(opt.delta_cap, 0.5 * r);
    const double R = std::max(opt.r_tail, 100.0 * r);

    // Tail behaviour first: reject non-convergent growth.
    double cR = 0.0;
    double p = tail_exponent(f, R, cR);
    if (p >= alpha - 1e-6)
        throw std::domain_error("frac_laplacian_radial_point: tail growth >= alpha");

    // Inner |z| < delta: spherical mean of f is f(r) + rho^2 Lap f(r) / (2d) + O(rho^4).
    double hfd = std::min(opt.fd_step_rel * std::max(r, 0.1), 0.45 * r);
    double fpp = (f(r + hfd) - 2.0 * fr + f(r - hfd)) / (hfd * hfd);
    double fp = (f(r + hfd) - f(r - hfd)) / (2.0 * hfd);
    double lap = fpp + (d - 1) * fp / r;
    double inner = area * lap / (2.0 * d) * std::pow(delta, 2.0 - alpha) / (2.0 - alpha);

    // Outer [delta, R]: rho panels, geometric away from delta and graded into
    // the kink at rho = r from both sides.
    std::vector<double> bp;
    bp.push_back(delta);
    double lo_r = 0.5 * r, hi_r = 2.0 * r;
    for (double x = delta * 2.0; x < lo_r; x *= 2.0) bp.push_back(x);
    for (int j = 0; j <= opt.levels_near_r; ++j)
        bp.push_back(r - (r - lo_r) * std::pow(0.5, j));
    bp.push_back(r);
    for (int j = opt.levels_near_r; j >= 0; --j)
        bp.push_back(r + (hi_r - r) * std::pow(0.5, j));
    for (double x = hi_r * 2.0; x < R; x *= 2.0) bp.push_back(x);
    bp.push_back(R);

    auto integrand = [&](double rho) {
        double am = angular_integral(f, r, rho, d, opt.n_ang, opt.ang_levels);
        return std::pow(rho, -1.0 - alpha) * (am - area * fr);
    };
    double outer = 0.0;
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
        if (!(bp[i + 1] > bp[i])) continue;
        outer += num::gl_integrate(integrand, bp[i], bp[i + 1], opt.n_rad);
    }

    // Analytic tail beyond R: f(rho) ~ cR (rho/R)^p, angular mean -> f(rho) up
    // to O((r/R)^2).
    double tail = area * (cR * std::pow(R, -alpha) / (alpha - p) -
                          fr * std::pow(R, -alpha) / alpha);

    return -frac_lap_constant(d, alpha) * (inner + outer + tail);
}

double riesz_potential_radial(const std::function<double(double)>& f, double nu, double r,
                              int d, const QuadOptions& opt) {
    if (!(nu > 0.0) || !(nu < d))
        throw std::domain_error("riesz_potential_radial: nu in (0, d) required");
    if (!(r > 0.0)) throw std::domain_error("riesz_potential_radial: r > 0 required");

    const double pref = d == 3 ? 2.0 * M_PI : num::sphere_area(d - 1);
    // Angular kernel integral; the |x - y|^{nu-d} singularity sits at u = +1.
    auto kern = [&](double rho) {
        auto g = [&](double u) {
            double w2 = r * r + rho * rho - 2.0 * r * rho * u;
            double w = std::sqrt(std::max(w2, 1e-300));
            double val = std::pow(w, nu - d);
            if (d != 3) val *= std::pow(1.0 - u * u, 0.5 * (d - 3));
            return val;
        };
        // graded toward u = +1 (map u -> -u so the cusp is the lower endpoint)
        auto gm = [&](double u) { return g(-u); };
        return pref * num::gl_integrate_graded(gm, -1.0, 1.0, opt.n_ang, opt.ang_levels + 16);
    };

    auto integrand = [&](double rho) { return f(rho) * std::pow(rho, d - 1.0) * kern(rho); };

    // rho panels: graded into 0 (f may be singular), graded into rho = r
    // (kernel cusp) from both sides, geometric outward until the
    // contribution dies.
    double acc = 0.0;
    acc += num::gl_integrate_graded(integrand, 0.0, 0.5 * r, opt.n_rad, 40);
    acc += num::gl_integrate_graded([&](double t) { return integrand(r - t); }, 0.0, 0.5 * r,
                                    opt.n_rad, opt.levels_near_r);
    acc += num::gl_integrate_graded([&](double t) { return integrand(r + t); }, 0.0, r,
                                    opt.n_rad, opt.levels_near_r);
    double lo = 2.0 * r;
    int dead = 0;
    while (lo < 1e8 && dead < 3) {
        double hi = lo * 2.0;
        double c = num::gl_integrate(integrand, lo, hi, opt.n_rad);
        acc += c;
        if (std::abs(c) < 1e-14 * (std::abs(acc) + 1e-300)) ++dead;
        else dead = 0;
        lo = hi;
    }
    return acc / specfun::gamma_weight(nu, d);
}

double lyapunov_residual(double beta, double kappa, double r, const model::ModelParams& p,
                         const QuadOptions& opt) {
    if (!(beta > 0.0) || !(beta < p.alpha))
        throw std::domain_error("lyapunov_residual: beta in (0, alpha) required");
    if (!(r > 0.0)) throw std::domain_error("lyapunov_residual: r > 0 required");
    auto f = [beta](double w) { return std::pow(w, beta); };
    double fl = frac_laplacian_radial_point(f, r, p.alpha, p.d, opt);
    double div_term = kappa * (p.d + beta - p.alpha) * std::pow(r, beta - p.alpha);
    return fl + div_term;
}

} // namespace fdlab::fracops
