#pragma once

namespace fdlab::specfun {

/// ln Gamma(x) for x > 0, Lanczos-type (Spouge) approximation.
/// Relative error of exp(log_gamma(x)) is below 1e-12 on [1e-3, 50].
/// Throws std::domain_error for non-positive or non-finite x.
double log_gamma(double x);

/// ln of the Riesz normalization gamma(s) = 2^s pi^{d/2} Gamma(s/2) / Gamma((d-s)/2),
/// valid for 0 < s < d. Evaluated in log space; the ratio spans many orders of
/// magnitude as s approaches d.
double log_gamma_weight(double s, int d);

/// gamma(s) itself; strictly positive on (0, d).
double gamma_weight(double s, int d);

} // namespace fdlab::specfun
