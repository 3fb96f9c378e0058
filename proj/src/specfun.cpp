#include "fdlab/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdlab::specfun {

namespace {

// Lanczos approximation, g = 7, 9 terms.  Relative error of the reconstructed
// Gamma stays below 1e-13 on [1e-3, 50] (validated against the recurrence and
// an independent Stirling evaluation in the tests).
const double kLanczos[9] = {0.99999999999980993,     676.5203681218851,
                            -1259.1392167224028,     771.32342877765313,
                            -176.61502916214059,     12.507343278686905,
                            -0.13857109526572012,    9.9843695780195716e-6,
                            1.5056327351493116e-7};

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("log_gamma: argument must be positive and finite, got " +
                                std::to_string(x));
    double z = x - 1.0;
    double sum = kLanczos[0];
    for (int k = 1; k < 9; ++k) sum += kLanczos[k] / (z + k);
    double t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double log_gamma_weight(double s, int d) {
    if (d < 1) throw std::domain_error("log_gamma_weight: d must be a positive integer");
    if (!(s > 0.0) || !(s < (double)d) || !std::isfinite(s))
        throw std::domain_error("log_gamma_weight: need 0 < s < d, got s=" + std::to_string(s) +
                                ", d=" + std::to_string(d));
    return s * std::log(2.0) + 0.5 * d * std::log(M_PI) + log_gamma(0.5 * s) -
           log_gamma(0.5 * (d - s));
}

double gamma_weight(double s, int d) { return std::exp(log_gamma_weight(s, d)); }

} // namespace fdlab::specfun
