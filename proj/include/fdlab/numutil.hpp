#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fdlab::num {

struct GaussRule {
    std::vector<double> x; // nodes on (-1, 1)
    std::vector<double> w;
};

/// Gauss-Legendre nodes/weights on (-1,1), Newton on the recurrence. Cached.
inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return cache.emplace(n, std::move(r)).first->second;
}

/// Integral of f over [a,b] with an n-point Gauss-Legendre rule.
inline double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& r = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a), sum = 0.0;
    for (int i = 0; i < n; ++i) sum += r.w[i] * f(mid + half * r.x[i]);
    return sum * half;
}

/// Integral over [a,b] on panels geometrically graded toward the endpoint `a`
/// (for integrable endpoint singularities / cusps at a).
inline double gl_integrate_graded(const std::function<double(double)>& f, double a, double b,
                                  int n, int levels) {
    if (b <= a) return 0.0;
    double sum = 0.0;
    double hi = b;
    double len = b - a;
    for (int k = 0; k < levels; ++k) {
        double lo = a + len * std::pow(0.5, k + 1);
        if (k == levels - 1) lo = a;
        sum += gl_integrate(f, lo, hi, n);
        hi = lo;
    }
    return sum;
}

/// Brent root finder on [a,b]; f(a) f(b) must have opposite signs.
inline double brent(const std::function<double(double)>& func, double x1, double x2,
                    double xtol, double ftol = 0.0, int itmax = 200) {
    double a = x1, b = x2, c = x2, d = 0.0, e = 0.0;
    double fa = func(a), fb = func(b), fc = fb;
    if ((fa > 0.0 && fb > 0.0) || (fa < 0.0 && fb < 0.0))
        throw std::runtime_error("brent: root must be bracketed");
    for (int iter = 0; iter < itmax; ++iter) {
        if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= ftol) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                double rr = fb / fc;
                p = s * (2.0 * xm * q * (q - rr) - (b - a) * (rr - 1.0));
                q = (q - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            double min2 = std::abs(e * q);
            if (2.0 * p < (min1 < min2 ? min1 : min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::abs(d) > tol1)
            b += d;
        else
            b += (xm > 0.0 ? std::abs(tol1) : -std::abs(tol1));
        fb = func(b);
    }
    return b;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

/// Weighted least squares line y = a + m x; weights are 1/sigma_i^2.
inline LineFit wls_line(std::span<const double> x, std::span<const double> y,
                        std::span<const double> sigma = {}) {
    size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("wls_line: need >= 2 points");
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double w = 1.0;
        if (!sigma.empty()) {
            if (!(sigma[i] > 0)) throw std::invalid_argument("wls_line: sigma must be > 0");
            w = 1.0 / (sigma[i] * sigma[i]);
        }
        S += w;
        Sx += w * x[i];
        Sy += w * y[i];
        Sxx += w * x[i] * x[i];
        Sxy += w * x[i] * y[i];
    }
    double den = S * Sxx - Sx * Sx;
    LineFit f;
    f.slope = (S * Sxy - Sx * Sy) / den;
    f.intercept = (Sxx * Sy - Sx * Sxy) / den;
    f.slope_stderr = std::sqrt(S / den);
    if (sigma.empty()) {
        // unweighted: scale by residual variance
        double ss = 0;
        for (size_t i = 0; i < n; ++i) {
            double r = y[i] - f.intercept - f.slope * x[i];
            ss += r * r;
        }
        double s2 = n > 2 ? ss / (n - 2) : 0.0;
        f.slope_stderr = std::sqrt(s2 * S / den);
    }
    return f;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        v[i] = std::exp(llo + (lhi - llo) * (n == 1 ? 0.0 : (double)i / (n - 1)));
    return v;
}

/// Surface area of the unit sphere S^{d-1}.
double sphere_area(int d);

} // namespace fdlab::num
