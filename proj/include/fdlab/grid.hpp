#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace fdlab::grid {

/// Periodic uniform grid on [-L, L)^d with n points per axis (n even, >= 16).
/// Spacing h = 2L/n; frequency grid xi = (pi/L) {-n/2, ..., n/2-1}^d.
struct GridSpec {
    int d = 3;
    int n = 64;
    double L = 8.0;

    double h() const { return 2.0 * L / n; }
    std::int64_t size() const {
        std::int64_t s = 1;
        for (int i = 0; i < d; ++i) s *= n;
        return s;
    }
    double coord(int k) const { return -L + h() * k; }
    /// Signed integer frequency index for axis position k.
    int freq_index(int k) const { return k < n / 2 ? k : k - n; }
    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

struct GridField {
    GridSpec spec;
    std::vector<double> v;

    GridField() = default;
    explicit GridField(const GridSpec& s) : spec(s), v(s.size(), 0.0) {}

    double l1() const;
    double l2() const;
    double linf() const;
    double lr(double r) const; // L^r norm, h^d-weighted
    double min() const;
    double max() const;
    double sum() const;                    // plain sum of entries
    double mass() const;                   // h^d * sum
    double inner(const GridField& g) const; // h^d-weighted inner product
};

/// Iterates k = (k_0..k_{d-1}) row-major; idx is the flat index.
/// Calls fn(idx, k).
template <typename Fn>
void for_each_index(const GridSpec& s, Fn&& fn) {
    std::vector<int> k(s.d, 0);
    std::int64_t total = s.size();
    for (std::int64_t idx = 0; idx < total; ++idx) {
        fn(idx, k);
        for (int ax = s.d - 1; ax >= 0; --ax) {
            if (++k[ax] < s.n) break;
            k[ax] = 0;
        }
    }
}

/// Samples a radial profile f(|x|) onto the grid.
template <typename Fn>
GridField sample_radial(const GridSpec& s, Fn&& f) {
    GridField g(s);
    for_each_index(s, [&](std::int64_t idx, const std::vector<int>& k) {
        double r2 = 0.0;
        for (int ax = 0; ax < s.d; ++ax) {
            double x = s.coord(k[ax]);
            r2 += x * x;
        }
        g.v[idx] = f(std::sqrt(r2));
    });
    return g;
}

/// Flat binary snapshot: one text preamble line "d=<d> n=<n> L=<L>\n"
/// followed by row-major 8-byte doubles.
void write_field(const GridField& f, const std::string& path);
GridField read_field(const std::string& path);

} // namespace fdlab::grid
