#include "fdlab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fdlab/numutil.hpp"
#include "fdlab/specfun.hpp"

namespace fdlab::num {
double sphere_area(int d) {
    return std::exp(std::log(2.0) + 0.5 * d * std::log(M_PI) -
                    fdlab::specfun::log_gamma(0.5 * d));
}
} // namespace fdlab::num

namespace fdlab::grid {

void GridSpec::validate() const {
    if (d < 1 || d > 4) throw std::domain_error("GridSpec: d in [1,4] supported");
    if (n < 16 || n % 2 != 0) throw std::domain_error("GridSpec: n even and >= 16 required");
    if (!(L > 0.0)) throw std::domain_error("GridSpec: L > 0 required");
}

double GridField::l1() const {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s * std::pow(spec.h(), spec.d);
}

double GridField::l2() const {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s * std::pow(spec.h(), spec.d));
}

double GridField::linf() const {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double GridField::lr(double r) const {
    if (std::isinf(r)) return linf();
    if (r == 1.0) return l1();
    if (r == 2.0) return l2();
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), r);
    return std::pow(s * std::pow(spec.h(), spec.d), 1.0 / r);
}

double GridField::min() const {
    double s = v.empty() ? 0.0 : v[0];
    for (double x : v) s = std::min(s, x);
    return s;
}

double GridField::max() const {
    double s = v.empty() ? 0.0 : v[0];
    for (double x : v) s = std::max(s, x);
    return s;
}

double GridField::sum() const {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double GridField::mass() const { return sum() * std::pow(spec.h(), spec.d); }

double GridField::inner(const GridField& g) const {
    if (!(spec == g.spec)) throw std::invalid_argument("inner: grid mismatch");
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += v[i] * g.v[i];
    return s * std::pow(spec.h(), spec.d);
}

void write_field(const GridField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    char header[128];
    std::snprintf(header, sizeof(header), "d=%d n=%d L=%.17g\n", f.spec.d, f.spec.n, f.spec.L);
    out << header;
    out.write(reinterpret_cast<const char*>(f.v.data()),
              static_cast<std::streamsize>(f.v.size() * sizeof(double)));
}

GridField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    std::string header;
    std::getline(in, header);
    GridSpec s;
    if (std::sscanf(header.c_str(), "d=%d n=%d L=%lg", &s.d, &s.n, &s.L) != 3)
        throw std::runtime_error("read_field: bad header in " + path);
    s.validate();
    GridField f(s);
    in.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_field: truncated data in " + path);
    return f;
}

} // namespace fdlab::grid
