#include "fdlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace fdlab::fracops {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct SpectralOps::Impl {
    grid::GridSpec spec;
    std::int64_t nreal = 0;
    std::int64_t ncplx = 0;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_complex* csave = nullptr; // saved spectrum for multi-output ops
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit Impl(const grid::GridSpec& s) : spec(s) {
        spec.validate();
        nreal = spec.size();
        ncplx = nreal / spec.n * (spec.n / 2 + 1);
        rbuf = fftw_alloc_real(nreal);
        cbuf = fftw_alloc_complex(ncplx);
        csave = fftw_alloc_complex(ncplx);
        std::vector<int> dims(spec.d, spec.n);
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd = fftw_plan_dft_r2c(spec.d, dims.data(), rbuf, cbuf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r(spec.d, dims.data(), cbuf, rbuf, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("SpectralOps: FFTW plan creation failed");
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(rbuf);
        fftw_free(cbuf);
        fftw_free(csave);
    }

    void forward(const grid::GridField& f) {
        std::copy(f.v.begin(), f.v.end(), rbuf);
        fftw_execute(fwd);
    }

    grid::GridField backward() {
        fftw_execute(bwd);
        grid::GridField out(spec);
        double scale = 1.0 / (double)nreal;
        for (std::int64_t i = 0; i < nreal; ++i) out.v[i] = rbuf[i] * scale;
        return out;
    }

    // Visits every retained complex coefficient; fn(flat, m) with m the signed
    // integer frequency per axis (last axis stored half-spectrum, m >= 0).
    template <typename Fn>
    void for_each_mode(Fn&& fn) {
        int d = spec.d, n = spec.n, nc = n / 2 + 1;
        std::vector<int> k(d, 0);
        std::vector<int> m(d, 0);
        for (std::int64_t idx = 0; idx < ncplx; ++idx) {
            for (int ax = 0; ax < d - 1; ++ax) m[ax] = spec.freq_index(k[ax]);
            m[d - 1] = k[d - 1];
            fn(idx, m);
            for (int ax = d - 1; ax >= 0; --ax) {
                int lim = ax == d - 1 ? nc : n;
                if (++k[ax] < lim) break;
                k[ax] = 0;
            }
        }
    }

    double xi1() const { return M_PI / spec.L; }

    bool masked(const std::vector<int>& m) const {
        int cut = spec.n / 3;
        for (int ax = 0; ax < spec.d; ++ax)
            if (std::abs(m[ax]) > cut) return true;
        return false;
    }
};

SpectralOps::SpectralOps(const grid::GridSpec& spec) : impl_(std::make_unique<Impl>(spec)) {}
SpectralOps::~SpectralOps() = default;
const grid::GridSpec& SpectralOps::spec() const { return impl_->spec; }

grid::GridField SpectralOps::apply_symbol(const grid::GridField& f, double alpha,
                                          double eps_visc) {
    impl_->forward(f);
    double s1 = impl_->xi1();
    impl_->for_each_mode([&](std::int64_t idx, const std::vector<int>& m) {
        double xi2 = 0.0;
        for (int ax = 0; ax < impl_->spec.d; ++ax) {
            double x = s1 * m[ax];
            xi2 += x * x;
        }
        double mult = (xi2 > 0.0 ? std::pow(xi2, 0.5 * alpha) : 0.0) + eps_visc * xi2;
        impl_->cbuf[idx][0] *= mult;
        impl_->cbuf[idx][1] *= mult;
    });
    return impl_->backward();
}

grid::GridField SpectralOps::apply_exp_symbol(const grid::GridField& f, double alpha,
                                              double eps_visc, double dt) {
    impl_->forward(f);
    double s1 = impl_->xi1();
    impl_->for_each_mode([&](std::int64_t idx, const std::vector<int>& m) {
        double xi2 = 0.0;
        for (int ax = 0; ax < impl_->spec.d; ++ax) {
            double x = s1 * m[ax];
            xi2 += x * x;
        }
        double sym = (xi2 > 0.0 ? std::pow(xi2, 0.5 * alpha) : 0.0) + eps_visc * xi2;
        double mult = std::exp(-dt * sym);
        impl_->cbuf[idx][0] *= mult;
        impl_->cbuf[idx][1] *= mult;
    });
    return impl_->backward();
}

std::vector<grid::GridField> SpectralOps::gradient(const grid::GridField& f, bool dealias) {
    std::vector<grid::GridField> out;
    out.reserve(impl_->spec.d);
    double s1 = impl_->xi1();
    int nyq = impl_->spec.n / 2;
    impl_->forward(f);
    std::memcpy(impl_->csave, impl_->cbuf, sizeof(fftw_complex) * impl_->ncplx);
    for (int axis = 0; axis < impl_->spec.d; ++axis) {
        impl_->for_each_mode([&](std::int64_t idx, const std::vector<int>& m) {
            // i xi_axis; Nyquist mode zeroed (no well-defined odd derivative)
            if (std::abs(m[axis]) == nyq || (dealias && impl_->masked(m))) {
                impl_->cbuf[idx][0] = 0.0;
                impl_->cbuf[idx][1] = 0.0;
                return;
            }
            double xi = s1 * m[axis];
            double re = impl_->csave[idx][0], im = impl_->csave[idx][1];
            impl_->cbuf[idx][0] = -xi * im;
            impl_->cbuf[idx][1] = xi * re;
        });
        out.push_back(impl_->backward());
    }
    return out;
}

grid::GridField SpectralOps::divergence(const std::vector<grid::GridField>& f, bool dealias) {
    if ((int)f.size() != impl_->spec.d)
        throw std::invalid_argument("divergence: one component per axis required");
    double s1 = impl_->xi1();
    int nyq = impl_->spec.n / 2;
    // accumulate i xi_axis fhat_axis in csave, transform once
    for (std::int64_t i = 0; i < impl_->ncplx; ++i) impl_->csave[i][0] = impl_->csave[i][1] = 0.0;
    for (int axis = 0; axis < impl_->spec.d; ++axis) {
        impl_->forward(f[axis]);
        impl_->for_each_mode([&](std::int64_t idx, const std::vector<int>& m) {
            if (std::abs(m[axis]) == nyq || (dealias && impl_->masked(m))) return;
            double xi = s1 * m[axis];
            impl_->csave[idx][0] += -xi * impl_->cbuf[idx][1];
            impl_->csave[idx][1] += xi * impl_->cbuf[idx][0];
        });
    }
    std::memcpy(impl_->cbuf, impl_->csave, sizeof(fftw_complex) * impl_->ncplx);
    return impl_->backward();
}

grid::GridField SpectralOps::dealias(const grid::GridField& f) {
    impl_->forward(f);
    impl_->for_each_mode([&](std::int64_t idx, const std::vector<int>& m) {
        if (impl_->masked(m)) {
            impl_->cbuf[idx][0] = 0.0;
            impl_->cbuf[idx][1] = 0.0;
        }
    });
    return impl_->backward();
}

double SpectralOps::symbol_quadratic_form(const grid::GridField& u, double alpha,
                                          double eps_visc) {
    impl_->forward(u);
    double s1 = impl_->xi1();
    int n = impl_->spec.n;
    double acc = 0.0;
    impl_->for_each_mode([&](std::int64_t idx, const std::vector<int>& m) {
        double xi2 = 0.0;
        for (int ax = 0; ax < impl_->spec.d; ++ax) {
            double x = s1 * m[ax];
            xi2 += x * x;
        }
        double sym = (xi2 > 0.0 ? std::pow(xi2, 0.5 * alpha) : 0.0) + eps_visc * xi2;
        double mag2 = impl_->cbuf[idx][0] * impl_->cbuf[idx][0] +
                      impl_->cbuf[idx][1] * impl_->cbuf[idx][1];
        // half-spectrum storage: interior modes of the last axis count twice
        int klast = (int)(idx % (n / 2 + 1));
        double w = (klast == 0 || klast == n / 2) ? 1.0 : 2.0;
        acc += w * sym * mag2;
    });
    // Parseval: h^d sum_x |u|^2 = (1/N) sum_xi |u_hat|^2 * h^d
    double hd = std::pow(impl_->spec.h(), impl_->spec.d);
    return acc * hd / (double)impl_->nreal;
}

} // namespace fdlab::fracops
