#include "fdlab/evolve.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fdlab::evolve {

void NormSeries::write_csv(const std::string& path, const std::string& provenance) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("NormSeries: cannot open " + path);
    out << provenance;
    out << "t,L1,L2,Linf,gradL2\n";
    char line[256];
    for (size_t i = 0; i < t.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t[i], l1[i],
                      l2[i], linf[i], gradl2.empty() ? 0.0 : gradl2[i]);
        out << line;
    }
}

Evolver::Evolver(const SolverConfig& cfg, const model::ModelParams& params)
    : cfg_(cfg), params_(params), ops_(cfg.grid) {
    cfg_.grid.validate();
    params_.validate();
    if (cfg_.eps_visc < 0.0) throw std::domain_error("Evolver: eps_visc >= 0 required");

    // Sample the drift b_eps once; eps_visc = 0 gives the unregularized b.
    const grid::GridSpec& s = cfg_.grid;
    b_.assign(s.d, grid::GridField(s));
    grid::for_each_index(s, [&](std::int64_t idx, const std::vector<int>& k) {
        double r2 = 0.0;
        for (int ax = 0; ax < s.d; ++ax) {
            double x = s.coord(k[ax]);
            r2 += x * x;
        }
        double r = std::sqrt(r2);
        double f = model::drift_eps_factor(r, cfg_.eps_visc, params_);
        double norm2 = 0.0;
        for (int ax = 0; ax < s.d; ++ax) {
            double c = f * s.coord(k[ax]);
            b_[ax].v[idx] = c;
            norm2 += c * c;
        }
        bsup_ = std::max(bsup_, std::sqrt(norm2));
    });

    if (cfg_.dt > 0.0) {
        dt_ = cfg_.dt;
        if (bsup_ > 0.0 && dt_ * bsup_ / s.h() > cfg_.cfl + 1e-12)
            throw std::invalid_argument("Evolver: advective CFL dt*sup|b|/h <= " +
                                        std::to_string(cfg_.cfl) + " violated");
    } else {
        dt_ = bsup_ > 1e-12 ? std::min(cfg_.cfl * s.h() / bsup_, 0.1) : 0.1;
    }
    double w = cfg_.effective_delta_width();
    if (w < 2.0 * s.h())
        throw std::invalid_argument("Evolver: delta_width >= 2h required");
}

grid::GridField Evolver::advection_rhs_forward(const grid::GridField& u) {
    // b_eps . grad u, dealiased gradient and product
    std::vector<grid::GridField> g = ops_.gradient(u, true);
    grid::GridField w(cfg_.grid);
    for (int ax = 0; ax < cfg_.grid.d; ++ax)
        for (size_t i = 0; i < w.v.size(); ++i) w.v[i] += b_[ax].v[i] * g[ax].v[i];
    return ops_.dealias(w);
}

grid::GridField Evolver::advection_rhs_adjoint(const grid::GridField& g) {
    // -div(b_eps g), dealiased product then spectral divergence
    grid::GridField gd = ops_.dealias(g);
    std::vector<grid::GridField> prod(cfg_.grid.d, grid::GridField(cfg_.grid));
    for (int ax = 0; ax < cfg_.grid.d; ++ax)
        for (size_t i = 0; i < gd.v.size(); ++i) prod[ax].v[i] = b_[ax].v[i] * gd.v[i];
    grid::GridField div = ops_.divergence(prod, true);
    for (double& x : div.v) x = -x;
    return div;
}

void Evolver::advect_rk2(grid::GridField& u, double step_dt, bool adjoint) {
    if (params_.kappa == 0.0) return; // no drift, nothing to do
    grid::GridField k1 = adjoint ? advection_rhs_adjoint(u) : advection_rhs_forward(u);
    grid::GridField u1 = u;
    for (size_t i = 0; i < u.v.size(); ++i) u1.v[i] += step_dt * k1.v[i];
    grid::GridField k2 = adjoint ? advection_rhs_adjoint(u1) : advection_rhs_forward(u1);
    for (size_t i = 0; i < u.v.size(); ++i)
        u.v[i] += 0.5 * step_dt * (k1.v[i] + k2.v[i]);
}

void Evolver::check_nan(const grid::GridField& u) const {
    for (double x : u.v)
        if (!std::isfinite(x))
            throw std::runtime_error(
                "Evolver: non-finite field value (instability); dt=" + std::to_string(dt_) +
                " h=" + std::to_string(cfg_.grid.h()) + " sup|b|=" + std::to_string(bsup_));
}

void Evolver::step_forward(grid::GridField& u, double step_dt) {
    double ddt = step_dt > 0.0 ? step_dt : dt_;
    if (cfg_.splitting == SolverConfig::Splitting::Strang) {
        u = ops_.apply_exp_symbol(u, params_.alpha, cfg_.eps_visc, 0.5 * ddt);
        advect_rk2(u, ddt, false);
        u = ops_.apply_exp_symbol(u, params_.alpha, cfg_.eps_visc, 0.5 * ddt);
    } else {
        u = ops_.apply_exp_symbol(u, params_.alpha, cfg_.eps_visc, ddt);
        advect_rk2(u, ddt, false);
    }
    check_nan(u);
}

void Evolver::step_adjoint(grid::GridField& g, double step_dt) {
    double ddt = step_dt > 0.0 ? step_dt : dt_;
    if (cfg_.splitting == SolverConfig::Splitting::Strang) {
        g = ops_.apply_exp_symbol(g, params_.alpha, cfg_.eps_visc, 0.5 * ddt);
        advect_rk2(g, ddt, true);
        g = ops_.apply_exp_symbol(g, params_.alpha, cfg_.eps_visc, 0.5 * ddt);
    } else {
        advect_rk2(g, ddt, true);
        g = ops_.apply_exp_symbol(g, params_.alpha, cfg_.eps_visc, ddt);
    }
    check_nan(g);
}

namespace {
void record(NormSeries* series, double t, const grid::GridField& u,
            fracops::SpectralOps* ops) {
    if (!series) return;
    series->t.push_back(t);
    series->l1.push_back(u.l1());
    series->l2.push_back(u.l2());
    series->linf.push_back(u.linf());
    if (ops) {
        std::vector<grid::GridField> g = ops->gradient(u, false);
        double s = 0.0;
        for (const auto& gi : g) {
            double n = gi.l2();
            s += n * n;
        }
        series->gradl2.push_back(std::sqrt(s));
    }
}
} // namespace

grid::GridField Evolver::evolve_forward(const grid::GridField& f, double t,
                                        NormSeries* series) {
    if (t < 0.0) throw std::domain_error("evolve_forward: t >= 0 required");
    grid::GridField u = f;
    record(series, 0.0, u, series ? &ops_ : nullptr);
    long nfull = (long)std::floor(t / dt_ + 1e-9);
    double cur = 0.0;
    for (long i = 0; i < nfull; ++i) {
        step_forward(u);
        cur += dt_;
        record(series, cur, u, series ? &ops_ : nullptr);
    }
    double rem = t - nfull * dt_;
    if (rem > 1e-12) {
        step_forward(u, rem);
        record(series, t, u, series ? &ops_ : nullptr);
    }
    return u;
}

grid::GridField Evolver::evolve_adjoint(const grid::GridField& g, double t,
                                        NormSeries* series) {
    if (t < 0.0) throw std::domain_error("evolve_adjoint: t >= 0 required");
    grid::GridField u = g;
    record(series, 0.0, u, series ? &ops_ : nullptr);
    long nfull = (long)std::floor(t / dt_ + 1e-9);
    double cur = 0.0;
    for (long i = 0; i < nfull; ++i) {
        step_adjoint(u);
        cur += dt_;
        record(series, cur, u, series ? &ops_ : nullptr);
    }
    double rem = t - nfull * dt_;
    if (rem > 1e-12) {
        step_adjoint(u, rem);
        record(series, t, u, series ? &ops_ : nullptr);
    }
    return u;
}

grid::GridField Evolver::mollified_delta(std::span<const double> center, double sigma) const {
    const grid::GridSpec& s = cfg_.grid;
    if ((int)center.size() != s.d)
        throw std::invalid_argument("mollified_delta: center dimension mismatch");
    for (int ax = 0; ax < s.d; ++ax)
        if (center[ax] < -s.L || center[ax] >= s.L)
            throw std::domain_error("mollified_delta: center outside the box");
    grid::GridField f(s);
    double twoL = 2.0 * s.L;
    grid::for_each_index(s, [&](std::int64_t idx, const std::vector<int>& k) {
        double r2 = 0.0;
        for (int ax = 0; ax < s.d; ++ax) {
            double dx = s.coord(k[ax]) - center[ax];
            dx -= twoL * std::round(dx / twoL); // periodic min-image
            r2 += dx * dx;
        }
        f.v[idx] = std::exp(-0.5 * r2 / (sigma * sigma));
    });
    double m = f.mass();
    for (double& x : f.v) x /= m;
    return f;
}

grid::GridField Evolver::heat_kernel_column(std::span<const double> y, double t,
                                            ColumnStats* stats, double width_override) {
    double w = width_override > 0.0 ? width_override : cfg_.effective_delta_width();
    grid::GridField f = mollified_delta(y, w);
    grid::GridField col = evolve_forward(f, t);
    ColumnStats st;
    st.min_value = col.min();
    st.sup = col.max();
    st.total_mass = col.mass();
    double hd = std::pow(cfg_.grid.h(), cfg_.grid.d);
    for (double& x : col.v) {
        if (x < 0.0) {
            st.clipped_mass += -x * hd;
            x = 0.0;
        }
    }
    if (stats) *stats = st;
    return col;
}

grid::GridField Evolver::sample_psi(double s, double beta) const {
    double sinv = std::pow(s, -1.0 / params_.alpha);
    return grid::sample_radial(cfg_.grid, [&](double r) {
        return model::weight_eta(sinv * r, beta);
    });
}

grid::GridField Evolver::phi_weight(int n_reg, double s, double beta, double* min_out) {
    if (n_reg < 1) throw std::domain_error("phi_weight: n >= 1 required");
    if (!(s > 0.0)) throw std::domain_error("phi_weight: s > 0 required");
    grid::GridField psi = sample_psi(s, beta);
    grid::GridField phi = evolve_adjoint(psi, 1.0 / n_reg);
    for (double& x : phi.v) x += 1.0 / n_reg;
    double mn = phi.min();
    if (min_out) *min_out = mn;
    if (mn <= 0.0)
        throw std::runtime_error("phi_weight: nonpositive minimum (grid too coarse for psi)");
    return phi;
}

} // namespace fdlab::evolve
