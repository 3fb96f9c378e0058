#include <doctest.h>

#include <cmath>

#include "fdlab/checks.hpp"
#include "fdlab/evolve.hpp"
#include "oracles.hpp"

using namespace fdlab;

namespace {
model::ModelParams params(int d = 3, double alpha = 0.5, double kappa = 1.0) {
    model::ModelParams p;
    p.d = d;
    p.alpha = alpha;
    p.kappa = kappa;
    return p;
}

evolve::SolverConfig solver(int n, double L, double eps = 0.0, double dt = 0.0) {
    evolve::SolverConfig cfg;
    cfg.grid = {3, n, L};
    cfg.eps_visc = eps;
    cfg.dt = dt;
    return cfg;
}
} // namespace

TEST_SUITE_BEGIN("evolve");

TEST_CASE("pure symbol decay of a single mode") {
    auto p = params(3, 0.5, 0.0);
    auto cfg = solver(16, 4.0, 0.0, 0.05);
    evolve::Evolver ev(cfg, p);
    double xi = M_PI / cfg.grid.L * 2.0;
    grid::GridField f(cfg.grid);
    grid::for_each_index(cfg.grid, [&](std::int64_t idx, const std::vector<int>& k) {
        f.v[idx] = std::cos(xi * cfg.grid.coord(k[0]));
    });
    grid::GridField u = f;
    ev.step_forward(u);
    double decay = std::exp(-0.05 * std::pow(xi, 0.5));
    double err = 0.0;
    for (size_t i = 0; i < u.v.size(); ++i)
        err = std::max(err, std::abs(u.v[i] - decay * f.v[i]));
    CHECK(err <= 1e-13);
}

TEST_CASE("constant field is a fixed point for any kappa") {
    auto p = params(3, 0.5, 2.0);
    auto cfg = solver(16, 4.0);
    evolve::Evolver ev(cfg, p);
    grid::GridField u(cfg.grid);
    for (double& x : u.v) x = 1.23;
    ev.step_forward(u);
    for (size_t i = 0; i < u.v.size(); i += 97)
        CHECK(u.v[i] == doctest::Approx(1.23).epsilon(1e-12));
}

TEST_CASE("identity at t=0 and the semigroup property") {
    auto p = params();
    auto cfg = solver(16, 4.0, 0.0, 0.05);
    evolve::Evolver ev(cfg, p);
    grid::GridField f = checks::smooth_test_field(cfg.grid, 3);
    grid::GridField u0 = ev.evolve_forward(f, 0.0);
    CHECK(u0.v == f.v);

    grid::GridField a = ev.evolve_forward(f, 0.2);
    grid::GridField b = ev.evolve_forward(ev.evolve_forward(f, 0.1), 0.1);
    double err = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) err = std::max(err, std::abs(a.v[i] - b.v[i]));
    CHECK(err <= 1e-13);
}

TEST_CASE("splitting orders: Strang ~ 2, Lie ~ 1") {
    auto p = params(3, 0.5, 1.0);
    grid::GridField ref, e1, e2;
    auto run = [&](evolve::SolverConfig::Splitting sp, double dt) {
        auto cfg = solver(32, 4.0, 0.0, dt);
        cfg.splitting = sp;
        evolve::Evolver ev(cfg, p);
        grid::GridField f = checks::smooth_test_field(cfg.grid, 7);
        return ev.evolve_forward(f, 0.32);
    };
    auto err_vs = [&](const grid::GridField& a, const grid::GridField& b) {
        double e = 0.0;
        for (size_t i = 0; i < a.v.size(); ++i) e = std::max(e, std::abs(a.v[i] - b.v[i]));
        return e;
    };

    ref = run(evolve::SolverConfig::Splitting::Strang, 0.005);
    double es1 = err_vs(run(evolve::SolverConfig::Splitting::Strang, 0.04), ref);
    double es2 = err_vs(run(evolve::SolverConfig::Splitting::Strang, 0.02), ref);
    double order_strang = std::log2(es1 / es2);
    CHECK(order_strang > 1.6);
    CHECK(order_strang < 2.6);

    double el1 = err_vs(run(evolve::SolverConfig::Splitting::Lie, 0.04), ref);
    double el2 = err_vs(run(evolve::SolverConfig::Splitting::Lie, 0.02), ref);
    double order_lie = std::log2(el1 / el2);
    CHECK(order_lie > 0.6);
    CHECK(order_lie < 1.5);
}

TEST_CASE("CFL violation is rejected") {
    auto p = params(3, 0.5, 5.0);
    auto cfg = solver(32, 4.0, 0.0, 1.0);
    CHECK_THROWS_AS(evolve::Evolver(cfg, p), std::invalid_argument);
}

TEST_CASE("adjoint conserves mass; kappa=0 adjoint equals forward") {
    auto p = params(3, 0.5, 1.0);
    auto cfg = solver(32, 4.0);
    evolve::Evolver ev(cfg, p);
    grid::GridField g = checks::smooth_test_field(cfg.grid, 21);
    double m0 = g.mass();
    grid::GridField gt = ev.evolve_adjoint(g, 0.3);
    CHECK(gt.mass() == doctest::Approx(m0).epsilon(1e-10));

    auto p0 = params(3, 0.5, 0.0);
    evolve::Evolver ev0(cfg, p0);
    grid::GridField a = ev0.evolve_forward(g, 0.2);
    grid::GridField b = ev0.evolve_adjoint(g, 0.2);
    double err = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) err = std::max(err, std::abs(a.v[i] - b.v[i]));
    CHECK(err <= 1e-13);
}

TEST_CASE("forward/adjoint duality (Strang splitting is exactly dual)") {
    auto p = params(3, 0.5, 1.5);
    auto cfg = solver(32, 4.0, 1e-3);
    evolve::Evolver ev(cfg, p);
    for (int trial = 0; trial < 5; ++trial) {
        grid::GridField f = checks::smooth_test_field(cfg.grid, 100 + trial);
        grid::GridField g = checks::smooth_test_field(cfg.grid, 200 + trial);
        double lhs = ev.evolve_forward(f, 0.3).inner(g);
        double rhs = f.inner(ev.evolve_adjoint(g, 0.3));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("L-infinity contraction and positivity for nonnegative data") {
    auto p = params(3, 0.5, 1.0);
    auto cfg = solver(32, 4.0);
    evolve::Evolver ev(cfg, p);
    grid::GridField f = checks::compact_bump(cfg.grid, 2.5);
    grid::GridField u = ev.evolve_forward(f, 0.5);
    CHECK(u.max() <= f.max() * (1.0 + 1e-8) + 1e-8);
    CHECK(u.min() >= -1e-6 * f.max());
}

TEST_CASE("cauchy kernel oracle at alpha=1, kappa=0 (small grid)") {
    auto p = params(3, 1.0, 0.0);
    auto cfg = solver(32, 8.0, 0.0, 0.1);
    evolve::Evolver ev(cfg, p);
    double t = 0.5, sigma = cfg.effective_delta_width();
    std::vector<double> c0 = {0.0, 0.0, 0.0};
    grid::GridField u = ev.evolve_forward(ev.mollified_delta(c0, sigma), t);

    // reference: periodized (cauchy * gaussian), images |m|_inf <= 2
    double l1err = 0.0, l1 = 0.0, hd = std::pow(cfg.grid.h(), 3);
    grid::for_each_index(cfg.grid, [&](std::int64_t idx, const std::vector<int>& k) {
        double ref = 0.0;
        for (int mx = -2; mx <= 2; ++mx)
            for (int my = -2; my <= 2; ++my)
                for (int mz = -2; mz <= 2; ++mz) {
                    double dx = cfg.grid.coord(k[0]) + 2.0 * cfg.grid.L * mx;
                    double dy = cfg.grid.coord(k[1]) + 2.0 * cfg.grid.L * my;
                    double dz = cfg.grid.coord(k[2]) + 2.0 * cfg.grid.L * mz;
                    ref += oracles::cauchy_mollified_3d(
                        t, sigma, std::sqrt(dx * dx + dy * dy + dz * dz));
                }
        l1err += std::abs(u.v[idx] - ref) * hd;
        l1 += ref * hd;
    });
    CHECK(l1err / l1 <= 0.05);
}

TEST_CASE("heat kernel column: translation invariance and mass at kappa=0") {
    auto p = params(3, 0.5, 0.0);
    auto cfg = solver(32, 4.0, 0.0, 0.05);
    evolve::Evolver ev(cfg, p);
    std::vector<double> y = {0.5, 0.0, 0.0}, z = {0.0, 0.0, 0.0};
    evolve::ColumnStats sy, s0;
    grid::GridField cy = ev.heat_kernel_column(y, 0.3, &sy);
    grid::GridField c0f = ev.heat_kernel_column(z, 0.3, &s0);
    CHECK(sy.total_mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sy.sup == doctest::Approx(s0.sup).epsilon(1e-10));
    // shift by 2 cells along x maps one onto the other
    int shift = (int)std::lround(0.5 / cfg.grid.h());
    double err = 0.0;
    grid::for_each_index(cfg.grid, [&](std::int64_t idx, const std::vector<int>& k) {
        int ks = (k[0] - shift + cfg.grid.n) % cfg.grid.n;
        std::int64_t src = ((std::int64_t)ks * cfg.grid.n + k[1]) * cfg.grid.n + k[2];
        err = std::max(err, std::abs(cy.v[idx] - c0f.v[src]));
    });
    CHECK(err <= 1e-10 * sy.sup);

    CHECK_THROWS_AS(([&] {
                        std::vector<double> bad = {10.0, 0.0, 0.0};
                        ev.heat_kernel_column(bad, 0.3);
                    }()),
                    std::domain_error);
}

TEST_CASE("phi_weight: convergence to psi, lower bound, constants preserved") {
    auto p = params(3, 0.5, 1.0);
    auto cfg = solver(32, 4.0, 1e-3);
    evolve::Evolver ev(cfg, p);
    double beta = 0.3, s = 1.0;

    grid::GridField psi = ev.sample_psi(s, beta);
    double prev = 1e300;
    for (int n : {4, 16, 64}) {
        double mn = 0.0;
        grid::GridField phi = ev.phi_weight(n, s, beta, &mn);
        CHECK(mn > 0.5 / n);
        CHECK(phi.min() >= (1.0 / n) * (1.0 - 1e-3));
        grid::GridField diff = phi;
        for (size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= psi.v[i];
        double d1 = diff.l1();
        CHECK(d1 < prev);
        prev = d1;
    }

    // kappa=0 flow preserves constants: phi = 1/n + const
    auto p0 = params(3, 0.5, 0.0);
    evolve::Evolver ev0(cfg, p0);
    grid::GridField c(cfg.grid);
    for (double& x : c.v) x = 0.8;
    grid::GridField ct = ev0.evolve_adjoint(c, 1.0 / 8);
    CHECK(ct.max() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(ct.min() == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("norm series CSV") {
    auto p = params();
    auto cfg = solver(16, 4.0, 0.0, 0.1);
    evolve::Evolver ev(cfg, p);
    grid::GridField f = checks::compact_bump(cfg.grid, 2.0);
    evolve::NormSeries ns;
    ev.evolve_forward(f, 0.3, &ns);
    CHECK(ns.t.size() == 4); // t = 0, .1, .2, .3
    CHECK(ns.l1.size() == ns.t.size());
    CHECK(ns.gradl2.size() == ns.t.size());
    ns.write_csv("test_norms.csv", "# test\n");
    std::remove("test_norms.csv");
}

TEST_SUITE_END();
