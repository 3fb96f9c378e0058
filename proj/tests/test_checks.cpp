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

evolve::SolverConfig solver(int n, double L, double eps = 0.0) {
    evolve::SolverConfig cfg;
    cfg.grid = {3, n, L};
    cfg.eps_visc = eps;
    return cfg;
}
} // namespace

TEST_SUITE_BEGIN("checks");

TEST_CASE("smooth_test_field is deterministic and sign-changing") {
    grid::GridSpec s{3, 16, 4.0};
    grid::GridField a = checks::smooth_test_field(s, 5);
    grid::GridField b = checks::smooth_test_field(s, 5);
    CHECK(a.v == b.v);
    CHECK(a.min() < 0.0);
    CHECK(a.max() > 0.0);
    grid::GridField c = checks::smooth_test_field(s, 6);
    CHECK(a.v != c.v);
}

TEST_CASE("claim 1 gradient bound") {
    auto p = params();
    CheckReport rep = checks::check_claim1_gradient(0.5, 1e-3, solver(32, 4.0), p);
    CHECK(rep.passed);

    // kappa = 0: pure decay, ratio <= 1
    auto p0 = params(3, 0.5, 0.0);
    CheckReport rep0 = checks::check_claim1_gradient(0.5, 0.0, solver(32, 4.0), p0);
    CHECK(rep0.passed);
    CHECK(rep0.measured["max_ratio_over_bound"].get<double>() <= 1.0 + 1e-10);
}

TEST_CASE("claim 2 cauchy property") {
    auto p = params();
    std::vector<double> eps = {1e-2, 1e-3, 1e-4};
    CheckReport rep = checks::check_claim2_cauchy(eps, solver(32, 4.0), p);
    CHECK(rep.passed);
    auto diffs = rep.measured["sup_t_l2_differences"].get<std::vector<double>>();
    REQUIRE(diffs.size() == 2);
    CHECK(diffs[0] > diffs[1]);

    // identical eps twice -> identical trajectories
    auto cfg = solver(32, 4.0, 1e-3);
    cfg.dt = 0.02;
    evolve::Evolver a(cfg, p), b(cfg, p);
    grid::GridField f = checks::compact_bump(cfg.grid, 2.0);
    grid::GridField ua = f, ub = f;
    a.step_forward(ua);
    b.step_forward(ub);
    CHECK(ua.v == ub.v);
}

TEST_CASE("L^r quasi-contraction") {
    auto p = params();
    std::vector<double> rlist = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    CheckReport rep = checks::check_lr_contraction(rlist, 0.5, 1e-3, solver(32, 4.0), p);
    CHECK(rep.passed);

    auto p0 = params(3, 0.5, 0.0);
    CheckReport rep0 = checks::check_lr_contraction(std::vector<double>{2.0}, 0.5, 0.0,
                                                    solver(32, 4.0), p0);
    CHECK(rep0.passed);
    CHECK(rep0.measured[0]["max_ratio_over_bound"].get<double>() <= 1.0 + 1e-12);
}

TEST_CASE("ultracontractivity: kappa=0 alpha=1 constant matches the Cauchy peak") {
    auto p0 = params(3, 1.0, 0.0);
    auto cfg = solver(32, 4.0);
    cfg.dt = 0.05;
    evolve::Evolver ev(cfg, p0);
    std::vector<double> c0 = {0.0, 0.0, 0.0};
    double sigma = cfg.effective_delta_width();
    grid::GridField f = ev.mollified_delta(c0, sigma);
    for (double t : {0.5, 1.0}) {
        grid::GridField u = ev.evolve_forward(f, t);
        double measured = std::pow(t, 3.0) * u.max(); // ||f||_1 = 1
        // reference: the mollified kernel peak (plus nearest periodic images)
        double ref = 0.0;
        for (int m = -1; m <= 1; ++m)
            ref += oracles::cauchy_mollified_3d(t, sigma, std::abs(2.0 * cfg.grid.L * m));
        ref *= std::pow(t, 3.0);
        CHECK(measured == doctest::Approx(ref).epsilon(0.05));
    }

    auto p = params();
    std::vector<double> ts = {0.3, 0.5, 1.0};
    CheckReport rep = checks::check_ultracontractivity(
        ts, 1.0, std::numeric_limits<double>::infinity(), solver(32, 4.0), p);
    CHECK(rep.passed);
}

TEST_CASE("sobolev ratio: positivity and kappa=0 scaling invariance") {
    auto p = params();
    CheckReport rep = checks::check_sobolev_ratio(20, 77, 1e-3, solver(32, 4.0), p);
    CHECK(rep.passed);
    CHECK(rep.measured["c_S_min"].get<double>() > 0.0);

    // scaling u_lambda(x) = u(lambda x) leaves the kappa=0, eps=0 ratio
    // invariant (up to truncation error)
    auto p0 = params(3, 0.5, 0.0);
    grid::GridSpec s{3, 64, 8.0};
    fracops::SpectralOps ops(s);
    double q = 2.0 * p0.d / (p0.d - p0.alpha);
    auto ratio_for = [&](double lam) {
        grid::GridField u = grid::sample_radial(s, [lam](double r) {
            return std::exp(-0.5 * lam * lam * r * r);
        });
        double qf = ops.symbol_quadratic_form(u, p0.alpha, 0.0);
        double den = u.lr(q);
        return qf / (den * den);
    };
    CHECK(ratio_for(2.0) == doctest::Approx(ratio_for(1.0)).epsilon(0.05));
}

TEST_CASE("lemma V audit: signs, decay, stability ingredients") {
    auto p = params();
    double beta = 0.3;
    p.kappa = model::kappa_of_beta(beta, p);

    // U_eps <= 0 pointwise (|x|_eps >= |x|), support of W in the annulus,
    // sup W -> 0 with eps
    double prev_supw = 1e300;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        double supw = 0.0;
        for (int i = 1; i <= 300; ++i) {
            double r = 3.0 * i / 300.0;
            double u = (std::pow(r * r + eps, -0.25) - std::pow(r, -0.5)) * std::pow(r, beta);
            if (r < 1.0) CHECK(u <= 0.0);
            double w = std::abs(model::drift_eps_factor(r, eps, p) -
                                model::drift_factor(r, p)) * r;
            if (r < 1.0 || r > 2.0) {
                if (r > 2.0) CHECK(w == 0.0);
            } else {
                supw = std::max(supw, w);
            }
        }
        CHECK(supw < prev_supw);
        prev_supw = supw;
    }

    std::vector<double> eps = {1e-2, 1e-3};
    CheckReport rep = checks::check_lemma_V(eps, 1.0, beta, solver(64, 8.0), p);
    auto vl1 = rep.measured["V_l1"].get<std::vector<double>>();
    REQUIRE(vl1.size() == 2);
    CHECK(vl1[0] > vl1[1]);
    CHECK(rep.measured["c0"].get<double>() > 0.0);
    auto chat = rep.measured["chat"].get<std::vector<double>>();
    CHECK(chat[0] >= 0.0);
    CHECK(rep.passed);
}

TEST_CASE("B3 weighted contraction (small)") {
    auto p = params();
    double beta = 0.3;
    p.kappa = model::kappa_of_beta(beta, p);
    std::vector<double> slist = {1.0};
    CheckReport rep = checks::check_B3_weighted(slist, 3, beta, solver(32, 4.0), p, 0.10, 2);
    CHECK(rep.passed);

    // kappa = 0: plain L1 quasi-contraction of the symbol flow
    auto p0 = params(3, 0.5, 0.0);
    auto cfg = solver(32, 4.0);
    evolve::Evolver ev(cfg, p0);
    grid::GridField f = checks::smooth_test_field(cfg.grid, 55);
    grid::GridField u = ev.evolve_forward(f, 0.5);
    CHECK(u.l1() <= f.l1() * (1.0 + 1e-6));
}

TEST_CASE("kernel nonnegativity") {
    auto p0 = params(3, 0.5, 0.0);
    auto cfg = solver(32, 4.0);
    std::vector<double> y = {0.5, 0.0, 0.0};
    CheckReport rep0 = checks::check_kernel_nonnegativity(0.3, y, cfg, p0);
    CHECK(rep0.passed);
    CHECK(rep0.measured["min"].get<double>() >=
          -1e-6 * rep0.measured["sup"].get<double>());

    auto p = params();
    CheckReport rep = checks::check_kernel_nonnegativity(0.3, y, cfg, p);
    CHECK(rep.passed);
    CHECK(rep.measured["clipped_mass_fraction"].get<double>() < 1e-4);
}

TEST_CASE("kernel bound: kappa=0 compensated ratio is flat") {
    auto p0 = params(3, 0.5, 0.0);
    auto cfg = solver(48, 2.0);
    CheckReport rep = checks::check_kernel_bound(0.0, cfg, p0, {0.5, 1.0}, 0.05, 0.5, 4,
                                                 0.5, 2);
    CHECK(rep.passed);
    CHECK(rep.measured["growth_beta_per_decade"].get<double>() <= 1.5);
}

TEST_SUITE_END();
