#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdlab/mc.hpp"
#include "fdlab/numutil.hpp"
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
} // namespace

TEST_SUITE_BEGIN("mc");

TEST_CASE("philox4x64-10 known-answer vectors") {
    // frozen from an independent reference implementation (numpy's Philox;
    // numpy advances the counter before producing, hence its vector for
    // counter c corresponds to a raw block at c+1)
    using A4 = std::array<std::uint64_t, 4>;
    using A2 = std::array<std::uint64_t, 2>;
    struct KAT {
        A4 ctr;
        A2 key;
        A4 out;
    };
    const KAT kats[] = {
        {{0, 0, 0, 0}, {0, 0},
         {0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
          0x7e68b68aec7ba23bULL}},
        {{1, 0, 0, 0}, {0, 0},
         {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
          0x907d7a052fd5b4dcULL}},
        {{2, 0, 0, 0}, {0, 0},
         {0x809bf322883987c3ULL, 0x471128b9e807f7ddULL, 0xf250ba0dbec065b7ULL,
          0xfc6ed66767a457bcULL}},
        {{1, 0, 0, 0}, {0xdeadbeefULL, 0},
         {0xa4e930dc738acaf1ULL, 0xb1c7ecc6484e9cf0ULL, 0x6b88a411909298aaULL,
          0x66f3c896201f7262ULL}},
        {{2, 2, 3, 4}, {5, 6},
         {0x92ab6a0e75619263ULL, 0xd8ff75bdc6bf8f60ULL, 0x450e124938725640ULL,
          0x94eb1a7cffd20cbbULL}},
    };
    for (const KAT& k : kats) CHECK(mc::Philox4x64::block(k.ctr, k.key) == k.out);
}

TEST_CASE("rng stream determinism and range") {
    mc::RngStream a(42, 7), b(42, 7), c(43, 7), d(42, 8);
    a.set_step(3);
    b.set_step(3);
    c.set_step(3);
    d.set_step(3);
    double mean = 0.0;
    bool distinct_seed = false, distinct_particle = false;
    for (int i = 0; i < 10000; ++i) {
        double ua = a.uniform(), ub = b.uniform();
        CHECK(ua == ub);
        CHECK(ua > 0.0);
        CHECK(ua < 1.0);
        if (ua != c.uniform()) distinct_seed = true;
        if (ua != d.uniform()) distinct_particle = true;
        mean += ua;
    }
    CHECK(distinct_seed);
    CHECK(distinct_particle);
    CHECK(mean / 10000.0 == doctest::Approx(0.5).epsilon(0.02));

    // set_step resets the draw position
    a.set_step(3);
    b.set_step(3);
    (void)b.uniform();
    b.set_step(3);
    CHECK(a.uniform() == b.uniform());
}

TEST_CASE("one-sided stable sampler: positivity and Laplace transform") {
    mc::RngStream rng(7, 0);
    double a = 0.25;
    const int N = 1000000;
    std::vector<double> s(N);
    for (int i = 0; i < N; ++i) {
        rng.set_step(i);
        s[i] = mc::sample_one_sided_stable(a, rng);
        CHECK(s[i] > 0.0);
    }
    for (double lam : {0.5, 1.0, 2.0}) {
        double m = 0.0, m2 = 0.0;
        for (double x : s) {
            double e = std::exp(-lam * x);
            m += e;
            m2 += e * e;
        }
        m /= N;
        m2 /= N;
        double se = std::sqrt((m2 - m * m) / N);
        CHECK(std::abs(m - std::exp(-std::pow(lam, a))) <= 3.0 * se);
    }
}

TEST_CASE("a = 1/2 subordinator matches the closed-form Levy law (KS)") {
    mc::RngStream rng(11, 0);
    const int N = 100000;
    std::vector<double> s(N);
    for (int i = 0; i < N; ++i) {
        rng.set_step(i);
        s[i] = mc::sample_one_sided_stable(0.5, rng);
    }
    auto ks = oracles::ks_test(std::move(s), [](double x) { return oracles::levy_cdf(x); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("stable increment: characteristic function and isotropy") {
    mc::RngStream rng(13, 0);
    double alpha = 0.5, dt = 0.7;
    const int N = 1000000;
    std::vector<std::array<double, 3>> dl(N);
    for (int i = 0; i < N; ++i) {
        rng.set_step(i);
        double out[3];
        mc::sample_stable_increment(alpha, dt, 3, rng, out);
        dl[i] = {out[0], out[1], out[2]};
    }
    double xis[5] = {0.3, 0.7, 1.0, 1.7, 2.5};
    for (double xi : xis) {
        double mre = 0.0, mim = 0.0, v = 0.0;
        for (const auto& z : dl) {
            double c = std::cos(xi * z[0]), sn = std::sin(xi * z[0]);
            mre += c;
            mim += sn;
            v += c * c;
        }
        mre /= N;
        mim /= N;
        v /= N;
        double se = std::sqrt((v - mre * mre) / N);
        CHECK(std::abs(mre - std::exp(-dt * std::pow(xi, alpha))) <= 3.0 * se);
        CHECK(std::abs(mim) <= 3.0 / std::sqrt((double)N));
    }

    // isotropy: projection onto e1 vs a random direction (two-sample KS)
    std::vector<double> p1(N / 10), p2(N / 10);
    double u[3] = {0.537, -0.714, 0.449};
    double un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    for (int i = 0; i < N / 10; ++i) {
        p1[i] = dl[i][0];
        p2[i] = (dl[i][0] * u[0] + dl[i][1] * u[1] + dl[i][2] * u[2]) / un;
    }
    auto ks = oracles::ks_test_two_sample(std::move(p1), std::move(p2));
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("alpha=1 increments follow the 3d Cauchy law") {
    mc::RngStream rng(17, 0);
    const int N = 100000;
    std::vector<double> r(N);
    for (int i = 0; i < N; ++i) {
        rng.set_step(i);
        double out[3];
        mc::sample_stable_increment(1.0, 1.0, 3, rng, out);
        r[i] = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
    }
    auto ks = oracles::ks_test(std::move(r),
                               [](double x) { return oracles::cauchy_radial_cdf_3d(1.0, x); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("euler step: noise-suppressed drift follows the radial ODE") {
    auto p = params();
    mc::RngStream rng(19, 0);
    double x[3] = {0.3, 0.0, 0.0};
    double dt = 1e-4, T = 0.5;
    long steps = (long)(T / dt);
    for (long i = 0; i < steps; ++i) {
        rng.set_step(i);
        mc::euler_step(x, 3, dt, rng, p, 0.0);
    }
    double want = oracles::rk4_scalar(
        [&](double r) { return model::drift_factor(r, p) * r; }, 0.3, T, 4000);
    CHECK(x[0] == doctest::Approx(want).epsilon(1e-3));
    CHECK(want > 0.3); // repulsive drift expels from the origin

    // determinism under a fixed stream
    mc::RngStream r1(23, 5), r2(23, 5);
    double a1[3] = {1, 0, 0}, a2[3] = {1, 0, 0};
    r1.set_step(0);
    r2.set_step(0);
    mc::euler_step(a1, 3, 0.01, r1, p);
    mc::euler_step(a2, 3, 0.01, r2, p);
    CHECK(a1[0] == a2[0]);
    CHECK(a1[1] == a2[1]);
    CHECK(a1[2] == a2[2]);
}

TEST_CASE("ensemble: t=0, worker invariance, kappa=0 Cauchy law") {
    auto p = params();
    mc::MCConfig cfg;
    cfg.n_particles = 1000;
    cfg.t_end = 0.0;
    cfg.start = {1.0, 0.0, 0.0};
    cfg.seed = 99;
    mc::ParticleEnsemble e0 = mc::simulate_ensemble(cfg, p);
    for (int i = 0; i < 10; ++i) {
        CHECK(e0.particle(i)[0] == 1.0);
        CHECK(e0.particle(i)[1] == 0.0);
    }

    cfg.t_end = 0.25;
    cfg.threads = 1;
    mc::ParticleEnsemble e1 = mc::simulate_ensemble(cfg, p);
    cfg.threads = 4;
    mc::ParticleEnsemble e4 = mc::simulate_ensemble(cfg, p);
    CHECK(e1.positions == e4.positions);

    auto p0 = params(3, 1.0, 0.0);
    mc::MCConfig c0;
    c0.n_particles = 100000;
    c0.t_end = 1.0;
    c0.dt = 0.1;
    c0.start = {0.0, 0.0, 0.0};
    c0.seed = 7;
    c0.threads = 2;
    mc::ParticleEnsemble ec = mc::simulate_ensemble(c0, p0);
    std::vector<double> r(ec.n);
    for (std::int64_t i = 0; i < ec.n; ++i) {
        auto x = ec.particle(i);
        r[i] = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    }
    auto ks = oracles::ks_test(std::move(r),
                               [](double x) { return oracles::cauchy_radial_cdf_3d(1.0, x); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("radial density: uniform ball and the bookkeeping identity") {
    // uniform points in the unit ball via rejection
    mc::RngStream rng(31, 0);
    mc::ParticleEnsemble ens;
    ens.d = 3;
    ens.n = 200000;
    ens.positions.resize(ens.n * 3);
    std::int64_t filled = 0;
    std::uint64_t step = 0;
    while (filled < ens.n) {
        rng.set_step(step++);
        double x = 2.0 * rng.uniform() - 1.0, y = 2.0 * rng.uniform() - 1.0,
               z = 2.0 * rng.uniform() - 1.0;
        if (x * x + y * y + z * z <= 1.0) {
            ens.positions[filled * 3] = x;
            ens.positions[filled * 3 + 1] = y;
            ens.positions[filled * 3 + 2] = z;
            ++filled;
        }
    }
    std::vector<double> edges = num::logspace(0.05, 1.0, 13);
    mc::RadialProfile prof = mc::radial_density(ens, edges);
    double flat = 3.0 / (4.0 * M_PI); // density of the uniform unit ball
    for (size_t k = 0; k < prof.density.size(); ++k)
        CHECK(std::abs(prof.density[k] - flat) <= 3.0 * prof.stderr_[k]);

    // sum density * shellvol = fraction of particles inside max radius
    double total = 0.0, inside = 0.0;
    for (size_t k = 0; k < prof.density.size(); ++k) {
        double shell = 4.0 * M_PI / 3.0 *
                       (std::pow(prof.r_hi[k], 3) - std::pow(prof.r_lo[k], 3));
        total += prof.density[k] * shell;
    }
    for (std::int64_t i = 0; i < ens.n; ++i) {
        auto x = ens.particle(i);
        double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (r > edges.front() && r <= edges.back()) inside += 1.0;
    }
    CHECK(total == doctest::Approx(inside / ens.n).epsilon(1e-12));
}

TEST_CASE("fit_vanishing_exponent: synthetic power law and failure mode") {
    mc::RadialProfile prof;
    prof.d = 3;
    prof.n_total = 1000000;
    mc::RngStream rng(37, 0);
    rng.set_step(0);
    for (int k = 0; k < 12; ++k) {
        double rm = 0.01 * std::pow(10.0, k / 11.0);
        prof.r_lo.push_back(rm * 0.95);
        prof.r_hi.push_back(rm * 1.05);
        prof.r_mid.push_back(rm);
        double noise = 1.0 + 0.01 * (2.0 * rng.uniform() - 1.0);
        double dens = 5.0 * std::pow(rm, 0.3) * noise;
        prof.density.push_back(dens);
        prof.stderr_.push_back(0.01 * dens);
        prof.count.push_back(1000);
    }
    mc::ExponentFit fit = mc::fit_vanishing_exponent(prof, 0.009, 0.12);
    CHECK(fit.beta_hat == doctest::Approx(0.3).epsilon(0.07));
    CHECK(fit.stderr_ < 0.02);

    CHECK_THROWS_AS(mc::fit_vanishing_exponent(prof, 0.009, 0.012), std::runtime_error);
}

TEST_CASE("kappa=0 density has a flat small-r profile") {
    auto p0 = params(3, 0.5, 0.0);
    mc::MCConfig cfg;
    cfg.n_particles = 400000;
    cfg.t_end = 1.0;
    cfg.dt = 0.25;
    cfg.start = {0.0, 0.0, 0.0};
    cfg.seed = 41;
    cfg.threads = 2;
    mc::ParticleEnsemble ens = mc::simulate_ensemble(cfg, p0);
    std::vector<double> edges = num::logspace(0.02, 0.5, 15);
    mc::RadialProfile prof = mc::radial_density(ens, edges);
    mc::ExponentFit fit = mc::fit_vanishing_exponent(prof, 0.02, 0.5);
    CHECK(std::abs(fit.beta_hat) <= 0.1 + 3.0 * fit.stderr_);
}

TEST_SUITE_END();
