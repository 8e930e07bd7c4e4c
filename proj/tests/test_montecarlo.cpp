#include "ouprem/arithmetic.hpp"
#include "ouprem/errors.hpp"
#include "ouprem/montecarlo.hpp"
#include "ouprem/rng.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <doctest.h>

#include <cmath>

using namespace ouprem;

namespace {

const LevyModel kCp = LevyModel::cpexp(0.4, 2.0);

mc::SimConfig config(std::size_t n, double horizon, std::uint64_t seed = 99) {
    mc::SimConfig c;
    c.n_paths = n;
    c.horizon = horizon;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("path streams") {
    PathStream a(1, 0, 1), b(1, 0, 1), c(1, 1, 1), d(1, 0, 2);
    double sum = 0;
    for (int i = 0; i < 1000; ++i) {
        double u = a.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(u == b.uniform());
        sum += u;
    }
    CHECK(sum / 1000 == doctest::Approx(0.5).epsilon(0.05));
    CHECK(c.uniform() != d.uniform());
}

TEST_CASE("Gaussian factor: exact transition") {
    FactorParams fp;
    fp.x0 = 1.0;
    auto cfg = config(100000, 7.0);
    auto est = mc::estimate(mc::simulate_X(fp, cfg));
    double mean = std::exp(-fp.alpha_x * 7.0);
    double var = fp.sigma_x * fp.sigma_x / (2 * fp.alpha_x) * -std::expm1(-2 * fp.alpha_x * 7.0);
    CHECK(std::fabs(est.z_score(mean)) < 3.0);

    auto xs = mc::simulate_X(fp, cfg);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
    CHECK(std::fabs(mc::estimate(sq).z_score(var)) < 3.0);

    FactorParams quiet = fp;
    quiet.sigma_x = 1e-300;
    for (double x : mc::simulate_X(quiet, config(100, 7.0))) CHECK(x == doctest::Approx(mean).epsilon(1e-15));
}

TEST_CASE("spike factor under P") {
    FactorParams fp;
    fp.y0 = 1.0;
    auto none = mc::simulate_Y_P(LevyModel::cpexp(1e-300, 2.0), fp, config(50, 7.0));
    for (const auto& p : none) {
        CHECK(p.n_jumps == 0);
        CHECK(p.y_end == doctest::Approx(std::exp(-fp.alpha_y * 7.0)).epsilon(1e-14));
    }

    auto paths = mc::simulate_Y_P(kCp, fp, config(50000, 7.0));
    double ref = std::exp(-fp.alpha_y * 7) + 0.1 / fp.alpha_y * -std::expm1(-fp.alpha_y * 7);
    CHECK(std::fabs(mc::estimate(mc::terminal_values(paths)).z_score(ref)) < 3.0);

    CHECK_THROWS_AS(mc::simulate_Y_P(LevyModel::tempered_stable(1, 3, 0.5), fp, config(10, 7.0)),
                    UnsupportedModel);
}

TEST_CASE("jump counts over 30 days are Poisson(6)") {
    FactorParams fp;
    auto paths = mc::simulate_Y_P(kCp, fp, config(20000, 30.0));
    const int bins = 14;  // 0..12 and a >= 13 tail bin
    std::vector<double> obs(bins, 0.0);
    for (const auto& p : paths) obs[std::min<int>(p.n_jumps, bins - 1)] += 1.0;
    boost::math::poisson_distribution<> pois(6.0);
    double chi2 = 0.0;
    for (int k = 0; k < bins; ++k) {
        double prob = k < bins - 1 ? boost::math::pdf(pois, k) : boost::math::cdf(complement(pois, k - 1));
        double e = prob * paths.size();
        chi2 += (obs[k] - e) * (obs[k] - e) / e;
    }
    boost::math::chi_squared_distribution<> dist(bins - 1);
    CHECK(chi2 < boost::math::quantile(dist, 0.999));
}

TEST_CASE("spike factor under Q") {
    FactorParams fp;
    fp.y0 = 0.5;
    // Esscher tilt: sizes Exp(λ - θ2).
    MeasureChange ess{0.0, 0.5, 0.0, 0.0};
    auto pe = mc::simulate_Y_Q(kCp, fp, ess, config(50000, 30.0));
    double jumps = 0, total = 0;
    for (const auto& p : pe) {
        jumps += p.n_jumps;
        total += p.sum_jumps;
    }
    CHECK(total / jumps == doctest::Approx(1.0 / 1.5).epsilon(0.01));
    CHECK(jumps / pe.size() == doctest::Approx(30.0 * 0.4 / 1.5).epsilon(0.01));

    MeasureChange mc{0.0, 0.3, 0.0, 0.3};
    auto pq = mc::simulate_Y_Q(kCp, fp, mc, config(50000, 7.0));
    double k = fp.alpha_y * 0.7;
    double ref = 0.5 * std::exp(-k * 7) + cumulant(kCp, 0.3, 1) / k * -std::expm1(-k * 7);
    CHECK(std::fabs(mc::estimate(mc::terminal_values(pq)).z_score(ref)) < 3.0);

    // Q = P: the two samplers agree statistically.
    auto a = mc::estimate(mc::terminal_values(mc::simulate_Y_Q(kCp, fp, {}, config(50000, 7.0, 5))));
    auto b = mc::estimate(mc::terminal_values(mc::simulate_Y_P(kCp, fp, config(50000, 7.0, 6))));
    CHECK(std::fabs(a.mean - b.mean) < 3.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("results do not depend on the thread count") {
    FactorParams fp;
    fp.y0 = 0.5;
    MeasureChange mc{0.0, 0.3, 0.0, 0.3};
    auto c1 = config(4000, 7.0);
    c1.threads = 1;
    auto c4 = c1;
    c4.threads = 4;
    auto y1 = mc::terminal_values(mc::simulate_Y_Q(kCp, fp, mc, c1));
    auto y4 = mc::terminal_values(mc::simulate_Y_Q(kCp, fp, mc, c4));
    CHECK(y1 == y4);
    auto f1 = mc::mc_forward(mc::ModelKind::Arith, kCp, fp, mc, c1, 7.0);
    auto f4 = mc::mc_forward(mc::ModelKind::Arith, kCp, fp, mc, c4, 7.0);
    CHECK(f1.mean == f4.mean);
    CHECK(f1.std_error == f4.std_error);
}

TEST_CASE("density martingales") {
    FactorParams fp;
    auto d0 = mc::density_martingale_check(kCp, fp, {}, config(200, 30.0));
    CHECK(d0.mean_G.mean == 1.0);
    CHECK(d0.mean_H.mean == 1.0);

    // β̄ = 0: the jump density is the classical Esscher density pathwise.
    auto de = mc::density_martingale_check(kCp, fp, {0.1, 0.3, 0.0, 0.0}, config(2000, 30.0));
    CHECK(de.max_esscher_mismatch < 1e-10);
    CHECK(de.all_positive);

    FactorParams wide = fp;
    wide.sigma_x = 1.0;
    auto cfg = config(5000, 30.0);
    cfg.richardson = true;
    auto d = mc::density_martingale_check(kCp, wide, {0.1, 0.3, 0.3, 0.3}, cfg);
    CHECK(std::fabs(d.mean_G.z_score(1.0)) < 4.0);
    CHECK(std::fabs(d.mean_H.z_score(1.0)) < 4.0);
    REQUIRE(d.richardson_G);
}

TEST_CASE("forward by simulation at small sample size") {
    FactorParams fp;
    fp.x0 = -0.5;
    fp.y0 = 0.5;
    MeasureChange mc{0.0, 0.5, 0.0, 0.3};
    auto est = mc::mc_forward(mc::ModelKind::Arith, kCp, fp, mc, config(20000, 7.0), 7.0);
    double f = arith::forward_price(kCp, fp, mc, {0.0, -0.5, 0.5}, 7.0);
    CHECK(std::fabs(est.z_score(f)) < 4.0);
    CHECK_THROWS_AS(mc::mc_forward(mc::ModelKind::Geom, kCp, fp, {0, 0, 0, 0.5}, config(10, 7.0), 7.0),
                    DomainError);
}
