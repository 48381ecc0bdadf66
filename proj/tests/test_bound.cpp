#include <doctest.h>

#include <cmath>
#include <numeric>

#include "nakfade/bound.hpp"
#include "nakfade/montecarlo.hpp"
#include "nakfade/random.hpp"
#include "oracles.hpp"

using namespace nakfade;

namespace {

ChannelSpec spec(int b, int bits, double m, double r) { return ChannelSpec(b, bits, NakagamiParam(m), r); }

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

TabulatedPmf random_pmf(std::size_t n, std::uint64_t seed) {
    RandomStream s(seed, 0);
    TabulatedPmf p{0.01, 0.0, std::vector<double>(n)};
    double total = 0.0;
    for (auto& v : p.masses) total += (v = s.uniform());
    for (auto& v : p.masses) v /= total;
    return p;
}

}  // namespace

TEST_CASE("ChannelSpec validation") {
    CHECK_THROWS_AS(spec(0, 4, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(spec(4, 0, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(spec(4, 4, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(spec(4, 4, 2, 4.5), std::invalid_argument);
    CHECK_NOTHROW(spec(4, 4, 2, 4));
    CHECK(spec(4, 4, 2, 1).saturation_snr() == 15.0);
}

TEST_CASE("success rate") {
    CHECK(rel_close(success_rate(Snr(15.0), spec(4, 4, 1, 1)), std::exp(-1.0), 1e-12));
    CHECK(rel_close(success_rate(Snr(10.0), spec(4, 4, 2, 1)), 4.0 * std::exp(-3.0), 1e-12));
    CHECK(std::abs(success_rate(Snr(1e15), spec(4, 4, 2, 1)) - 1.0) < 1e-12);
    const auto s = spec(4, 4, 0.5, 2);
    for (double rho : {0.1, 1.0, 30.0, 1e4}) {
        CHECK(std::abs(success_rate(Snr(rho), s) + failure_rate(Snr(rho), s) - 1.0) < 1e-14);
    }
}

TEST_CASE("conditional cdf of A") {
    const auto s = spec(4, 4, 1, 1);
    const Snr rho(15.0);
    CHECK(conditional_cdf_A(0.0, rho, s) == 0.0);
    CHECK(conditional_cdf_A(-1.0, rho, s) == 0.0);
    CHECK(conditional_cdf_A(4.0, rho, s) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(conditional_cdf_A(5.0, rho, s) == 1.0);
    CHECK(rel_close(conditional_cdf_A(2.0, rho, s), (1 - std::exp(-0.2)) / (1 - std::exp(-1.0)), 1e-12));
    CHECK(conditional_cdf_A(2.0, rho, s) == doctest::Approx(0.28676).epsilon(1e-4));

    for (double m : {0.5, 2.0}) {
        const auto sm = spec(4, 4, m, 1);
        double prev = 0.0;
        for (double xi = 0.0; xi <= 4.0; xi += 0.01) {
            const double f = conditional_cdf_A(xi, Snr(10.0), sm);
            CHECK(f >= prev);
            prev = f;
        }
    }
}

TEST_CASE("Rayleigh closed forms for p and F_A on a 100-point grid") {
    for (int i = 0; i < 100; ++i) {
        const double db = -10.0 + 0.5 * i;
        const double rho = std::pow(10.0, db / 10.0);
        const auto s = spec(4, 4, 1, 1);
        CAPTURE(db);
        CHECK(rel_close(success_rate(Snr(rho), s), std::exp(-15.0 / rho), 1e-12));
        const double xi = 4.0 * (i + 0.5) / 100.0;
        const double closed = -std::expm1(-std::expm1(xi * std::log(2.0)) / rho) / -std::expm1(-15.0 / rho);
        CHECK(rel_close(conditional_cdf_A(xi, Snr(rho), s), closed, 1e-12));
    }
}

TEST_CASE("binomial mixture") {
    const auto b = BinomialMixture::make(0.3, 0.7, 5);
    REQUIRE(b.weights.size() == 6);
    CHECK(std::abs(std::accumulate(b.weights.begin(), b.weights.end(), 0.0) - 1.0) < 1e-12);
    CHECK(rel_close(b.weights[2], 10 * 0.09 * 0.343, 1e-13));
    const auto edge = BinomialMixture::make(1.0, 0.0, 3);
    CHECK(edge.weights[3] == 1.0);
    CHECK(edge.weights[0] == 0.0);
    const auto none = BinomialMixture::make(0.0, 1.0, 3);
    CHECK(none.weights[0] == 1.0);
}

TEST_CASE("tabulated law of A") {
    const auto s = spec(4, 4, 0.5, 1);
    const Snr rho(10.0);
    const auto pmf = build_pmf_A(rho, s, 4096);
    REQUIRE(pmf.cells() == 4096);
    CHECK(std::abs(pmf.step * 4096 - 4.0) < 1e-12);
    CHECK(std::abs(std::accumulate(pmf.masses.begin(), pmf.masses.end(), 0.0) - 1.0) < 1e-9);
    CHECK(pmf.masses[0] == doctest::Approx(conditional_cdf_A(pmf.step, rho, s)).epsilon(1e-14));
    double cum = 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < pmf.cells(); ++k) {
        cum += pmf.masses[k];
        worst = std::max(worst, std::abs(cum - conditional_cdf_A((k + 1) * pmf.step, rho, s)));
    }
    CHECK(worst < 1e-12);
    for (double v : pmf.masses) CHECK(v >= 0.0);
}

TEST_CASE("convolve_power: identity and delta shift") {
    const auto p = random_pmf(64, 3);
    const auto same = convolve_power(p, 1);
    CHECK(same.masses == p.masses);
    CHECK(same.origin == p.origin);

    TabulatedPmf delta{0.5, 0.0, std::vector<double>(16, 0.0)};
    delta.masses[5] = 1.0;
    for (int n : {2, 3, 4}) {
        const auto out = convolve_power(delta, n);
        REQUIRE(out.cells() == static_cast<std::size_t>(n * 15 + 1));
        for (std::size_t j = 0; j < out.cells(); ++j) {
            CHECK(std::abs(out.masses[j] - (j == static_cast<std::size_t>(5 * n) ? 1.0 : 0.0)) < 1e-14);
        }
    }
}

TEST_CASE("convolve_power matches direct convolution") {
    for (int n : {2, 3, 4}) {
        const auto p = random_pmf(512, 100 + n);
        const auto fft = convolve_power(p, n);
        const auto direct = oracle::direct_power(p.masses, n);
        REQUIRE(fft.cells() == direct.size());
        double worst = 0.0;
        for (std::size_t j = 0; j < direct.size(); ++j) {
            worst = std::max(worst, std::abs(fft.masses[j] - direct[j]));
        }
        CAPTURE(n);
        CHECK(worst < 1e-10);
        CHECK(fft.origin == doctest::Approx((n - 1) / 2.0 * p.step));
    }
}

TEST_CASE("piecewise-linear cdf") {
    const TabulatedPmf one{2.0, 0.0, {1.0}};
    CHECK(cdf_Y_at(one, -1.0) == 0.0);
    CHECK(cdf_Y_at(one, 0.0) == 0.0);
    CHECK(cdf_Y_at(one, 1.0) == doctest::Approx(0.5));
    CHECK(cdf_Y_at(one, 2.0) == 1.0);

    const auto p = random_pmf(100, 8);
    CHECK(std::abs(cdf_Y_at(p, p.support_top()) - 1.0) < 1e-9);
    double prev = 0.0;
    for (double x = 0.0; x <= p.support_top(); x += 0.0013) {
        const double f = cdf_Y_at(p, x);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("outage lower bound: limits and monotonicity") {
    const auto s = spec(4, 4, 2, 1);
    CHECK(std::abs(outage_lower_bound(Snr(1e-6), s).value - 1.0) < 1e-6);
    CHECK(outage_lower_bound(Snr::from_db(20), s).value <= outage_lower_bound(Snr::from_db(10), s).value);

    for (double m : {0.5, 2.0}) {
        for (double r : {1.0, 2.0, 3.0}) {
            const auto sr = spec(4, 4, m, r);
            double prev = 1.0 + 1e-12;
            for (double db = 0.0; db <= 40.0; db += 2.0) {
                const double v = outage_lower_bound(Snr::from_db(db), sr).value;
                CHECK(v >= 0.0);
                CHECK(v <= prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("outage lower bound: term structure") {
    CHECK(last_contributing_term(spec(4, 4, 2, 1)) == 0);
    CHECK(last_contributing_term(spec(4, 4, 2, 2)) == 1);
    CHECK(last_contributing_term(spec(4, 4, 2, 3)) == 2);
    CHECK(last_contributing_term(spec(4, 4, 2, 4)) == 3);
    CHECK(last_contributing_term(spec(4, 4, 2, 2.5)) == 2);

    for (double r : {1.0, 1.7, 3.0, 4.0}) {
        const auto s = spec(4, 4, 2, r);
        const Snr rho = Snr::from_db(12.0);
        const auto res = outage_lower_bound(rho, s);
        REQUIRE(res.per_term.size() == static_cast<std::size_t>(last_contributing_term(s) + 1));
        double sum = 0.0;
        for (const auto& term : res.per_term) sum += term.product;
        CHECK(std::abs(sum - res.value) < 1e-12);

        // terms t >= ceil(BR/M) vanish: Y_t is supported on [0,(B-t)M] and is
        // evaluated at BR - tM <= 0; Y_B = 0 and the outage event is strict
        const auto pmf = build_pmf_A(rho, s);
        const auto mix = BinomialMixture::make(success_rate(rho, s), failure_rate(rho, s), 4);
        double extra = 0.0;
        for (int t = last_contributing_term(s) + 1; t <= 4; ++t) {
            const double x = 4 * r - t * 4.0;
            const double f = t == 4 ? (x > 0.0 ? 1.0 : 0.0) : cdf_Y_at(convolve_power(pmf, 4 - t), x);
            extra += f * mix.weights[t];
        }
        CAPTURE(r);
        CHECK(std::abs(extra) < 1e-12);
    }
}

TEST_CASE("grid convergence on doubling the cell count") {
    for (double m : {0.5, 2.0}) {
        for (double r : {1.0, 2.0, 3.0}) {
            for (double db : {5.0, 10.0, 15.0, 20.0, 30.0, 40.0}) {
                const auto s = spec(4, 4, m, r);
                const double a = outage_lower_bound(Snr::from_db(db), s, 4096).value;
                const double b = outage_lower_bound(Snr::from_db(db), s, 8192).value;
                CAPTURE(m);
                CAPTURE(r);
                CAPTURE(db);
                CHECK(rel_close(a, b, 1e-4));
            }
        }
    }
}

TEST_CASE("analytic bound agrees with a 1e7-sample simulation of the capped-MI event") {
    // the standard error is taken under the analytic value so that a point
    // with no simulated hits is still judged
    const std::uint64_t n = 10000000;
    for (const auto& [s, db] : {std::pair{spec(4, 4, 2, 1), 16.0}, std::pair{spec(4, 4, 2, 3), 10.0},
                                std::pair{spec(4, 4, 0.5, 2), 16.0}}) {
        const Snr rho = Snr::from_db(db);
        const double bound = outage_lower_bound(rho, s).value;
        const auto mc = mc_lower_bound(rho, s, n, 20240601);
        const double se = std::max(mc.std_err, std::sqrt(bound * (1.0 - bound) / n));
        CAPTURE(bound);
        CAPTURE(mc.p_hat);
        CHECK(std::abs(bound - mc.p_hat) <= 3.0 * se);
    }
}
