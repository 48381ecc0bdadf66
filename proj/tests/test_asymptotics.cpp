#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nakfade/asymptotics.hpp"
#include "oracles.hpp"

using namespace nakfade;

namespace {

ChannelSpec spec(int b, int bits, double m, double r) { return ChannelSpec(b, bits, NakagamiParam(m), r); }

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

BlockLengthScale scaled(double multiple, double m) { return BlockLengthScale::from_scaled(multiple, m, 4); }

}  // namespace

TEST_CASE("Singleton bound values") {
    CHECK(singleton_bound(4, 4, 1.0) == 4);
    CHECK(singleton_bound(4, 4, 2.0) == 3);
    CHECK(singleton_bound(4, 4, 3.0) == 2);
    CHECK(singleton_bound(4, 4, 4.0) == 1);
    CHECK(singleton_bound(4, 4, 0.5) == 4);
    CHECK(singleton_bound(1, 4, 2.0) == 1);
    CHECK_THROWS_AS(singleton_bound(4, 4, 0.0), std::domain_error);
    CHECK_THROWS_AS(singleton_bound(4, 4, 4.1), std::domain_error);
}

TEST_CASE("Singleton bound is a nonincreasing staircase with jumps at M(1 - k/B)") {
    for (int b : {2, 3, 4, 6}) {
        const int bits = 4;
        int prev = singleton_bound(b, bits, 1e-6);
        CHECK(prev == b);
        for (int i = 1; i <= 4000; ++i) {
            const double r = bits * i / 4000.0;
            const int d = singleton_bound(b, bits, r);
            CHECK(d <= prev);
            prev = d;
        }
        for (int k = 1; k < b; ++k) {
            const double jump = bits * (1.0 - static_cast<double>(k) / b);
            CAPTURE(b);
            CAPTURE(k);
            CHECK(singleton_bound(b, bits, jump - 1e-9) == k + 1);
            CHECK(singleton_bound(b, bits, jump + 1e-9) == k);
            CHECK(on_singleton_discontinuity(b, bits, jump));
            CHECK_FALSE(on_singleton_discontinuity(b, bits, jump + 1e-9));
        }
    }
}

TEST_CASE("optimal exponent") {
    CHECK(optimal_exponent(spec(4, 4, 2, 1)).value == 8.0);
    CHECK(optimal_exponent(spec(4, 4, 0.5, 3)).value == 1.0);
    for (double r : {0.3, 1.0, 1.5, 2.2, 3.7}) {
        const auto o = optimal_exponent(spec(4, 4, 1, r));
        CHECK(o.value == static_cast<double>(singleton_bound(4, 4, r)));
    }
    CHECK(optimal_exponent(spec(4, 4, 2, 1)).on_discontinuity);
    CHECK_FALSE(optimal_exponent(spec(4, 4, 2, 1.5)).on_discontinuity);
}

TEST_CASE("asymptotic law of A") {
    const NakagamiParam one(1.0);
    CHECK(asymptotic_cdf_A(0.0, 4, one) == 0.0);
    CHECK(asymptotic_cdf_A(4.0, 4, one) == 1.0);
    CHECK(asymptotic_cdf_A(2.0, 4, one) == doctest::Approx(0.2).epsilon(1e-14));

    for (double m : {0.5, 2.0}) {
        const NakagamiParam p(m);
        const auto pmf = asymptotic_pmf_A(4, p, 4096);
        double cum = 0.0;
        double worst = 0.0;
        for (std::size_t k = 0; k < pmf.cells(); ++k) {
            cum += pmf.masses[k];
            const double xi = (k + 1) * pmf.step;
            worst = std::max(worst, std::abs(cum - std::pow((std::exp2(xi) - 1.0) / 15.0, m)));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("asymptotic law is the high-SNR limit of the conditional law") {
    for (double m : {0.5, 1.0, 2.0}) {
        const auto s = spec(4, 4, m, 1);
        double worst = 0.0;
        for (double xi = 0.0; xi <= 4.0; xi += 0.01) {
            worst = std::max(worst, std::abs(asymptotic_cdf_A(xi, 4, s.fading()) -
                                             conditional_cdf_A(xi, Snr(1e8), s)));
        }
        CAPTURE(m);
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("coding gain: single-block Rayleigh closed form") {
    for (double r : {0.5, 1.0, 2.0, 3.0}) {
        CAPTURE(r);
        CHECK(std::abs(coding_gain(spec(1, 4, 1, r)) - (std::exp2(r) - 1.0)) < 1e-6);
    }
}

TEST_CASE("coding gain: B=4, m=2, R=1 against a direct four-fold convolution") {
    const int n = 4096;
    const double h = 4.0 / n;
    std::vector<double> a(n);
    for (int k = 0; k < n; ++k) {
        auto g = [](double xi) { return std::pow((std::exp2(xi) - 1.0) / 15.0, 2.0); };
        a[k] = g((k + 1) * h) - g(k * h);
    }
    const auto y = oracle::direct_power(a, 4);
    // output cell j carries the mass of four cell centres summing to (j + 2) h;
    // interpolate the cdf linearly between consecutive centres
    const double x = 4.0;
    double f = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double lo = (j + 1.5) * h;
        if (lo + h <= x) {
            f += y[j];
        } else if (lo < x) {
            f += y[j] * (x - lo) / h;
        }
    }
    const double oracle_k = f * std::pow(30.0, 8.0) / 16.0;
    CHECK(rel_close(coding_gain(spec(4, 4, 2, 1)), oracle_k, 1e-9));
}

TEST_CASE("asymptote is a pure power law") {
    const auto s = spec(4, 4, 2, 1);
    const double k = coding_gain(s);
    CHECK(rel_close(asymptote(Snr(1e4), s, k) / asymptote(Snr(1e5), s, k), 1e8, 1e-12));
    CHECK(rel_close(asymptote(Snr(1e3), spec(1, 4, 1, 2)), 3e-3, 1e-6));
    CHECK_THROWS_AS(asymptote(Snr(0.0), s), std::domain_error);
}

TEST_CASE("random-coding exponent") {
    // lambda M ln 2 = m / 2 = 1
    CHECK(random_coding_exponent(spec(4, 4, 2, 1), scaled(0.5, 2.0)) == doctest::Approx(3.0).epsilon(1e-14));
    for (double mult : {0.5, 1.0, 2.0, 50.0}) {
        CHECK(random_coding_exponent(spec(4, 4, 2, 4), scaled(mult, 2.0)) == 0.0);
    }
    // lambda -> infinity off the discontinuities saturates at m d_B
    for (double r : {0.7, 1.5, 2.5, 3.3}) {
        const auto s = spec(4, 4, 2, r);
        CHECK(random_coding_exponent(s, BlockLengthScale(1e3)) == doctest::Approx(optimal_exponent(s).value));
    }
    CHECK_THROWS_AS(BlockLengthScale(-1.0), std::domain_error);
    CHECK(BlockLengthScale::from_scaled(1.0, 2.0, 4).lambda() * 4 * std::numbers::ln2 ==
          doctest::Approx(2.0));
}

TEST_CASE("random-coding exponent never exceeds the optimal exponent") {
    for (double m : {0.5, 1.0, 2.0}) {
        const double lambdas[] = {scaled(0.5, m).lambda(), scaled(1.0, m).lambda(),
                                  scaled(2.0, m).lambda(), 1e3};
        for (int i = 1; i <= 400; ++i) {
            const double r = 4.0 * i / 400.0;
            const auto s = spec(4, 4, m, r);
            for (double l : lambdas) {
                CAPTURE(r);
                CHECK(random_coding_exponent(s, BlockLengthScale(l)) <= optimal_exponent(s).value + 1e-12);
            }
        }
    }
}

TEST_CASE("random-coding exponent is continuous where its branches meet") {
    for (double m : {0.5, 2.0, 3.0}) {
        const double at = m / (4 * std::numbers::ln2);
        for (int i = 1; i < 200; ++i) {
            const double r = 4.0 * i / 200.0 + 1e-9;
            const auto s = spec(4, 4, m, r);
            const double below = random_coding_exponent(s, BlockLengthScale(at * (1 - 1e-13)));
            const double on = random_coding_exponent(s, BlockLengthScale(at));
            const double above = random_coding_exponent(s, BlockLengthScale(at * (1 + 1e-13)));
            CHECK(std::abs(below - on) < 1e-9);
            CHECK(std::abs(above - on) < 1e-9);
        }
    }
}

TEST_CASE("diversity report bundles consistent values") {
    const auto s = spec(4, 4, 2, 1.5);
    const auto rep = diversity_report(s, {scaled(0.5, 2.0), scaled(2.0, 2.0)});
    CHECK(rep.rate == 1.5);
    CHECK(rep.d_singleton == 3);
    CHECK(rep.d_optimal == 6.0);
    REQUIRE(rep.d_random.size() == 2);
    for (double d : rep.d_random) CHECK(d <= rep.d_optimal + 1e-12);
    CHECK(rep.coding_gain > 0.0);
    CHECK_FALSE(rep.on_discontinuity);
}
