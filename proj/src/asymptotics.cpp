#include "nakfade/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nakfade {

namespace {

constexpr double kIntegerSnap = 1e-12;

double diversity_slack(int blocks, int bits, double rate) {
    if (!(rate > 0.0) || !(rate <= bits)) {
        throw std::domain_error("rate must satisfy 0 < R <= M, got R=" + std::to_string(rate));
    }
    const double x = blocks * (1.0 - rate / bits);
    const double nearest = std::round(x);
    return std::abs(x - nearest) < kIntegerSnap ? nearest : x;
}

}  // namespace

BlockLengthScale::BlockLengthScale(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0)) {
        throw std::domain_error("block-length scale must be >= 0, got " + std::to_string(lambda));
    }
}

BlockLengthScale BlockLengthScale::from_scaled(double multiple, double m, int bits_per_symbol) {
    return BlockLengthScale(multiple * m / (bits_per_symbol * std::numbers::ln2));
}

int singleton_bound(int blocks, int bits_per_symbol, double rate) {
    return 1 + static_cast<int>(std::floor(diversity_slack(blocks, bits_per_symbol, rate)));
}

bool on_singleton_discontinuity(int blocks, int bits_per_symbol, double rate) {
    const double x = diversity_slack(blocks, bits_per_symbol, rate);
    return x == std::round(x);
}

OptimalExponent optimal_exponent(const ChannelSpec& spec) {
    OptimalExponent out;
    out.singleton = singleton_bound(spec.blocks(), spec.bits(), spec.rate());
    out.value = spec.m() * out.singleton;
    out.on_discontinuity = on_singleton_discontinuity(spec.blocks(), spec.bits(), spec.rate());
    return out;
}

double asymptotic_cdf_A(double xi, int bits_per_symbol, NakagamiParam m) {
    if (!(xi > 0.0)) return 0.0;
    if (xi >= bits_per_symbol) return 1.0;
    const double ratio = std::expm1(xi * std::numbers::ln2) / (std::exp2(bits_per_symbol) - 1.0);
    return std::clamp(std::pow(ratio, m.m()), 0.0, 1.0);
}

TabulatedPmf asymptotic_pmf_A(int bits_per_symbol, NakagamiParam m, int n_cells) {
    return tabulate_cdf(bits_per_symbol, n_cells,
                        [&](double xi) { return asymptotic_cdf_A(xi, bits_per_symbol, m); });
}

double coding_gain(const ChannelSpec& spec, int n_cells) {
    const int blocks = spec.blocks();
    const int bits = spec.bits();
    const double m = spec.m();
    const int d = singleton_bound(blocks, bits, spec.rate());
    const int t = blocks - d;

    const TabulatedPmf ybar = convolve_power(asymptotic_pmf_A(bits, spec.fading(), n_cells), d);
    const double cdf = cdf_Y_at(ybar, blocks * spec.rate() - t * bits);

    const double log_choose =
        std::lgamma(blocks + 1.0) - std::lgamma(t + 1.0) - std::lgamma(d + 1.0);
    const double log_factor = m * d * std::log(m * spec.saturation_snr()) -
                              d * (std::log(m) + std::lgamma(m));
    return cdf * std::exp(log_choose + log_factor);
}

double asymptote(Snr snr, const ChannelSpec& spec, double coding_gain_value) {
    const double exponent = optimal_exponent(spec).value;
    return coding_gain_value * std::pow(snr.rho(), -exponent);
}

double asymptote(Snr snr, const ChannelSpec& spec, int n_cells) {
    if (!(snr.rho() > 0.0)) throw std::domain_error("asymptote needs SNR > 0");
    return asymptote(snr, spec, coding_gain(spec, n_cells));
}

double random_coding_exponent(const ChannelSpec& spec, BlockLengthScale scale) {
    const int blocks = spec.blocks();
    const int bits = spec.bits();
    const double m = spec.m();
    const double slack = diversity_slack(blocks, bits, spec.rate());  // B(1 - R/M)
    const double growth = scale.lambda() * bits * std::numbers::ln2;   // lambda M ln 2

    if (growth < m) return growth * slack;
    const int d = singleton_bound(blocks, bits, spec.rate());
    return m * (d - 1) + std::min(m, growth * (slack - d + 1));
}

DiversityReport diversity_report(const ChannelSpec& spec, const std::vector<BlockLengthScale>& scales,
                                 int n_cells) {
    DiversityReport r;
    const OptimalExponent opt = optimal_exponent(spec);
    r.rate = spec.rate();
    r.d_singleton = opt.singleton;
    r.d_optimal = opt.value;
    r.on_discontinuity = opt.on_discontinuity;
    for (const auto& s : scales) r.d_random.push_back(random_coding_exponent(spec, s));
    r.coding_gain = coding_gain(spec, n_cells);
    return r;
}

}  // namespace nakfade
