#include "nakfade/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nakfade/parallel.hpp"
#include "nakfade/random.hpp"

namespace nakfade {

namespace {

constexpr std::uint64_t kChunk = 1u << 14;

// Counts samples whose summed per-block information falls strictly below B*R.
// `info(rho)` maps a per-block SNR to bits. Tallies are exact integers per
// chunk, so the sum does not depend on scheduling.
template <class InfoFn>
std::uint64_t count_outages(Snr snr, const ChannelSpec& spec, std::uint64_t n,
                            std::uint64_t seed, unsigned workers, InfoFn&& info) {
    if (n == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> hits(chunks, 0);
    const int blocks = spec.blocks();
    const double budget = blocks * spec.rate();
    const NakagamiParam fading = spec.fading();
    const double rho = snr.rho();

    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t end = std::min(n, begin + kChunk);
        std::uint64_t local = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream stream(seed, i);
            double total = 0.0;
            for (int b = 0; b < blocks; ++b) {
                total += info(sample_gain(fading, stream).value() * rho);
            }
            if (total < budget) ++local;
        }
        hits[c] = local;
    });
    return std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
}

}  // namespace

McEstimate McEstimate::from_count(std::uint64_t hits, std::uint64_t n, std::uint64_t seed) {
    McEstimate e;
    e.n_samples = n;
    e.seed = seed;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
    return e;
}

double pooled_std_err(const McEstimate& a, const McEstimate& b) {
    return std::hypot(a.std_err, b.std_err);
}

McEstimate mc_outage(Snr snr, const ChannelSpec& spec, const MiTable& mi, std::uint64_t n,
                     std::uint64_t seed, unsigned workers) {
    if (mi.bits() != spec.bits()) {
        throw std::invalid_argument("constellation bits do not match the channel spec");
    }
    const auto hits =
        count_outages(snr, spec, n, seed, workers, [&](double rho) { return mi(rho); });
    return McEstimate::from_count(hits, n, seed);
}

McEstimate mc_outage(Snr snr, const ChannelSpec& spec, const Constellation& c,
                     const QuadratureRule& q, std::uint64_t n, std::uint64_t seed,
                     unsigned workers) {
    if (c.bits() != spec.bits()) {
        throw std::invalid_argument("constellation bits do not match the channel spec");
    }
    return mc_outage(snr, spec, MiTable(c, q), n, seed, workers);
}

McEstimate mc_lower_bound(Snr snr, const ChannelSpec& spec, std::uint64_t n, std::uint64_t seed,
                          unsigned workers) {
    const int bits = spec.bits();
    const auto hits = count_outages(snr, spec, n, seed, workers, [bits](double rho) {
        return mi_capped(Snr(rho), bits);
    });
    return McEstimate::from_count(hits, n, seed);
}

}  // namespace nakfade
