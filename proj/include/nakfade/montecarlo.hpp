#pragma once

#include <cstdint>

#include "nakfade/channel.hpp"
#include "nakfade/constellation.hpp"
#include "nakfade/mutual_info.hpp"

namespace nakfade {

/// Binomial-proportion estimate with its standard error
/// sqrt(p_hat (1 - p_hat) / n).
struct McEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;

    static McEstimate from_count(std::uint64_t hits, std::uint64_t n, std::uint64_t seed);
};

/// Pooled standard error of the difference of two independent estimates.
double pooled_std_err(const McEstimate& a, const McEstimate& b);

// Sample i draws its B fading gains from RandomStream(seed, i), so the
// estimate is bit-identical for any worker count. Both estimators consume the
// same gains for the same seed. `workers` = 0 uses all hardware threads.

/// Pr((1/B) sum_b I_AWGN(gamma_b SNR) < R) with the discrete-input mutual
/// information read from `mi`.
McEstimate mc_outage(Snr snr, const ChannelSpec& spec, const MiTable& mi, std::uint64_t n,
                     std::uint64_t seed, unsigned workers = 0);

/// Convenience overload: tabulates mi_discrete for (c, q) first.
McEstimate mc_outage(Snr snr, const ChannelSpec& spec, const Constellation& c,
                     const QuadratureRule& q, std::uint64_t n, std::uint64_t seed,
                     unsigned workers = 0);

/// Pr((1/B) sum_b min{M, log2(1 + gamma_b SNR)} < R).
McEstimate mc_lower_bound(Snr snr, const ChannelSpec& spec, std::uint64_t n, std::uint64_t seed,
                          unsigned workers = 0);

}  // namespace nakfade
