#pragma once

#include "nakfade/fading.hpp"

namespace nakfade {

/// A block-fading problem instance: B blocks, 2^M-ary inputs, Nakagami-m
/// fading and target rate R in bits per channel use.
class ChannelSpec {
public:
    /// Throws std::invalid_argument unless B >= 1, M >= 1 and 0 < R <= M.
    ChannelSpec(int blocks, int bits_per_symbol, NakagamiParam fading, double rate);

    int blocks() const noexcept { return blocks_; }
    int bits() const noexcept { return bits_; }
    NakagamiParam fading() const noexcept { return fading_; }
    double m() const noexcept { return fading_.m(); }
    double rate() const noexcept { return rate_; }

    /// 2^M - 1, the SNR threshold (times 1/gamma) where log2(1 + gamma SNR) reaches M.
    double saturation_snr() const noexcept;

    ChannelSpec with_rate(double rate) const { return ChannelSpec(blocks_, bits_, fading_, rate); }

private:
    int blocks_;
    int bits_;
    NakagamiParam fading_;
    double rate_;
};

}  // namespace nakfade
