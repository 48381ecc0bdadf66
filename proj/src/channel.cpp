#include "nakfade/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nakfade {

ChannelSpec::ChannelSpec(int blocks, int bits_per_symbol, NakagamiParam fading, double rate)
    : blocks_(blocks), bits_(bits_per_symbol), fading_(fading), rate_(rate) {
    if (blocks < 1) {
        throw std::invalid_argument("blocks must be >= 1, got " + std::to_string(blocks));
    }
    if (bits_per_symbol < 1 || bits_per_symbol > 16) {
        throw std::invalid_argument("bits per symbol must be in [1, 16], got " +
                                    std::to_string(bits_per_symbol));
    }
    if (!(rate > 0.0) || !(rate <= bits_per_symbol)) {
        throw std::invalid_argument("rate must satisfy 0 < R <= M, got R=" + std::to_string(rate));
    }
}

double ChannelSpec::saturation_snr() const noexcept { return std::exp2(bits_) - 1.0; }

}  // namespace nakfade
