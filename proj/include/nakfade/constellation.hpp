#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace nakfade {

using Complex = std::complex<double>;

/// Unit average-energy signal set of 2^M equiprobable points.
class Constellation {
public:
    /// Throws std::invalid_argument if the point count is not 2^bits, the
    /// average energy is not 1 (1e-12), or two points coincide.
    Constellation(std::vector<Complex> points, int bits_per_symbol);

    std::span<const Complex> points() const noexcept { return points_; }
    int bits() const noexcept { return bits_; }
    std::size_t size() const noexcept { return points_.size(); }

    double average_energy() const noexcept;
    double min_squared_distance() const noexcept;

private:
    std::vector<Complex> points_;
    int bits_;
};

/// Square Gray-labelled QAM with 2^(M/2) levels per dimension. Point index
/// equals the bit label. Requires even M in [2, 8].
Constellation make_qam(int bits_per_symbol);

/// 2^M-PSK, points e^{i 2 pi k / 2^M}.
Constellation make_psk(int bits_per_symbol);

/// Accepts "qam4", "qam16", "qam64", "psk2", "psk4", "psk8".
Constellation make_constellation(std::string_view name);

}  // namespace nakfade
