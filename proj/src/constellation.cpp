#include "nakfade/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nakfade {

Constellation::Constellation(std::vector<Complex> points, int bits_per_symbol)
    : points_(std::move(points)), bits_(bits_per_symbol) {
    if (bits_ < 1 || bits_ > 16 || points_.size() != (std::size_t{1} << bits_)) {
        throw std::invalid_argument("constellation must have 2^M points");
    }
    if (std::abs(average_energy() - 1.0) > 1e-12) {
        throw std::invalid_argument("constellation average energy must be 1");
    }
    if (!(min_squared_distance() > 0.0)) {
        throw std::invalid_argument("constellation points must be distinct");
    }
}

double Constellation::average_energy() const noexcept {
    double e = 0.0;
    for (const auto& x : points_) e += std::norm(x);
    return e / static_cast<double>(points_.size());
}

double Constellation::min_squared_distance() const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            best = std::min(best, std::norm(points_[i] - points_[j]));
        }
    }
    return best;
}

namespace {

unsigned gray_decode(unsigned g) {
    unsigned b = g;
    while (g >>= 1) b ^= g;
    return b;
}

}  // namespace

Constellation make_qam(int bits_per_symbol) {
    if (bits_per_symbol < 2 || bits_per_symbol > 8 || bits_per_symbol % 2 != 0) {
        throw std::invalid_argument("QAM needs an even number of bits in [2, 8], got " +
                                    std::to_string(bits_per_symbol));
    }
    const int half = bits_per_symbol / 2;
    const unsigned levels = 1u << half;
    const unsigned mask = levels - 1;
    // mean energy of the unscaled {+-1, +-3, ...}^2 grid is 2(L^2 - 1)/3
    const double scale = std::sqrt(3.0 / (2.0 * (levels * levels - 1.0)));
    const std::size_t n = std::size_t{1} << bits_per_symbol;

    std::vector<Complex> pts(n);
    for (unsigned label = 0; label < n; ++label) {
        const double i_level = 2.0 * gray_decode(label >> half) - (levels - 1.0);
        const double q_level = 2.0 * gray_decode(label & mask) - (levels - 1.0);
        pts[label] = scale * Complex(i_level, q_level);
    }
    return Constellation(std::move(pts), bits_per_symbol);
}

Constellation make_psk(int bits_per_symbol) {
    if (bits_per_symbol < 1 || bits_per_symbol > 16) {
        throw std::invalid_argument("PSK needs bits in [1, 16], got " +
                                    std::to_string(bits_per_symbol));
    }
    const std::size_t n = std::size_t{1} << bits_per_symbol;
    std::vector<Complex> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
        pts[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / n);
    }
    // exact values on the axes keep BPSK/QPSK free of 1e-17 residue
    for (auto& x : pts) {
        if (std::abs(x.real()) < 1e-15) x.real(0.0);
        if (std::abs(x.imag()) < 1e-15) x.imag(0.0);
    }
    return Constellation(std::move(pts), bits_per_symbol);
}

Constellation make_constellation(std::string_view name) {
    if (name == "qam4") return make_qam(2);
    if (name == "qam16") return make_qam(4);
    if (name == "qam64") return make_qam(6);
    if (name == "psk2") return make_psk(1);
    if (name == "psk4") return make_psk(2);
    if (name == "psk8") return make_psk(3);
    throw std::invalid_argument("unknown constellation '" + std::string(name) + "'");
}

}  // namespace nakfade
