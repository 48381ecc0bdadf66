#pragma once

#include <vector>

#include "nakfade/bound.hpp"
#include "nakfade/channel.hpp"
#include "nakfade/mutual_info.hpp"

namespace nakfade {

/// Growth rate lambda of the block length, L(SNR) ~ lambda log(SNR).
class BlockLengthScale {
public:
    explicit BlockLengthScale(double lambda);

    /// lambda such that lambda M ln 2 = multiple * m.
    static BlockLengthScale from_scaled(double multiple, double m, int bits_per_symbol);

    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

/// d_B(R) = 1 + floor(B (1 - R/M)). Throws std::domain_error unless 0 < R <= M.
int singleton_bound(int blocks, int bits_per_symbol, double rate);

/// True when B (1 - R/M) is an integer, where d_B(R) jumps.
bool on_singleton_discontinuity(int blocks, int bits_per_symbol, double rate);

struct OptimalExponent {
    double value = 0.0;  // m d_B(R)
    int singleton = 0;
    // the optimality statement does not cover integer B(1 - R/M)
    bool on_discontinuity = false;
};

OptimalExponent optimal_exponent(const ChannelSpec& spec);

/// SNR-independent limit of the conditional cdf of A:
/// ((2^xi - 1) / (2^M - 1))^m on [0, M].
double asymptotic_cdf_A(double xi, int bits_per_symbol, NakagamiParam m);

TabulatedPmf asymptotic_pmf_A(int bits_per_symbol, NakagamiParam m, int n_cells = kDefaultCells);

/// K in P_out_lower ~ K SNR^{-m d_B(R)}:
///   F_{Ybar}(BR - (B-d)M) C(B, B-d) (m(2^M-1))^{m d} / (m Gamma(m))^d,
/// where Ybar is the sum of d = d_B(R) limit-law copies of A.
double coding_gain(const ChannelSpec& spec, int n_cells = kDefaultCells);

/// K SNR^{-m d_B(R)}.
double asymptote(Snr snr, const ChannelSpec& spec, int n_cells = kDefaultCells);
double asymptote(Snr snr, const ChannelSpec& spec, double coding_gain_value);

/// Lower bound on the SNR exponent of random codes whose block length grows
/// as lambda log(SNR). Natural logarithms throughout.
double random_coding_exponent(const ChannelSpec& spec, BlockLengthScale scale);

struct DiversityReport {
    double rate = 0.0;
    int d_singleton = 0;
    double d_optimal = 0.0;
    std::vector<double> d_random;  // one per requested scale
    double coding_gain = 0.0;
    bool on_discontinuity = false;
};

DiversityReport diversity_report(const ChannelSpec& spec, const std::vector<BlockLengthScale>& scales,
                                 int n_cells = kDefaultCells);

}  // namespace nakfade
