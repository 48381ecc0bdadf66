#pragma once

#include <functional>
#include <vector>

#include "nakfade/channel.hpp"
#include "nakfade/mutual_info.hpp"

namespace nakfade {

inline constexpr int kDefaultCells = 4096;

/// Probability masses of a nonnegative continuous variable on a uniform grid.
/// Cell k covers [origin + k*step, origin + (k+1)*step) and its mass is
/// treated as uniformly spread over the cell.
///
/// `origin` is 0 for directly tabulated variables. An n-fold convolution of
/// cell masses puts the mass of output cell j at the sum of n input cell
/// centres, so convolve_power() shifts the origin by (n-1)/2 cells to keep
/// each output cell centred on that sum.
struct TabulatedPmf {
    double step = 0.0;
    double origin = 0.0;
    std::vector<double> masses;

    std::size_t cells() const noexcept { return masses.size(); }
    double support_top() const noexcept {
        return origin + step * static_cast<double>(masses.size());
    }
};

/// Binomial law of the number of blocks whose gain exceeds the saturation
/// threshold: weights[t] = C(B,t) p^t (1-p)^(B-t), t = 0..B.
struct BinomialMixture {
    double success_rate = 0.0;
    int blocks = 0;
    std::vector<double> weights;

    /// `failure_rate` is 1 - p supplied separately so that a tiny 1 - p keeps
    /// full relative accuracy. Coefficients use log-gamma.
    static BinomialMixture make(double success_rate, double failure_rate, int blocks);
};

struct BoundTerm {
    int t = 0;
    double cdf = 0.0;     // F_{Y_t}(BR - tM)
    double weight = 0.0;  // C(B,t) p^t (1-p)^(B-t)
    double product = 0.0;
};

struct BoundResult {
    double value = 0.0;
    std::vector<BoundTerm> per_term;
};

/// p = Pr(gamma > (2^M - 1)/SNR) = Q(m, m(2^M - 1)/SNR).
double success_rate(Snr snr, const ChannelSpec& spec);

/// 1 - p = P(m, m(2^M - 1)/SNR), computed directly.
double failure_rate(Snr snr, const ChannelSpec& spec);

/// cdf of A = log2(1 + gamma SNR) given gamma <= (2^M - 1)/SNR.
/// 0 for xi <= 0, 1 for xi >= M.
double conditional_cdf_A(double xi, Snr snr, const ChannelSpec& spec);

/// Cell masses of a cdf supported on [0, top]: mass_k = F((k+1)h) - F(kh).
TabulatedPmf tabulate_cdf(double top, int n_cells, const std::function<double(double)>& cdf);

/// Tabulated law of A over [0, M]. Differences of the exact cdf, so the
/// m < 1 density singularity at 0 is never evaluated pointwise.
TabulatedPmf build_pmf_A(Snr snr, const ChannelSpec& spec, int n_cells = kDefaultCells);

/// n-fold self-convolution of the cell masses by zero-padded FFT. The result
/// has n(N-1)+1 cells of the same step; tiny negative round-off is clamped to
/// zero and the masses renormalized.
TabulatedPmf convolve_power(const TabulatedPmf& pmf, int n);

/// Piecewise-linear cdf: masses of cells entirely below x plus the covered
/// fraction of the straddling cell.
double cdf_Y_at(const TabulatedPmf& pmf, double x);

/// Lower bound on the information outage probability:
///   sum_{t=0}^{ceil(BR/M)-1} F_{Y_t}(BR - tM) C(B,t) p^t (1-p)^(B-t),
/// with Y_t the sum of B - t independent copies of A.
BoundResult outage_lower_bound(Snr snr, const ChannelSpec& spec, int n_cells = kDefaultCells);

/// Largest t that contributes to the bound, ceil(BR/M) - 1.
int last_contributing_term(const ChannelSpec& spec);

}  // namespace nakfade
