#pragma once

#include <vector>

#include "nakfade/constellation.hpp"

namespace nakfade {

/// Linear signal-to-noise power ratio.
class Snr {
public:
    /// Throws std::domain_error for negative or NaN rho.
    explicit Snr(double rho);

    /// rho = 10^(dB/10).
    static Snr from_db(double db);

    double rho() const noexcept { return rho_; }
    double db() const noexcept;

private:
    double rho_;
};

/// Gauss-Hermite rule for int f(x) e^{-x^2} dx.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr int kDefaultQuadratureOrder = 128;

/// Nodes from the eigenvalues of the Hermite Jacobi matrix (Golub-Welsch),
/// polished by Newton steps on the orthonormal recurrence. Weights are the
/// Christoffel numbers 1 / sum_k p_k(x)^2.
QuadratureRule gauss_hermite(int order = kDefaultQuadratureOrder);

/// Coded-modulation mutual information (bits) of an AWGN channel with
/// equiprobable inputs from `c`. The expectation over Z ~ CN(0,1) uses the
/// tensor product of `q` over Re Z and Im Z. Clamped to [0, M].
double mi_discrete(Snr snr, const Constellation& c, const QuadratureRule& q);

/// log2(1 + rho).
double mi_gaussian(Snr snr);

/// min{M, log2(1 + rho)}.
double mi_capped(Snr snr, int bits_per_symbol);

/// mi_discrete tabulated on a uniform dB grid and read back by 4-point
/// Lagrange interpolation. Below the grid the curve is continued linearly in
/// rho; above it the top value is held.
class MiTable {
public:
    MiTable(const Constellation& c, const QuadratureRule& q, double db_lo = -30.0,
            double db_hi = 45.0, double db_step = 0.1);

    double operator()(double rho) const noexcept;

    int bits() const noexcept { return bits_; }

private:
    int bits_;
    double db_lo_;
    double db_step_;
    double rho_lo_;
    std::vector<double> values_;
};

}  // namespace nakfade
