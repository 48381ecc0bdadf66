#pragma once

#include "nakfade/random.hpp"

namespace nakfade {

/// Nakagami shape parameter m (m = 1 is Rayleigh).
class NakagamiParam {
public:
    /// Throws std::domain_error unless m is finite and positive.
    explicit NakagamiParam(double m);

    double m() const noexcept { return m_; }

private:
    double m_;
};

/// Fading power gain gamma = |h|^2 (linear, unit mean).
class FadingGain {
public:
    explicit FadingGain(double gamma);

    double value() const noexcept { return gamma_; }

private:
    double gamma_;
};

// Incomplete gamma functions. All throw std::domain_error for a <= 0 or x < 0.
// The lower series is used for x < a + 1 and a Lentz continued fraction
// otherwise; each is iterated until the term ratio falls below 1e-15.

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

/// Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt.
double gamma_upper_incomplete(double a, double x);

/// Density of the fading power gain, m^m xi^(m-1) e^(-m xi) / Gamma(m).
/// Returns +inf at xi = 0 when m < 1 (integrable singularity).
double gain_pdf(double xi, NakagamiParam p);

/// F(xi) = 1 - Q(m, m xi) for xi >= 0, 0 otherwise.
double gain_cdf(double xi, NakagamiParam p);

/// 1 - F(xi), evaluated without cancellation.
double gain_ccdf(double xi, NakagamiParam p);

/// Draws from Gamma(shape = m, scale = 1/m).
FadingGain sample_gain(NakagamiParam p, RandomStream& stream);

/// Nakagami shape matching a Rician K factor, m = (K+1)^2 / (2K+1).
NakagamiParam rician_k_to_m(double k);

}  // namespace nakfade
