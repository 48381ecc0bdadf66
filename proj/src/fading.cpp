#include "nakfade/fading.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nakfade {

namespace {

constexpr double kTermTol = 1e-15;
constexpr int kMaxIter = 100000;
constexpr double kTiny = 1e-300;

void check_args(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::domain_error("incomplete gamma: shape a must be finite and > 0, got " +
                                std::to_string(a));
    }
    if (!(x >= 0.0)) {
        throw std::domain_error("incomplete gamma: x must be >= 0, got " + std::to_string(x));
    }
}

// P(a, x) by the power series; valid (and used) for x < a + 1.
double lower_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kTermTol) break;
    }
    return sum * std::exp(a * std::log(x) - x - std::lgamma(a));
}

// Q(a, x) by the modified Lentz continued fraction; used for x >= a + 1.
double upper_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kTermTol) break;
    }
    return std::exp(a * std::log(x) - x - std::lgamma(a)) * h;
}

}  // namespace

NakagamiParam::NakagamiParam(double m) : m_(m) {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw std::domain_error("Nakagami shape m must be finite and > 0, got " + std::to_string(m));
    }
}

FadingGain::FadingGain(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0)) {
        throw std::domain_error("fading power gain must be >= 0, got " + std::to_string(gamma));
    }
}

double gamma_p(double a, double x) {
    check_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return lower_series(a, x);
    return 1.0 - upper_fraction(a, x);
}

double gamma_q(double a, double x) {
    check_args(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - lower_series(a, x);
    return upper_fraction(a, x);
}

double gamma_upper_incomplete(double a, double x) {
    return gamma_q(a, x) * std::tgamma(a);
}

double gain_pdf(double xi, NakagamiParam p) {
    const double m = p.m();
    if (xi < 0.0) return 0.0;
    if (xi == 0.0) {
        if (m < 1.0) return std::numeric_limits<double>::infinity();
        return m == 1.0 ? 1.0 : 0.0;
    }
    return std::exp(m * std::log(m) + (m - 1.0) * std::log(xi) - m * xi - std::lgamma(m));
}

double gain_cdf(double xi, NakagamiParam p) {
    if (!(xi > 0.0)) return 0.0;
    return gamma_p(p.m(), p.m() * xi);
}

double gain_ccdf(double xi, NakagamiParam p) {
    if (!(xi > 0.0)) return 1.0;
    return gamma_q(p.m(), p.m() * xi);
}

namespace {

// Marsaglia & Tsang squeeze/rejection sampler for shape >= 1, unit scale.
double gamma_unit_scale(double shape, RandomStream& stream) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = stream.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = stream.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

FadingGain sample_gain(NakagamiParam p, RandomStream& stream) {
    const double m = p.m();
    double g;
    if (m >= 1.0) {
        g = gamma_unit_scale(m, stream);
    } else {
        // Gamma(m) = Gamma(m + 1) * U^(1/m)
        g = gamma_unit_scale(m + 1.0, stream);
        g *= std::exp(std::log(stream.uniform()) / m);
    }
    return FadingGain(g / m);
}

NakagamiParam rician_k_to_m(double k) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw std::domain_error("Rician K must be finite and >= 0, got " + std::to_string(k));
    }
    return NakagamiParam((k + 1.0) * (k + 1.0) / (2.0 * k + 1.0));
}

}  // namespace nakfade
