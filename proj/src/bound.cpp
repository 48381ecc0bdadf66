#include "nakfade/bound.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nakfade {

namespace {

// Denominators below this are treated as underflowed; the SNR-independent
// limit law is used instead.
constexpr double kUnderflow = 1e-290;

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

struct PlanDestroy {
    void operator()(fftw_plan p) const noexcept {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::complex<double> ipow(std::complex<double> z, int n) {
    std::complex<double> r(1.0, 0.0);
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

}  // namespace

BinomialMixture BinomialMixture::make(double success_rate, double failure_rate, int blocks) {
    if (blocks < 1) throw std::invalid_argument("binomial mixture needs blocks >= 1");
    if (!(success_rate >= 0.0 && success_rate <= 1.0) ||
        !(failure_rate >= 0.0 && failure_rate <= 1.0)) {
        throw std::invalid_argument("binomial rates must lie in [0, 1]");
    }
    BinomialMixture mix;
    mix.success_rate = success_rate;
    mix.blocks = blocks;
    mix.weights.resize(blocks + 1);
    const double log_p = std::log(success_rate);
    const double log_q = std::log(failure_rate);
    for (int t = 0; t <= blocks; ++t) {
        // 0 * log(0) is taken as 0 (0^0 = 1)
        double lw = log_choose(blocks, t);
        if (t > 0) lw += t * log_p;
        if (t < blocks) lw += (blocks - t) * log_q;
        mix.weights[t] = std::exp(lw);
    }
    return mix;
}

double success_rate(Snr snr, const ChannelSpec& spec) {
    if (!(snr.rho() > 0.0)) return 0.0;
    return gamma_q(spec.m(), spec.m() * spec.saturation_snr() / snr.rho());
}

double failure_rate(Snr snr, const ChannelSpec& spec) {
    if (!(snr.rho() > 0.0)) return 1.0;
    return gamma_p(spec.m(), spec.m() * spec.saturation_snr() / snr.rho());
}

double conditional_cdf_A(double xi, Snr snr, const ChannelSpec& spec) {
    const double top = spec.bits();
    if (!(xi > 0.0)) return 0.0;
    if (xi >= top) return 1.0;
    const double m = spec.m();
    const double num_gain = std::expm1(xi * std::numbers::ln2);
    const double den = gamma_p(m, m * spec.saturation_snr() / snr.rho());
    if (den < kUnderflow) {
        return std::clamp(std::pow(num_gain / spec.saturation_snr(), m), 0.0, 1.0);
    }
    const double num = gamma_p(m, m * num_gain / snr.rho());
    return std::clamp(num / den, 0.0, 1.0);
}

TabulatedPmf tabulate_cdf(double top, int n_cells, const std::function<double(double)>& cdf) {
    if (n_cells < 2) {
        throw std::invalid_argument("need at least 2 cells, got " + std::to_string(n_cells));
    }
    TabulatedPmf pmf;
    pmf.step = top / n_cells;
    pmf.masses.resize(n_cells);
    double prev = cdf(0.0);
    for (int k = 0; k < n_cells; ++k) {
        const double edge = (k + 1 == n_cells) ? top : pmf.step * (k + 1);
        const double cur = cdf(edge);
        pmf.masses[k] = std::max(cur - prev, 0.0);
        prev = cur;
    }
    return pmf;
}

TabulatedPmf build_pmf_A(Snr snr, const ChannelSpec& spec, int n_cells) {
    if (!(snr.rho() > 0.0)) throw std::domain_error("build_pmf_A needs SNR > 0");
    return tabulate_cdf(spec.bits(), n_cells,
                        [&](double xi) { return conditional_cdf_A(xi, snr, spec); });
}

TabulatedPmf convolve_power(const TabulatedPmf& pmf, int n) {
    if (n < 1) throw std::invalid_argument("convolution power must be >= 1");
    if (n == 1) return pmf;

    const std::size_t in_len = pmf.masses.size();
    const std::size_t out_len = n * (in_len - 1) + 1;
    const std::size_t fft_len = next_pow2(n * in_len);
    const std::size_t spec_len = fft_len / 2 + 1;

    std::unique_ptr<double, FftwFree> real(fftw_alloc_real(fft_len));
    std::unique_ptr<fftw_complex, FftwFree> freq(fftw_alloc_complex(spec_len));
    Plan forward;
    Plan backward;
    {
        std::lock_guard lock(fftw_planner_mutex());
        forward.reset(fftw_plan_dft_r2c_1d(static_cast<int>(fft_len), real.get(), freq.get(),
                                           FFTW_ESTIMATE));
        backward.reset(fftw_plan_dft_c2r_1d(static_cast<int>(fft_len), freq.get(), real.get(),
                                            FFTW_ESTIMATE));
    }
    if (!forward || !backward) throw std::runtime_error("FFTW plan creation failed");

    std::fill_n(real.get(), fft_len, 0.0);
    std::copy(pmf.masses.begin(), pmf.masses.end(), real.get());
    fftw_execute(forward.get());

    auto* bins = reinterpret_cast<std::complex<double>*>(freq.get());
    for (std::size_t k = 0; k < spec_len; ++k) bins[k] = ipow(bins[k], n);
    fftw_execute(backward.get());

    TabulatedPmf out;
    out.step = pmf.step;
    out.origin = n * pmf.origin + 0.5 * (n - 1) * pmf.step;
    out.masses.resize(out_len);
    const double scale = 1.0 / static_cast<double>(fft_len);
    double total = 0.0;
    for (std::size_t k = 0; k < out_len; ++k) {
        out.masses[k] = std::max(real.get()[k] * scale, 0.0);
        total += out.masses[k];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::runtime_error("convolution produced a degenerate pmf");
    }
    for (auto& v : out.masses) v /= total;
    return out;
}

double cdf_Y_at(const TabulatedPmf& pmf, double x) {
    const double u = (x - pmf.origin) / pmf.step;
    if (!(u > 0.0)) return 0.0;
    const auto n = pmf.masses.size();
    if (u >= static_cast<double>(n)) return 1.0;
    const auto whole = static_cast<std::size_t>(u);
    // Neumaier summation: the tail masses can be many orders below the head
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t k = 0; k < whole; ++k) {
        const double v = pmf.masses[k];
        const double t = sum + v;
        comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    sum += comp;
    sum += (u - static_cast<double>(whole)) * pmf.masses[whole];
    return std::clamp(sum, 0.0, 1.0);
}

int last_contributing_term(const ChannelSpec& spec) {
    const double ratio = spec.blocks() * spec.rate() / spec.bits();
    // snap ratios within round-off of an integer onto it
    const double snapped = std::abs(ratio - std::round(ratio)) < 1e-12 ? std::round(ratio) : ratio;
    return std::clamp(static_cast<int>(std::ceil(snapped)) - 1, 0, spec.blocks() - 1);
}

BoundResult outage_lower_bound(Snr snr, const ChannelSpec& spec, int n_cells) {
    if (!(snr.rho() > 0.0)) throw std::domain_error("outage_lower_bound needs SNR > 0");
    const int blocks = spec.blocks();
    const BinomialMixture mix =
        BinomialMixture::make(success_rate(snr, spec), failure_rate(snr, spec), blocks);
    const TabulatedPmf pmf_a = build_pmf_A(snr, spec, n_cells);
    const double budget = blocks * spec.rate();

    BoundResult result;
    const int t_last = last_contributing_term(spec);
    for (int t = 0; t <= t_last; ++t) {
        BoundTerm term;
        term.t = t;
        term.weight = mix.weights[t];
        const TabulatedPmf y = convolve_power(pmf_a, blocks - t);
        term.cdf = cdf_Y_at(y, budget - t * spec.bits());
        term.product = term.cdf * term.weight;
        result.value += term.product;
        result.per_term.push_back(term);
    }
    result.value = std::clamp(result.value, 0.0, 1.0);
    return result;
}

}  // namespace nakfade
