#include "nakfade/mutual_info.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nakfade/parallel.hpp"

namespace nakfade {

Snr::Snr(double rho) : rho_(rho) {
    if (!(rho >= 0.0)) {
        throw std::domain_error("SNR must be >= 0, got " + std::to_string(rho));
    }
}

Snr Snr::from_db(double db) { return Snr(std::pow(10.0, db / 10.0)); }

double Snr::db() const noexcept { return 10.0 * std::log10(rho_); }

namespace {

struct OrthoHermite {
    double value;       // p_n(x)
    double derivative;  // p_n'(x)
    double christoffel; // sum_{k<n} p_k(x)^2
};

// Orthonormal Hermite polynomials for the weight e^{-x^2}.
OrthoHermite ortho_hermite(int n, double x) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    double sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
        sumsq += cur * cur;
        const double next =
            std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return {cur, std::sqrt(2.0 * n) * prev, sumsq};
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
    if (order < 1) {
        throw std::invalid_argument("quadrature order must be >= 1, got " + std::to_string(order));
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(std::max(order - 1, 0));
    for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(k / 2.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Gauss-Hermite eigen-decomposition failed");
    }

    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = solver.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            const OrthoHermite h = ortho_hermite(order, x);
            if (h.derivative == 0.0) break;
            x -= h.value / h.derivative;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / ortho_hermite(order, x).christoffel;
    }
    // symmetrize: the rule is exact for odd functions
    for (int i = 0; i < order / 2; ++i) {
        const int j = order - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = rule.weights[j] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

namespace {

// log-sum terms further than this below the largest one are below double
// resolution of the sum (e^-40 ~ 4e-18) and are skipped
constexpr double kNegligibleExponent = 40.0;

// The tensor Gauss-Hermite grid is invariant under the symmetry group of the
// square (quarter turns, optionally combined with conjugation). Any such map
// that also permutes the constellation leaves the per-point expectation
// unchanged, so only one representative per orbit needs integrating.
struct Orbit {
    std::size_t representative;
    std::size_t size;
};

std::vector<Orbit> symmetry_orbits(std::span<const Complex> pts) {
    const std::size_t n = pts.size();
    auto find = [&](Complex v) -> std::ptrdiff_t {
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(pts[j] - v) < 1e-9) return static_cast<std::ptrdiff_t>(j);
        }
        return -1;
    };
    const Complex quarter(0.0, 1.0);
    std::vector<std::vector<std::size_t>> maps;
    for (int conj = 0; conj < 2; ++conj) {
        Complex rot(1.0, 0.0);
        for (int r = 0; r < 4; ++r, rot *= quarter) {
            std::vector<std::size_t> image(n);
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                const Complex x = conj ? std::conj(pts[i]) : pts[i];
                const auto j = find(rot * x);
                ok = j >= 0;
                if (ok) image[i] = static_cast<std::size_t>(j);
            }
            if (ok) maps.push_back(std::move(image));
        }
    }
    std::vector<bool> seen(n, false);
    std::vector<Orbit> orbits;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::size_t size = 0;
        for (const auto& g : maps) {
            if (!seen[g[i]]) {
                seen[g[i]] = true;
                ++size;
            }
        }
        orbits.push_back({i, size});
    }
    return orbits;
}

}  // namespace

double mi_discrete(Snr snr, const Constellation& c, const QuadratureRule& q) {
    const auto pts = c.points();
    const std::size_t n = pts.size();
    const double amp = std::sqrt(snr.rho());

    // flattened 2-D nodes z = u + iv with weights w_u w_v / pi
    std::vector<Complex> nodes;
    std::vector<double> weights;
    nodes.reserve(q.nodes.size() * q.nodes.size());
    weights.reserve(nodes.capacity());
    for (std::size_t a = 0; a < q.nodes.size(); ++a) {
        for (std::size_t b = 0; b < q.nodes.size(); ++b) {
            nodes.emplace_back(q.nodes[a], q.nodes[b]);
            weights.push_back(q.weights[a] * q.weights[b] / std::numbers::pi);
        }
    }

    // -|d + z|^2 + |z|^2 = -|d|^2 - 2 Re(d conj z)
    std::vector<double> dist2(n), dre(n), dim(n), expo(n);
    double total = 0.0;
    for (const Orbit& orbit : symmetry_orbits(pts)) {
        for (std::size_t j = 0; j < n; ++j) {
            const Complex d = amp * (pts[orbit.representative] - pts[j]);
            dist2[j] = std::norm(d);
            dre[j] = 2.0 * d.real();
            dim[j] = 2.0 * d.imag();
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double zr = nodes[k].real();
            const double zi = nodes[k].imag();
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                expo[j] = -dist2[j] - dre[j] * zr - dim[j] * zi;
                top = std::max(top, expo[j]);
            }
            const double floor = top - kNegligibleExponent;
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (expo[j] > floor) s += std::exp(expo[j] - top);
            }
            acc += weights[k] * (top + std::log(s));
        }
        total += static_cast<double>(orbit.size) * acc;
    }
    const double bits = c.bits();
    const double mi = bits - total / (static_cast<double>(n) * std::numbers::ln2);
    return std::clamp(mi, 0.0, bits);
}

double mi_gaussian(Snr snr) { return std::log2(1.0 + snr.rho()); }

double mi_capped(Snr snr, int bits_per_symbol) {
    return std::min(static_cast<double>(bits_per_symbol), mi_gaussian(snr));
}

MiTable::MiTable(const Constellation& c, const QuadratureRule& q, double db_lo, double db_hi,
                 double db_step)
    : bits_(c.bits()), db_lo_(db_lo), db_step_(db_step), rho_lo_(std::pow(10.0, db_lo / 10.0)) {
    if (!(db_step > 0.0) || !(db_hi > db_lo)) {
        throw std::invalid_argument("MiTable: need db_hi > db_lo and db_step > 0");
    }
    const auto count = static_cast<std::size_t>(std::ceil((db_hi - db_lo) / db_step)) + 1;
    values_.resize(count);
    parallel_for(count, 0, [&](std::size_t k) {
        values_[k] = mi_discrete(Snr::from_db(db_lo + db_step * k), c, q);
    });
}

double MiTable::operator()(double rho) const noexcept {
    if (!(rho > 0.0)) return 0.0;
    if (rho <= rho_lo_) return values_.front() * rho / rho_lo_;
    const double u = (10.0 * std::log10(rho) - db_lo_) / db_step_;
    const auto last = static_cast<double>(values_.size() - 1);
    if (u >= last) return values_.back();

    // 4-point stencil k-1..k+2, shifted inward at the table edges
    auto k = static_cast<std::ptrdiff_t>(u);
    k = std::clamp<std::ptrdiff_t>(k, 1, static_cast<std::ptrdiff_t>(values_.size()) - 3);
    const double t = u - static_cast<double>(k);
    const double f0 = values_[k - 1], f1 = values_[k], f2 = values_[k + 1], f3 = values_[k + 2];
    const double v = -t * (t - 1.0) * (t - 2.0) / 6.0 * f0 + (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0 * f1 -
                     (t + 1.0) * t * (t - 2.0) / 2.0 * f2 + (t + 1.0) * t * (t - 1.0) / 6.0 * f3;
    return std::clamp(v, 0.0, static_cast<double>(bits_));
}

}  // namespace nakfade
