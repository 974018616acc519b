#pragma once

// Renyi and Shannon entropies of the oscillator densities, conjugate Renyi
// indices, and the Maassen-Uffink lower bound for Fourier-conjugate pairs.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "minlen/density.hpp"
#include "minlen/oscillator.hpp"
#include "minlen/quadrature.hpp"

namespace minlen {

class EntropyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EntropyOptions {
    /// Absolute tolerance on the power integral int rho^alpha (or -rho ln rho).
    double tol = 1e-8;
    /// Unmapped real-line domains: double the cutoff until the entropy moves
    /// by less than this.
    double cutoff_change = 1e-6;
    /// Starting cutoff in units of the density's width.
    double cutoff_start = 20.0;
    int max_doublings = 24;
    std::size_t max_evaluations = 4'000'000;
    /// Geometric grading toward the endpoints of finite and mapped domains.
    int grading_levels = 12;
};

struct EntropyResult {
    double alpha = 1.0; // 1 means Shannon
    Space space = Space::Q;
    std::optional<int> n;
    std::optional<double> beta;
    double value = 0.0; // nats
    double err = 0.0;
    /// Final |u| cutoff for truncated real-line integrals.
    std::optional<double> cutoff;
};

namespace detail {

struct Accumulated {
    double value;
    double err;
    std::optional<double> cutoff;
};

inline int panel_count(double length, double panel_width)
{
    if (!(panel_width > 0.0) || !std::isfinite(panel_width))
        return 1;
    return static_cast<int>(std::clamp(std::ceil(length / panel_width), 1.0, 20000.0));
}

/// int integrand(rho(u)) du over the density's domain. `to_entropy` turns a
/// partial integral into an entropy value for the cutoff stopping rule.
template <class Integrand, class ToEntropy>
Accumulated integrate_functional(const ProbabilityDensity& d, const Integrand& integrand,
                                 const ToEntropy& to_entropy, const EntropyOptions& opt)
{
    auto f = [&](double u) {
        const double r = d.rho(u);
        return r > 0.0 ? integrand(r) : 0.0;
    };
    quad::QuadratureOptions qo;
    qo.max_evaluations = opt.max_evaluations;
    qo.grading_levels = opt.grading_levels;

    const auto& dom = d.domain;
    if (dom.kind == quad::IntegrationDomain::Kind::finite) {
        const bool fold = d.even && dom.lower == -dom.upper;
        const double a = fold ? 0.0 : dom.lower;
        qo.initial_panels = panel_count(dom.upper - a, d.width);
        auto r = quad::integrate_finite(f, a, dom.upper, fold ? 0.5 * opt.tol : opt.tol, qo);
        const double k = fold ? 2.0 : 1.0;
        return {k * r.value, k * r.error_estimate, std::nullopt};
    }

    if (dom.map) {
        qo.initial_panels = panel_count(dom.map->half_width() * (d.even ? 1.0 : 2.0), d.width);
        auto r = quad::integrate_real_line(f, opt.tol, *dom.map, qo, d.even);
        return {r.value, r.error_estimate, std::nullopt};
    }

    // truncated real line: grow [-c, c] by doubling until the entropy settles
    qo.grading_levels = 0;
    const double panel = std::min(0.5 * d.width, d.oscillation_length.value_or(d.width));
    auto segment = [&](double lo, double hi, double tol) {
        qo.initial_panels = panel_count(hi - lo, panel);
        auto r = quad::integrate_finite(f, lo, hi, d.even ? 0.5 * tol : tol, qo);
        if (d.even)
            return quad::QuadratureResult<double>{2.0 * r.value, 2.0 * r.error_estimate, r.evaluations};
        auto l = quad::integrate_finite(f, -hi, -lo, tol, qo);
        return quad::QuadratureResult<double>{r.value + l.value, r.error_estimate + l.error_estimate,
                                              r.evaluations + l.evaluations};
    };
    double cutoff = opt.cutoff_start * d.width;
    double seg_tol = 0.5 * opt.tol;
    auto first = segment(0.0, cutoff, seg_tol);
    double total = first.value;
    double err = first.error_estimate;
    double previous = to_entropy(total);
    for (int k = 0; k < opt.max_doublings; ++k) {
        seg_tol *= 0.5;
        auto next = segment(cutoff, 2.0 * cutoff, seg_tol);
        total += next.value;
        err += next.error_estimate;
        cutoff *= 2.0;
        const double current = to_entropy(total);
        if (std::abs(current - previous) < opt.cutoff_change)
            return {total, err, cutoff};
        previous = current;
    }
    throw EntropyError("entropy integral did not stabilise under cutoff doubling (cutoff " +
                       std::to_string(cutoff) + ")");
}

inline EntropyResult labelled(const ProbabilityDensity& d, double alpha)
{
    EntropyResult r;
    r.alpha = alpha;
    r.space = d.space;
    r.n = d.n;
    r.beta = d.beta;
    return r;
}

} // namespace detail

/// R_alpha = ln(int rho^alpha) / (1 - alpha); alpha > 0, alpha != 1.
inline EntropyResult renyi(const ProbabilityDensity& d, double alpha, const EntropyOptions& opt = {})
{
    if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha))
        throw std::domain_error("renyi: order must be positive, finite and != 1");
    const double scale = 1.0 / (1.0 - alpha);
    auto acc = detail::integrate_functional(
        d, [alpha](double r) { return std::pow(r, alpha); },
        [scale](double integral) { return scale * std::log(integral); }, opt);
    if (!(acc.value > 0.0) || !std::isfinite(acc.value))
        throw EntropyError("renyi: power integral is not positive and finite");
    auto res = detail::labelled(d, alpha);
    res.value = scale * std::log(acc.value);
    res.err = std::abs(scale) * acc.err / acc.value;
    res.cutoff = acc.cutoff;
    return res;
}

/// S = -int rho ln rho, computed directly.
inline EntropyResult shannon(const ProbabilityDensity& d, const EntropyOptions& opt = {})
{
    auto acc = detail::integrate_functional(
        d, [](double r) { return -r * std::log(r); }, [](double integral) { return integral; }, opt);
    if (!std::isfinite(acc.value))
        throw EntropyError("shannon: integral is not finite");
    auto res = detail::labelled(d, 1.0);
    res.value = acc.value;
    res.err = acc.err;
    res.cutoff = acc.cutoff;
    return res;
}

/// int rho over the density's domain, using the same truncation protocol as
/// the entropies (the cutoff settles once the mass moves by < cutoff_change).
inline quad::QuadratureResult<double> probability_mass(const ProbabilityDensity& d, const EntropyOptions& opt = {})
{
    auto acc = detail::integrate_functional(
        d, [](double r) { return r; }, [](double integral) { return integral; }, opt);
    return {acc.value, acc.err, 0};
}

/// Renyi entropy with alpha == 1 routed to Shannon.
inline EntropyResult entropy(const ProbabilityDensity& d, double alpha, const EntropyOptions& opt = {})
{
    return alpha == 1.0 ? shannon(d, opt) : renyi(d, alpha, opt);
}

/// alpha* with 1/alpha + 1/alpha* = 2.
inline double conjugate_index(double alpha)
{
    if (!(alpha > 0.5) || !std::isfinite(alpha))
        throw std::domain_error("conjugate_index: requires alpha > 1/2");
    if (alpha == 1.0)
        return 1.0;
    return alpha / (2.0 * alpha - 1.0);
}

inline bool are_conjugate(double alpha, double alpha_star)
{
    return std::abs(1.0 / alpha + 1.0 / alpha_star - 2.0) <= 1e-12;
}

namespace detail {

// ln(a) / (2 (a - 1)), continuous through a = 1
inline double bound_exponent_term(double a)
{
    const double d = a - 1.0;
    if (std::abs(d) < 1e-6)
        return 0.5 * (1.0 - d / 2.0 + d * d / 3.0);
    return std::log(a) / (2.0 * d);
}

} // namespace detail

/// ln(pi alpha^{1/(2(alpha-1))} alpha*^{1/(2(alpha*-1))}); ln(pi e) at alpha = 1.
inline double mu_bound(double alpha, double alpha_star)
{
    if (!(alpha > 0.5) || !(alpha_star > 0.5) || !are_conjugate(alpha, alpha_star))
        throw std::domain_error("mu_bound: indices are not conjugate");
    return std::log(std::numbers::pi) + detail::bound_exponent_term(alpha) + detail::bound_exponent_term(alpha_star);
}

struct UncertaintyAudit {
    double alpha = 1.0;
    double alpha_star = 1.0;
    EntropyResult position;         // R_alpha[psi]
    EntropyResult auxiliary;        // R_alpha*[phi]
    EntropyResult actual;           // R_alpha*[phi~]
    double sum_fourier = 0.0;       // R_alpha[psi] + R_alpha*[phi]
    double sum_actual = 0.0;        // R_alpha[psi] + R_alpha*[phi~]
    double bound = 0.0;
    double margin_fourier = 0.0;    // sum_fourier - bound
    double margin_actual = 0.0;     // sum_actual - bound
};

/// Position/momentum entropy sums for one state against the Maassen-Uffink
/// bound, both for the Fourier pair (psi, phi) and the physical pair (psi, phi~).
inline UncertaintyAudit audit(const QuantumState& state, double alpha, const EntropyOptions& opt = {})
{
    UncertaintyAudit a;
    a.alpha = alpha;
    a.alpha_star = conjugate_index(alpha);
    if (!are_conjugate(a.alpha, a.alpha_star))
        throw std::domain_error("audit: conjugate index lost precision");
    a.bound = mu_bound(a.alpha, a.alpha_star);
    a.position = entropy(density(state, Space::X), a.alpha, opt);
    a.auxiliary = entropy(density(state, Space::Q), a.alpha_star, opt);
    a.actual = entropy(density(state, Space::K), a.alpha_star, opt);
    a.sum_fourier = a.position.value + a.auxiliary.value;
    a.sum_actual = a.position.value + a.actual.value;
    a.margin_fourier = a.sum_fourier - a.bound;
    a.margin_actual = a.sum_actual - a.bound;
    return a;
}

} // namespace minlen
