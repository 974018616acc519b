#pragma once

// Harmonic oscillator under the deformed commutator [x, k] = i hbar (1 + beta k^2).
//
// Auxiliary momentum q relates to the actual momentum by k = tan(sqrt(beta) q)/sqrt(beta),
// so the eigenfunctions phi_n(q) live on (-pi/(2 sqrt(beta)), pi/(2 sqrt(beta))).

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "minlen/density.hpp"
#include "minlen/quadrature.hpp"
#include "minlen/specfun.hpp"

namespace minlen {

struct OscillatorParams {
    double hbar = 1.0;
    double mass = 1.0;
    double omega = 1.0;
    double beta = 0.1;

    /// hbar = m = omega = 1, so eta == beta.
    static OscillatorParams natural(double beta) { return OscillatorParams{1.0, 1.0, 1.0, beta}.validated(); }

    OscillatorParams validated() const
    {
        if (!(hbar > 0.0) || !(mass > 0.0) || !(omega > 0.0) || !(beta > 0.0) || !std::isfinite(hbar) ||
            !std::isfinite(mass) || !std::isfinite(omega) || !std::isfinite(beta))
            throw std::domain_error("OscillatorParams: hbar, mass, omega and beta must be positive and finite");
        return *this;
    }

    double sqrt_beta() const { return std::sqrt(beta); }
    double eta() const { return mass * hbar * omega * beta; }
    double lambda() const
    {
        const double e = eta();
        return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 / (e * e)));
    }
    double minimal_length() const { return hbar * sqrt_beta(); }
    double q_half_width() const { return std::numbers::pi / (2.0 * sqrt_beta()); }
};

namespace detail {

struct PositionCache {
    std::once_flag once;
    std::optional<quad::FourierExpansion> expansion;
    std::exception_ptr failure;
};

} // namespace detail

/// Energy eigenstate n of the deformed oscillator. Immutable; copies share
/// the lazily built position-space transform.
class QuantumState {
public:
    /// Absolute tolerance on int |phi_n - expansion| dq behind psi_x.
    static constexpr double default_fourier_tol = 1e-12;

    QuantumState(int n, OscillatorParams params, double fourier_tol = default_fourier_tol)
        : n_(n), params_(params.validated()), fourier_tol_(fourier_tol),
          cache_(std::make_shared<detail::PositionCache>())
    {
        if (n < 0)
            throw std::domain_error("QuantumState: quantum number must be non-negative");
        lambda_ = params_.lambda();
        const double lam = lambda_;
        const double log_n2 = 0.5 * std::log(params_.beta) + 2.0 * specfun::log_gamma(lam) +
                              specfun::log_gamma(n + 1.0) + std::log(n + lam) - std::log(std::numbers::pi) -
                              (1.0 - 2.0 * lam) * std::numbers::ln2 - specfun::log_gamma(n + 2.0 * lam);
        norm_ = std::exp(0.5 * log_n2);
    }

    int n() const { return n_; }
    const OscillatorParams& params() const { return params_; }
    double lambda() const { return lambda_; }

    /// E_n = hbar omega (n + 1/2)(sqrt(1 + eta^2/4) + eta/2) + hbar omega n^2 eta / 2.
    double energy() const
    {
        const double e = params_.eta();
        const double hw = params_.hbar * params_.omega;
        return hw * (n_ + 0.5) * (std::sqrt(1.0 + 0.25 * e * e) + 0.5 * e) + 0.5 * hw * n_ * n_ * e;
    }

    /// N_n, evaluated in log space.
    double norm_const() const { return norm_; }

    /// phi_n(q) = N_n C_n^(lambda)(sin(sqrt(beta) q)) cos^lambda(sqrt(beta) q); zero off the support.
    double phi_q(double q) const
    {
        const double h = params_.q_half_width();
        if (!(std::abs(q) < h))
            return 0.0;
        const double t = params_.sqrt_beta() * q;
        const double c = std::cos(t);
        if (c <= 0.0)
            return 0.0;
        return norm_ * specfun::gegenbauer(n_, lambda_, std::clamp(std::sin(t), -1.0, 1.0)) * cos_power(t, lambda_);
    }

    /// d phi_n / dq.
    double phi_q_derivative(double q) const
    {
        const double h = params_.q_half_width();
        if (!(std::abs(q) < h))
            return 0.0;
        const double s = params_.sqrt_beta();
        const double u = std::clamp(std::sin(s * q), -1.0, 1.0);
        const double c = std::cos(s * q);
        if (c <= 0.0)
            return 0.0;
        const double cg = specfun::gegenbauer(n_, lambda_, u);
        const double dcg = specfun::gegenbauer_derivative(n_, lambda_, u);
        return norm_ * s * cos_power(s * q, lambda_ - 1.0) * (dcg * c * c - lambda_ * cg * u);
    }

    /// phi~_n(k) = N_n C_n^(lambda)(sqrt(beta) k / sqrt(1 + beta k^2)) (1 + beta k^2)^{-(lambda+1)/2}.
    double phi_k(double k) const
    {
        const double s = params_.sqrt_beta();
        const double sk = s * k;
        if (!std::isfinite(sk))
            return 0.0;
        const double r = std::hypot(1.0, sk);
        const double u = std::clamp(sk / r, -1.0, 1.0);
        // (1 + beta k^2)^{-(lambda+1)/2}, kept accurate for large lambda
        const double decay = std::exp(-0.5 * (lambda_ + 1.0) * std::log1p(sk * sk));
        return norm_ * specfun::gegenbauer(n_, lambda_, u) * decay;
    }

    /// q(k) = arctan(sqrt(beta) k) / sqrt(beta).
    double q_of_k(double k) const { return std::atan(params_.sqrt_beta() * k) / params_.sqrt_beta(); }
    double k_of_q(double q) const { return std::tan(params_.sqrt_beta() * q) / params_.sqrt_beta(); }

    /// psi_n(x) = (2 pi)^{-1/2} int e^{iqx} phi_n(q) dq over the support.
    std::complex<double> psi_x(double x) const
    {
        return position_expansion().transform(x) / std::sqrt(2.0 * std::numbers::pi);
    }

    /// Bound on the absolute error of psi_x at any point.
    double psi_error_bound() const
    {
        return position_expansion().error_estimate() / std::sqrt(2.0 * std::numbers::pi);
    }

    /// <x^2> = int |phi_n'(q)|^2 dq (x acts as -i d/dq; <x> = 0 by parity).
    double position_variance(double tol = 1e-10) const
    {
        const double h = params_.q_half_width();
        auto f = [this](double q) {
            const double d = phi_q_derivative(q);
            return d * d;
        };
        quad::QuadratureOptions opt;
        opt.initial_panels = initial_panels();
        opt.grading_levels = 8;
        return 2.0 * quad::integrate_finite(f, 0.0, h, 0.5 * tol, opt).value;
    }

    /// Uniform panels used to seed q-space integrals: keeps the panels
    /// narrower than the bulk of phi_n when lambda is large.
    int initial_panels() const
    {
        const double lb = lambda_ * params_.beta;
        const double bulk = 1.0 / std::sqrt(lb * (2.0 * n_ + 1.0));
        const double span = 2.0 * params_.q_half_width();
        return static_cast<int>(std::clamp(std::ceil(span / bulk), 8.0, 4096.0));
    }

    const quad::FourierExpansion& position_expansion() const
    {
        auto& c = *cache_;
        std::call_once(c.once, [&] {
            try {
                const double h = params_.q_half_width();
                quad::QuadratureOptions opt;
                opt.initial_panels = initial_panels();
                opt.grading_levels = 4;
                opt.max_evaluations = 4'000'000;
                c.expansion = quad::FourierExpansion::build([this](double q) { return phi_q(q); }, -h, h,
                                                            fourier_tol_, opt);
            } catch (...) {
                c.failure = std::current_exception();
            }
        });
        if (c.failure)
            std::rethrow_exception(c.failure);
        return *c.expansion;
    }

private:
    // cos^p(t) via log1p(-2 sin^2(t/2)); plain pow loses ~p ulps for large p
    static double cos_power(double t, double p)
    {
        const double h = std::sin(0.5 * t);
        return std::exp(p * std::log1p(-2.0 * h * h));
    }

    int n_;
    OscillatorParams params_;
    double fourier_tol_;
    double lambda_ = 0.0;
    double norm_ = 0.0;
    std::shared_ptr<detail::PositionCache> cache_;
};

inline double energy(const QuantumState& s) { return s.energy(); }
inline double norm_const(const QuantumState& s) { return s.norm_const(); }

/// |phi_n|^2, |phi~_n|^2 or |psi_n|^2 packaged with its domain.
inline ProbabilityDensity density(const QuantumState& state, Space space)
{
    ProbabilityDensity d;
    d.space = space;
    d.even = true;
    d.n = state.n();
    d.beta = state.params().beta;
    const double h = state.params().q_half_width();
    const double q_bulk = 2.0 * h / state.initial_panels();
    switch (space) {
    case Space::Q:
        d.domain = quad::IntegrationDomain::finite(-h, h);
        d.rho = [state](double q) {
            const double v = state.phi_q(q);
            return v * v;
        };
        d.width = q_bulk;
        break;
    case Space::K:
        d.domain = quad::IntegrationDomain::real_line(quad::RealLineMap::tangent(state.params().sqrt_beta()));
        d.rho = [state](double k) {
            const double v = state.phi_k(k);
            return v * v;
        };
        // in the mapped variable the bulk has the q-space width
        d.width = q_bulk;
        break;
    case Space::X: {
        // build (or fail) now rather than inside an integrator
        (void)state.position_expansion();
        d.domain = quad::IntegrationDomain::real_line();
        d.rho = [state](double x) { return std::norm(state.psi_x(x)); };
        d.width = std::sqrt(state.position_variance());
        // |psi|^2 beats with period pi / h in its algebraic tail
        d.oscillation_length = std::numbers::pi / h;
        break;
    }
    }
    return d;
}

} // namespace minlen
