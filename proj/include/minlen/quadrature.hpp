#pragma once

// Adaptive quadrature engines.
//
//  * integrate_finite: globally adaptive Gauss-Legendre panels. Each panel is
//    integrated with a 15-point and a 31-point rule; the 31-point value is
//    kept and the difference serves as the local error estimate.
//  * integrate_real_line: maps the real line onto a finite interval and
//    delegates to integrate_finite.
//  * fourier_finite / FourierExpansion: integrals of e^{iqx} g(q) over a
//    finite interval. For strongly oscillating cases g is expanded per panel
//    in Legendre polynomials and the oscillatory factor is integrated exactly
//    through spherical Bessel functions (a Filon-type rule).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "minlen/specfun.hpp"

namespace minlen::quad {

using complex = std::complex<double>;

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error_estimate = 0.0;
    std::size_t evaluations = 0;

    bool converged(double tol) const { return error_estimate < tol; }
};

struct QuadratureOptions {
    std::size_t max_evaluations = 1'000'000;
    /// Uniform panels the interval is split into before adapting.
    int initial_panels = 1;
    /// Geometric grading levels toward each endpoint (panel widths halve).
    int grading_levels = 0;
    /// Relative tolerance, combined with the absolute one as max(abs, rel*|I|).
    double rel_tol = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial and cached per order.
template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    static const GaussLegendre& get()
    {
        static const GaussLegendre rule = make();
        return rule;
    }

private:
    static GaussLegendre make()
    {
        GaussLegendre r;
        for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = x;
                for (std::size_t k = 2; k <= N; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            // final derivative at the converged node
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= N; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            r.nodes[i] = -x;
            r.weights[i] = w;
            r.nodes[N - 1 - i] = x;
            r.weights[N - 1 - i] = w;
        }
        if constexpr (N % 2 == 1)
            r.nodes[N / 2] = 0.0;
        return r;
    }
};

namespace detail {

template <class T>
double magnitude(const T& v)
{
    return std::abs(v);
}

template <class T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
    bool splittable;

    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> integrate_panel(const F& f, double a, double b)
{
    const auto& lo = GaussLegendre<15>::get();
    const auto& hi = GaussLegendre<31>::get();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T low{};
    T high{};
    for (std::size_t i = 0; i < 15; ++i)
        low += lo.weights[i] * static_cast<T>(f(c + h * lo.nodes[i]));
    for (std::size_t i = 0; i < 31; ++i)
        high += hi.weights[i] * static_cast<T>(f(c + h * hi.nodes[i]));
    low *= h;
    high *= h;
    const double width_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    return {a, b, high, magnitude(high - low), (b - a) > std::max(width_floor, 1e-300)};
}

inline std::vector<double> initial_breakpoints(double a, double b, const QuadratureOptions& opt)
{
    std::vector<double> pts;
    const int panels = std::max(1, opt.initial_panels);
    for (int i = 0; i <= panels; ++i)
        pts.push_back(a + (b - a) * static_cast<double>(i) / panels);
    pts.back() = b;
    if (opt.grading_levels > 0) {
        const double w = (b - a) / panels;
        for (int k = 1; k <= opt.grading_levels; ++k) {
            const double d = w * std::ldexp(1.0, -k);
            pts.push_back(a + d);
            pts.push_back(b - d);
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }
    return pts;
}

} // namespace detail

/// Adaptive integral of f over [a, b] to absolute tolerance tol. Works for
/// real- and complex-valued integrands. Throws QuadratureError when the
/// evaluation budget runs out before the error estimate drops below tol.
template <class F>
auto integrate_finite(const F& f, double a, double b, double tol, const QuadratureOptions& opt = {})
{
    using T = std::conditional_t<std::is_convertible_v<std::invoke_result_t<F, double>, double>, double,
                                 complex>;
    if (!(a < b))
        throw std::domain_error("integrate_finite: requires a < b");
    if (!(tol > 0.0))
        throw std::domain_error("integrate_finite: tolerance must be positive");

    constexpr std::size_t evals_per_panel = 46;
    std::priority_queue<detail::Panel<T>> work;
    std::vector<detail::Panel<T>> done;
    T total{};
    double total_err = 0.0;
    std::size_t evals = 0;

    const auto pts = detail::initial_breakpoints(a, b, opt);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto p = detail::integrate_panel<T>(f, pts[i], pts[i + 1]);
        evals += evals_per_panel;
        total += p.value;
        total_err += p.error;
        work.push(p);
    }

    auto target = [&] { return std::max(tol, opt.rel_tol * detail::magnitude(total)); };

    while (total_err >= target() && !work.empty()) {
        auto worst = work.top();
        work.pop();
        if (!worst.splittable) {
            done.push_back(worst);
            continue;
        }
        if (evals + 2 * evals_per_panel > opt.max_evaluations)
            throw QuadratureError("integrate_finite: evaluation budget exhausted (error estimate " +
                                  std::to_string(total_err) + ", tolerance " + std::to_string(target()) +
                                  ")");
        const double m = 0.5 * (worst.a + worst.b);
        auto left = detail::integrate_panel<T>(f, worst.a, m);
        auto right = detail::integrate_panel<T>(f, m, worst.b);
        evals += 2 * evals_per_panel;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
    }

    // re-sum to shed the cancellation drift of the running totals
    T sum{};
    double err = 0.0;
    while (!work.empty()) {
        sum += work.top().value;
        err += work.top().error;
        work.pop();
    }
    for (const auto& p : done) {
        sum += p.value;
        err += p.error;
    }
    if (err >= target() && !done.empty())
        throw QuadratureError("integrate_finite: panels reached machine resolution without converging");
    return QuadratureResult<T>{sum, err, evals};
}

/// Substitution used to bring the real line onto a finite interval.
struct RealLineMap {
    enum class Kind {
        /// k = tan(s u) / s on u in (-pi/(2s), pi/(2s)); dk/du = 1 + s^2 k^2.
        tangent,
        /// k = s * atanh(u) on u in (-1, 1); dk/du = s / (1 - u^2).
        hyperbolic,
    };
    Kind kind = Kind::hyperbolic;
    double scale = 1.0;

    static RealLineMap tangent(double s) { return {Kind::tangent, s}; }
    static RealLineMap hyperbolic(double s = 1.0) { return {Kind::hyperbolic, s}; }

    double half_width() const
    {
        return kind == Kind::tangent ? std::numbers::pi / (2.0 * scale) : 1.0;
    }
    double to_line(double u) const
    {
        return kind == Kind::tangent ? std::tan(scale * u) / scale : scale * std::atanh(u);
    }
    double jacobian(double u) const
    {
        if (kind == Kind::tangent) {
            const double c = std::cos(scale * u);
            return 1.0 / (c * c);
        }
        return scale / (1.0 - u * u);
    }
};

/// Where a density or integrand lives.
struct IntegrationDomain {
    enum class Kind { finite, real_line };
    Kind kind = Kind::finite;
    double lower = 0.0;
    double upper = 0.0;
    /// Substitution for mapped real-line integrals; empty means the caller
    /// truncates the line itself (see the entropy module's cutoff protocol).
    std::optional<RealLineMap> map;

    static IntegrationDomain finite(double a, double b)
    {
        if (!(a < b))
            throw std::domain_error("IntegrationDomain: finite domain requires a < b");
        return {Kind::finite, a, b, std::nullopt};
    }
    static IntegrationDomain real_line(std::optional<RealLineMap> m = std::nullopt)
    {
        return {Kind::real_line, -std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity(), m};
    }
};

namespace detail {

template <class F>
auto mapped_integrand(const F& f, RealLineMap map)
{
    return [&f, map](double u) {
        const double jac = map.jacobian(u);
        if (!std::isfinite(jac))
            return 0.0;
        const double v = static_cast<double>(f(map.to_line(u)));
        return v == 0.0 ? 0.0 : v * jac;
    };
}

} // namespace detail

/// Integral of f over the real line through the given substitution.
/// With symmetric = true, f is taken to be even and only u >= 0 is sampled.
template <class F>
QuadratureResult<double> integrate_real_line(const F& f, double tol, RealLineMap map,
                                             QuadratureOptions opt = {}, bool symmetric = false)
{
    const auto g = detail::mapped_integrand(f, map);
    const double h = map.half_width();
    if (symmetric) {
        auto r = integrate_finite(g, 0.0, h, 0.5 * tol, opt);
        return {2.0 * r.value, 2.0 * r.error_estimate, r.evaluations};
    }
    return integrate_finite(g, -h, h, tol, opt);
}

/// Legendre expansion of g over an adaptive partition of [a, b], giving
/// int_a^b e^{iqx} g(q) dq for any x at a cost independent of g.
///
/// Per panel q = c + h t, g(q) ~ sum_j c_j P_j(t), and
///   int_{-1}^{1} e^{i w t} P_j(t) dt = 2 i^j j_j(w).
class FourierExpansion {
public:
    static constexpr std::size_t degree = 24;

    template <class G>
    static FourierExpansion build(const G& g, double a, double b, double tol, const QuadratureOptions& opt = {})
    {
        if (!(a < b))
            throw std::domain_error("FourierExpansion: requires a < b");
        FourierExpansion fe;
        std::priority_queue<Entry> work;
        double total_err = 0.0;
        const auto pts = detail::initial_breakpoints(a, b, opt);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            auto e = fit(g, pts[i], pts[i + 1]);
            fe.evaluations_ += degree;
            total_err += e.error;
            work.push(e);
        }
        std::vector<Entry> frozen;
        while (total_err >= tol && !work.empty()) {
            auto worst = work.top();
            work.pop();
            const double m = worst.panel.center;
            const double lo = m - worst.panel.half_width;
            const double hi = m + worst.panel.half_width;
            if (worst.panel.half_width < 32.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
                frozen.push_back(worst);
                continue;
            }
            if (fe.evaluations_ + 2 * degree > opt.max_evaluations)
                throw QuadratureError("FourierExpansion: evaluation budget exhausted");
            auto l = fit(g, lo, m);
            auto r = fit(g, m, hi);
            fe.evaluations_ += 2 * degree;
            total_err += l.error + r.error - worst.error;
            work.push(l);
            work.push(r);
        }
        double err = 0.0;
        while (!work.empty()) {
            frozen.push_back(work.top());
            work.pop();
        }
        std::sort(frozen.begin(), frozen.end(),
                  [](const Entry& x, const Entry& y) { return x.panel.center < y.panel.center; });
        for (const auto& e : frozen) {
            err += e.error;
            fe.panels_.push_back(e.panel);
        }
        if (err >= tol)
            throw QuadratureError("FourierExpansion: could not resolve integrand to tolerance");
        fe.error_ = err;
        return fe;
    }

    /// int_a^b e^{iqx} g(q) dq.
    complex transform(double x) const
    {
        std::array<double, degree> bessel{};
        complex total{};
        for (const auto& p : panels_) {
            specfun::spherical_bessel_j(x * p.half_width, bessel);
            // sum_j c_j i^j j_j, split by j mod 4
            double re = 0.0;
            double im = 0.0;
            for (std::size_t j = 0; j < degree; ++j) {
                const double t = p.coeffs[j] * bessel[j];
                switch (j % 4) {
                case 0: re += t; break;
                case 1: im += t; break;
                case 2: re -= t; break;
                default: im -= t; break;
                }
            }
            const double phase = x * p.center;
            total += 2.0 * p.half_width * complex(std::cos(phase), std::sin(phase)) * complex(re, im);
        }
        return total;
    }

    /// Bound on int |g - expansion|, which bounds the transform error for every x.
    double error_estimate() const { return error_; }
    std::size_t evaluations() const { return evaluations_; }
    std::size_t panel_count() const { return panels_.size(); }

private:
    struct Panel {
        double center;
        double half_width;
        std::array<double, degree> coeffs;
    };
    struct Entry {
        Panel panel;
        double error;
        bool operator<(const Entry& o) const { return error < o.error; }
    };

    template <class G>
    static Entry fit(const G& g, double a, double b)
    {
        const auto& rule = GaussLegendre<degree>::get();
        Entry e{{0.5 * (a + b), 0.5 * (b - a), {}}, 0.0};
        e.panel.coeffs.fill(0.0);
        for (std::size_t i = 0; i < degree; ++i) {
            const double t = rule.nodes[i];
            const double wg = rule.weights[i] * static_cast<double>(g(e.panel.center + e.panel.half_width * t));
            double p0 = 1.0;
            double p1 = t;
            e.panel.coeffs[0] += wg;
            e.panel.coeffs[1] += wg * t;
            for (std::size_t j = 2; j < degree; ++j) {
                const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                e.panel.coeffs[j] += wg * p2;
                p0 = p1;
                p1 = p2;
            }
        }
        for (std::size_t j = 0; j < degree; ++j)
            e.panel.coeffs[j] *= (2.0 * j + 1.0) / 2.0;
        // trailing coefficients stand in for the truncated tail
        double tail = 0.0;
        for (std::size_t j = degree - 4; j < degree; ++j)
            tail += std::abs(e.panel.coeffs[j]);
        e.error = 2.0 * e.panel.half_width * tail;
        return e;
    }

    std::vector<Panel> panels_;
    double error_ = 0.0;
    std::size_t evaluations_ = 0;
};

/// Threshold on |x| (b - a) above which fourier_finite switches to the
/// Legendre/Bessel rule.
inline constexpr double oscillatory_threshold = 50.0;

/// int_a^b e^{iqx} g(q) dq.
template <class G>
QuadratureResult<complex> fourier_finite(const G& g, double a, double b, double x, double tol,
                                         const QuadratureOptions& opt = {},
                                         double threshold = oscillatory_threshold)
{
    if (!(a < b))
        throw std::domain_error("fourier_finite: requires a < b");
    if (std::abs(x) * (b - a) <= threshold) {
        auto integrand = [&g, x](double q) { return complex(std::cos(q * x), std::sin(q * x)) * static_cast<double>(g(q)); };
        return integrate_finite(integrand, a, b, tol, opt);
    }
    const auto fe = FourierExpansion::build(g, a, b, tol, opt);
    return {fe.transform(x), fe.error_estimate(), fe.evaluations()};
}

} // namespace minlen::quad
