#pragma once

// Special functions for the deformed oscillator: Gegenbauer polynomials of
// real order, log-gamma, and spherical Bessel sequences used by the
// oscillatory quadrature.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace minlen::specfun {

/// Gegenbauer (ultraspherical) polynomial C_n^{(lambda)}(x) by forward
/// three-term recurrence. Requires lambda > 0 and |x| <= 1.
inline double gegenbauer(int n, double lambda, double x)
{
    if (n < 0)
        throw std::domain_error("gegenbauer: degree must be non-negative");
    if (!(lambda > 0.0))
        throw std::domain_error("gegenbauer: order lambda must be positive");
    if (!(std::abs(x) <= 1.0))
        throw std::domain_error("gegenbauer: argument outside [-1, 1]");

    if (n == 0)
        return 1.0;
    double prev = 1.0;
    double cur = 2.0 * lambda * x;
    for (int k = 2; k <= n; ++k) {
        const double next =
            (2.0 * x * (k + lambda - 1.0) * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// d/dx C_n^{(lambda)}(x) = 2 lambda C_{n-1}^{(lambda+1)}(x).
inline double gegenbauer_derivative(int n, double lambda, double x)
{
    if (n == 0) {
        // still validate the arguments
        (void)gegenbauer(0, lambda, x);
        return 0.0;
    }
    return 2.0 * lambda * gegenbauer(n - 1, lambda + 1.0, x);
}

namespace detail {

// Lanczos approximation, g = 7, nine terms.
inline constexpr std::array<double, 9> lanczos_coeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

inline double log_gamma_lanczos(double z)
{
    // z >= 0.5
    const double zm1 = z - 1.0;
    double sum = lanczos_coeffs[0];
    for (std::size_t i = 1; i < lanczos_coeffs.size(); ++i)
        sum += lanczos_coeffs[i] / (zm1 + static_cast<double>(i));
    const double t = zm1 + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (zm1 + 0.5) * std::log(t) - t + std::log(sum);
}

inline double log_gamma_stirling(double z)
{
    // z >= 10; truncation error of the asymptotic series is below 1e-15 there.
    const double inv = 1.0 / z;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 / 12.0 +
               inv2 * (-1.0 / 360.0 +
                       inv2 * (1.0 / 1260.0 +
                               inv2 * (-1.0 / 1680.0 +
                                       inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))));
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

} // namespace detail

/// ln Gamma(z) for z > 0.
inline double log_gamma(double z)
{
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::domain_error("log_gamma: argument must be positive and finite");
    if (z == 1.0 || z == 2.0)
        return 0.0;
    if (z >= 10.0)
        return detail::log_gamma_stirling(z);
    if (z >= 0.5)
        return detail::log_gamma_lanczos(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * z)) -
           detail::log_gamma_lanczos(1.0 - z);
}

/// Fills out[l] = j_l(z) for l = 0 .. out.size()-1.
///
/// Power series for |z| <= 1, upward recurrence once |z| exceeds the highest
/// order, Miller's downward recurrence in between.
inline void spherical_bessel_j(double z, std::span<double> out)
{
    const int count = static_cast<int>(out.size());
    if (count == 0)
        return;
    const double sign_flip = z < 0.0 ? -1.0 : 1.0;
    const double az = std::abs(z);
    const int lmax = count - 1;

    if (az <= 1.0) {
        // j_l(z) = z^l/(2l+1)!! * sum_k (-z^2/2)^k / (k! prod_{i=1..k} (2l+2i+1))
        const double h = -0.5 * az * az;
        double lead = 1.0; // z^l / (2l+1)!!
        for (int l = 0; l <= lmax; ++l) {
            if (l > 0)
                lead *= az / (2.0 * l + 1.0);
            double term = 1.0;
            double sum = 1.0;
            for (int k = 1; k < 40; ++k) {
                term *= h / (k * (2.0 * l + 2.0 * k + 1.0));
                sum += term;
                if (std::abs(term) < 1e-17 * std::abs(sum))
                    break;
            }
            out[l] = lead * sum;
        }
    } else if (az >= static_cast<double>(lmax)) {
        const double s = std::sin(az);
        const double c = std::cos(az);
        out[0] = s / az;
        if (lmax >= 1)
            out[1] = s / (az * az) - c / az;
        for (int l = 1; l < lmax; ++l)
            out[l + 1] = (2.0 * l + 1.0) / az * out[l] - out[l - 1];
    } else {
        const int start = lmax + 20 + static_cast<int>(std::sqrt(40.0 * (lmax + 1)));
        double above = 0.0;
        double cur = 1e-30;
        for (int l = start; l >= 0; --l) {
            if (l <= lmax)
                out[l] = cur;
            const double below = (2.0 * l + 1.0) / az * cur - above;
            above = cur;
            cur = below;
            if (std::abs(cur) > 1e250) {
                above *= 1e-250;
                cur *= 1e-250;
                for (int m = l; m <= lmax && m >= 0; ++m)
                    out[m] *= 1e-250;
            }
        }
        // normalize against whichever of j_0, j_1 is better conditioned
        const double s = std::sin(az);
        const double c = std::cos(az);
        const double j0 = s / az;
        const double j1 = s / (az * az) - c / az;
        const double scale = std::abs(j0) >= std::abs(j1) || lmax == 0 ? j0 / out[0] : j1 / out[1];
        for (int l = 0; l <= lmax; ++l)
            out[l] *= scale;
    }

    if (sign_flip < 0.0)
        for (int l = 1; l <= lmax; l += 2)
            out[l] = -out[l];
}

} // namespace minlen::specfun
