#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "minlen/quadrature.hpp"

namespace minlen {

/// Auxiliary momentum (Q), actual momentum (K), position (X).
enum class Space { Q, K, X };

inline std::string_view to_string(Space s)
{
    switch (s) {
    case Space::Q: return "Q";
    case Space::K: return "K";
    case Space::X: return "X";
    }
    return "?";
}

inline Space parse_space(std::string_view s)
{
    if (s == "Q" || s == "q")
        return Space::Q;
    if (s == "K" || s == "k")
        return Space::K;
    if (s == "X" || s == "x")
        return Space::X;
    throw std::invalid_argument("unknown space '" + std::string(s) + "' (expected Q, K or X)");
}

/// A normalized probability density together with what the integrators
/// need to know about its domain.
struct ProbabilityDensity {
    Space space = Space::Q;
    std::function<double(double)> rho;
    quad::IntegrationDomain domain;
    /// rho(-u) == rho(u); lets integrators work on u >= 0 only.
    bool even = false;
    /// Length scale of the bulk of the density (panel sizing; for unmapped
    /// real-line domains also the starting cutoff scale).
    double width = 1.0;
    /// Shortest length over which rho oscillates, if it does (panel sizing).
    std::optional<double> oscillation_length;
    /// Labels carried into entropy results.
    std::optional<int> n;
    std::optional<double> beta;

    double operator()(double u) const { return rho(u); }

    static ProbabilityDensity uniform(double a, double b)
    {
        const double h = 1.0 / (b - a);
        ProbabilityDensity d;
        d.space = Space::X;
        d.domain = quad::IntegrationDomain::finite(a, b);
        d.rho = [a, b, h](double u) { return (u >= a && u <= b) ? h : 0.0; };
        d.width = b - a;
        return d;
    }
};

} // namespace minlen
