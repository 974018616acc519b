#pragma once

// Sampled wavefunctions for plotting.

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "minlen/oscillator.hpp"
#include "minlen/report.hpp"

namespace minlen {

struct GridSpec {
    double from = 0.0;
    double to = 0.0;
    int points = 0;
};

struct WavefunctionSample {
    double point = 0.0;
    double density = 0.0; // |amplitude|^2
    double re = 0.0;
    double im = 0.0;
};

/// Default grid: the closed support in Q, [-8 sigma, 8 sigma]-ish windows elsewhere.
inline GridSpec default_grid(const QuantumState& s, Space space, int points)
{
    const double h = s.params().q_half_width();
    switch (space) {
    case Space::Q: return {-h, h, points};
    case Space::K: {
        const double w = 6.0 * std::sqrt(2.0 * s.n() + 1.0);
        return {-w, w, points};
    }
    case Space::X: {
        const double w = 8.0 * std::sqrt(2.0 * s.n() + 1.0);
        return {-w, w, points};
    }
    }
    return {};
}

/// Samples the amplitude of `space` on an evenly spaced grid, in grid order.
/// Q-space points outside the closed support are rejected.
inline std::vector<WavefunctionSample> sample_wavefunction(const QuantumState& s, Space space, const GridSpec& g)
{
    if (g.points < 2)
        throw std::invalid_argument("wavefunction grid needs at least 2 points");
    if (!(g.from < g.to) || !std::isfinite(g.from) || !std::isfinite(g.to))
        throw std::invalid_argument("wavefunction grid needs finite from < to");
    const double h = s.params().q_half_width();
    if (space == Space::Q && (g.from < -h || g.to > h))
        throw std::invalid_argument("Q-space grid leaves the support (-" + format_number(h) + ", " +
                                    format_number(h) + ")");
    std::vector<WavefunctionSample> out;
    out.reserve(static_cast<std::size_t>(g.points));
    for (int i = 0; i < g.points; ++i) {
        const double u = i + 1 == g.points ? g.to : g.from + (g.to - g.from) * i / (g.points - 1);
        std::complex<double> amp;
        switch (space) {
        case Space::Q: amp = s.phi_q(u); break;
        case Space::K: amp = s.phi_k(u); break;
        case Space::X: amp = s.psi_x(u); break;
        }
        out.push_back({u, std::norm(amp), amp.real(), amp.imag()});
    }
    return out;
}

inline void write_wavefunction_csv(std::ostream& os, const std::vector<WavefunctionSample>& rows)
{
    os << "point,density,re,im\n";
    for (const auto& r : rows)
        os << format_number(r.point) << ',' << format_number(r.density) << ',' << format_number(r.re) << ','
           << format_number(r.im) << '\n';
}

} // namespace minlen
