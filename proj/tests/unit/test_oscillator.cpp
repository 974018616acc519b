#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <thread>
#include <vector>

#include "minlen/entropy.hpp"
#include "minlen/oscillator.hpp"

using Catch::Approx;
using namespace minlen;

namespace {

const double table_betas[] = {0.1, 0.5, 1.0};

template <class F>
double midpoint(const F& f, double a, double b, long panels)
{
    const double h = (b - a) / static_cast<double>(panels);
    double sum = 0.0;
    for (long i = 0; i < panels; ++i)
        sum += f(a + (static_cast<double>(i) + 0.5) * h);
    return sum * h;
}

// 1/sqrt(int C_n^2 cos^{2 lambda}) by brute force, independent of log_gamma.
double brute_force_norm(int n, double beta)
{
    const auto p = OscillatorParams::natural(beta);
    const double s = std::sqrt(beta);
    const double lam = p.lambda();
    const double h = p.q_half_width();
    const double integral = midpoint(
        [&](double q) {
            const double c = specfun::gegenbauer(n, lam, std::sin(s * q));
            return c * c * std::pow(std::cos(s * q), 2.0 * lam);
        },
        -h, h, 1'000'000);
    return 1.0 / std::sqrt(integral);
}

} // namespace

TEST_CASE("derived oscillator parameters", "[oscillator]")
{
    const auto p = OscillatorParams::natural(1.0);
    CHECK(p.eta() == 1.0);
    CHECK(p.lambda() == Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
    CHECK(p.minimal_length() == 1.0);
    CHECK(p.q_half_width() == Approx(std::numbers::pi / 2.0));

    const OscillatorParams explicit_units{2.0, 0.5, 3.0, 0.25};
    CHECK(explicit_units.eta() == Approx(0.75));
    CHECK(explicit_units.minimal_length() == Approx(1.0));
    for (double b : {1e-4, 0.1, 0.5, 1.0, 10.0})
        CHECK(OscillatorParams::natural(b).lambda() > 1.0);
}

TEST_CASE("invalid parameters and states are rejected", "[oscillator]")
{
    CHECK_THROWS_AS(OscillatorParams::natural(0.0), std::domain_error);
    CHECK_THROWS_AS(OscillatorParams::natural(-0.1), std::domain_error);
    CHECK_THROWS_AS((OscillatorParams{0.0, 1.0, 1.0, 0.1}.validated()), std::domain_error);
    CHECK_THROWS_AS(QuantumState(-1, OscillatorParams::natural(0.1)), std::domain_error);
}

TEST_CASE("energy levels", "[oscillator]")
{
    CHECK(QuantumState(0, OscillatorParams::natural(1e-12)).energy() == Approx(0.5).epsilon(1e-10));
    CHECK(QuantumState(0, OscillatorParams::natural(1.0)).energy() == Approx(0.8090169943749475).epsilon(1e-14));
    CHECK(QuantumState(2, OscillatorParams::natural(0.5)).energy() == Approx(4.2019410160110375).epsilon(1e-14));
    // deformation lifts the standard levels
    for (int n = 0; n <= 5; ++n)
        CHECK(QuantumState(n, OscillatorParams::natural(0.5)).energy() > n + 0.5);
}

TEST_CASE("normalization constant matches brute-force normalization", "[oscillator]")
{
    const QuantumState g(0, OscillatorParams::natural(1.0));
    CHECK(g.norm_const() > 0.0);
    CHECK(g.norm_const() == Approx(brute_force_norm(0, 1.0)).epsilon(1e-8));
    CHECK(g.norm_const() == Approx(0.8800199286004835).epsilon(1e-10));

    const QuantumState e(3, OscillatorParams::natural(0.1));
    CHECK(e.norm_const() == Approx(brute_force_norm(3, 0.1)).epsilon(1e-8));

    // large lambda stays finite through log space
    const QuantumState tiny(2, OscillatorParams::natural(1e-6));
    CHECK(std::isfinite(tiny.norm_const()));
    CHECK(tiny.norm_const() > 0.0);
}

TEST_CASE("phi_q pointwise behaviour", "[oscillator]")
{
    for (double b : table_betas) {
        const QuantumState odd(1, OscillatorParams::natural(b));
        CHECK(odd.phi_q(0.0) == 0.0);
        const QuantumState g(0, OscillatorParams::natural(b));
        const double h = g.params().q_half_width();
        CHECK(g.phi_q(h) == 0.0);
        CHECK(g.phi_q(-h) == 0.0);
        CHECK(g.phi_q(2.0 * h) == 0.0);
        CHECK(std::abs(g.phi_q(h * (1.0 - 1e-9))) < 1e-12);
    }
    const QuantumState g(0, OscillatorParams::natural(1.0));
    CHECK(g.phi_q(0.0) == Approx(0.8800199286004835).epsilon(1e-10));
}

TEST_CASE("phi_k examples and the change-of-variables identity", "[oscillator]")
{
    for (double b : table_betas)
        for (int n = 0; n <= 5; ++n) {
            const QuantumState s(n, OscillatorParams::natural(b));
            if (n % 2)
                CHECK(s.phi_k(0.0) == 0.0);
            for (double k : {-40.0, -3.3, -0.7, 0.0, 0.25, 1.0, 5.5, 123.0}) {
                const double lhs = s.phi_k(k) * s.phi_k(k) * (1.0 + b * k * k);
                const double phi = s.phi_q(s.q_of_k(k));
                INFO("beta=" << b << " n=" << n << " k=" << k);
                CHECK(lhs == Approx(phi * phi).epsilon(1e-12).margin(1e-300));
                CHECK(std::abs(lhs - phi * phi) <= 1e-12);
            }
        }
}

TEST_CASE("parity of the momentum wavefunctions", "[oscillator][property]")
{
    for (double b : table_betas)
        for (int n = 0; n <= 5; ++n) {
            const QuantumState s(n, OscillatorParams::natural(b));
            const double sign = n % 2 ? -1.0 : 1.0;
            const double h = s.params().q_half_width();
            for (double f : {0.01, 0.2, 0.5, 0.77, 0.95, 0.999}) {
                CHECK(std::abs(s.phi_q(-f * h) - sign * s.phi_q(f * h)) <= 1e-12);
                const double k = std::tan(f * std::numbers::pi / 2.0);
                CHECK(std::abs(s.phi_k(-k) - sign * s.phi_k(k)) <= 1e-12);
            }
        }
}

TEST_CASE("psi_x examples", "[oscillator]")
{
    const QuantumState odd(1, OscillatorParams::natural(0.5));
    CHECK(std::abs(odd.psi_x(0.0)) < 1e-14);

    const QuantumState g(0, OscillatorParams::natural(0.1));
    CHECK(g.psi_error_bound() < 1e-10);
    const double h = g.params().q_half_width();
    const double brute = midpoint([&](double q) { return g.phi_q(q); }, -h, h, 1'000'000) /
                         std::sqrt(2.0 * std::numbers::pi);
    CHECK(std::abs(g.psi_x(0.0) - std::complex<double>(brute, 0.0)) < 1e-8);

    for (double b : table_betas)
        for (int n = 0; n <= 5; ++n) {
            const QuantumState s(n, OscillatorParams::natural(b));
            for (double x : {0.3, 1.7, 4.0, 12.5, 60.0}) {
                const auto plus = s.psi_x(x);
                CHECK(std::abs(std::abs(s.psi_x(-x)) - std::abs(plus)) <= 1e-12);
                // real for even n, imaginary for odd n
                CHECK(std::abs(n % 2 ? plus.real() : plus.imag()) <= 1e-12);
            }
        }
}

TEST_CASE("standard oscillator recovered as beta -> 0", "[oscillator]")
{
    const QuantumState g(0, OscillatorParams::natural(1e-4));
    for (double x = -4.0; x <= 4.0; x += 0.25) {
        const double gaussian = std::exp(-x * x) / std::sqrt(std::numbers::pi);
        CHECK(std::abs(std::norm(g.psi_x(x)) - gaussian) < 1e-3);
    }
}

TEST_CASE("densities are normalized", "[oscillator]")
{
    EntropyOptions opt;
    opt.tol = 1e-10;
    opt.cutoff_change = 1e-10;
    for (double b : table_betas)
        for (int n = 0; n <= 5; ++n) {
            const QuantumState s(n, OscillatorParams::natural(b));
            INFO("beta=" << b << " n=" << n);
            for (Space sp : {Space::Q, Space::K, Space::X})
                CHECK(probability_mass(density(s, sp), opt).value == Approx(1.0).margin(1e-8));
        }
}

TEST_CASE("density examples", "[oscillator]")
{
    const QuantumState g(0, OscillatorParams::natural(0.1));
    const auto q = density(g, Space::Q);
    CHECK(q.space == Space::Q);
    CHECK(q(0.0) == Approx(g.norm_const() * g.norm_const()).epsilon(1e-15));
    CHECK(q.domain.kind == quad::IntegrationDomain::Kind::finite);
    CHECK(q.domain.upper == Approx(g.params().q_half_width()));

    const auto k = density(QuantumState(2, OscillatorParams::natural(0.1)), Space::K);
    for (double v : {0.1, 1.0, 3.0, 30.0})
        CHECK(k(v) == k(-v));

    const auto x = density(g, Space::X);
    CHECK(x.domain.kind == quad::IntegrationDomain::Kind::real_line);
    CHECK(x.width > 0.0);
}

TEST_CASE("eigenfunctions are orthonormal", "[oscillator]")
{
    for (double b : table_betas) {
        std::vector<QuantumState> states;
        for (int n = 0; n <= 5; ++n)
            states.emplace_back(n, OscillatorParams::natural(b));
        const double h = states[0].params().q_half_width();
        quad::QuadratureOptions opt;
        opt.initial_panels = 16;
        opt.grading_levels = 12;
        for (int m = 0; m <= 5; ++m)
            for (int n = m; n <= 5; ++n) {
                const auto r = quad::integrate_finite(
                    [&](double q) { return states[m].phi_q(q) * states[n].phi_q(q); }, -h, h, 1e-12, opt);
                INFO("beta=" << b << " m=" << m << " n=" << n);
                CHECK(r.value == Approx(m == n ? 1.0 : 0.0).margin(1e-8));
            }
    }
}

TEST_CASE("position spread versus the minimal length", "[oscillator]")
{
    // <x^2> from phi' must agree with the second moment of |psi|^2
    const QuantumState s(1, OscillatorParams::natural(0.5));
    auto d = density(s, Space::X);
    const double from_psi =
        2.0 * quad::integrate_finite([&](double x) { return x * x * d(x); }, 0.0, 400.0, 1e-9,
                                     quad::QuadratureOptions{.max_evaluations = 4'000'000, .initial_panels = 400})
                  .value;
    CHECK(s.position_variance() == Approx(from_psi).epsilon(1e-5));

    // empirical only: the minimal-length bound is a property of the algebra
    for (double b : table_betas)
        for (int n = 0; n <= 5; ++n) {
            const QuantumState st(n, OscillatorParams::natural(b));
            INFO("beta=" << b << " n=" << n << " sigma=" << std::sqrt(st.position_variance()));
            CHECK(std::sqrt(st.position_variance()) >= st.params().minimal_length());
        }
}

TEST_CASE("copies share one position transform and evaluate concurrently", "[oscillator]")
{
    const QuantumState s(3, OscillatorParams::natural(0.5));
    const QuantumState copy = s;
    std::vector<std::complex<double>> serial;
    for (int i = 0; i < 64; ++i)
        serial.push_back(s.psi_x(0.37 * i));
    CHECK(&s.position_expansion() == &copy.position_expansion());

    const QuantumState fresh(3, OscillatorParams::natural(0.5));
    std::vector<std::complex<double>> parallel(64);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < 64; i += 4)
                parallel[i] = fresh.psi_x(0.37 * i);
        });
    for (auto& th : pool)
        th.join();
    for (int i = 0; i < 64; ++i)
        CHECK(parallel[i] == serial[i]);
}
