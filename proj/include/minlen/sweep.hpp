#pragma once

// Parameter sweeps behind the `entropy` and `audit` subcommands.

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "minlen/entropy.hpp"
#include "minlen/oscillator.hpp"
#include "minlen/parallel.hpp"
#include "minlen/report.hpp"

namespace minlen {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { csv, json };

struct Units {
    bool natural = true;
    double hbar = 1.0;
    double mass = 1.0;
    double omega = 1.0;
};

struct SweepConfig {
    std::vector<double> betas{0.1, 0.5, 1.0};
    int n_max = 5;
    std::vector<double> alphas{2.0};
    std::vector<Space> spaces{Space::Q, Space::K, Space::X};
    Units units;
    /// Absolute tolerance behind psi_n(x) (int |phi_n - expansion| dq).
    double quadrature_tol = QuantumState::default_fourier_tol;
    /// Absolute tolerance on entropy power integrals.
    double entropy_tol = 1e-8;
    OutputFormat format = OutputFormat::csv;
    std::string output_path; // empty: stdout

    void validate() const
    {
        if (betas.empty())
            throw ConfigError("config: betas must not be empty");
        if (alphas.empty())
            throw ConfigError("config: alphas must not be empty");
        if (spaces.empty())
            throw ConfigError("config: spaces must not be empty");
        if (n_max < 0)
            throw ConfigError("config: n_max must be >= 0");
        for (double b : betas)
            if (!(b > 0.0) || !std::isfinite(b))
                throw ConfigError("config: every beta must be positive");
        for (double a : alphas)
            if (!(a > 0.5) || !std::isfinite(a))
                throw ConfigError("config: every alpha must exceed 1/2");
        if (!(quadrature_tol > 0.0) || !(entropy_tol > 0.0))
            throw ConfigError("config: tolerances must be positive");
        if (!units.natural && (!(units.hbar > 0.0) || !(units.mass > 0.0) || !(units.omega > 0.0)))
            throw ConfigError("config: explicit units must be positive");
    }

    OscillatorParams params(double beta) const
    {
        if (units.natural)
            return OscillatorParams::natural(beta);
        return OscillatorParams{units.hbar, units.mass, units.omega, beta}.validated();
    }

    EntropyOptions entropy_options() const
    {
        EntropyOptions o;
        o.tol = entropy_tol;
        return o;
    }
};

inline SweepConfig config_from_json(const nlohmann::json& j)
{
    SweepConfig c;
    try {
        if (j.contains("betas"))
            c.betas = j.at("betas").get<std::vector<double>>();
        if (j.contains("n_max"))
            c.n_max = j.at("n_max").get<int>();
        if (j.contains("alphas"))
            c.alphas = j.at("alphas").get<std::vector<double>>();
        if (j.contains("spaces")) {
            c.spaces.clear();
            for (const auto& s : j.at("spaces"))
                c.spaces.push_back(parse_space(s.get<std::string>()));
        }
        if (j.contains("units")) {
            const auto& u = j.at("units");
            if (u.is_string()) {
                if (u.get<std::string>() != "natural")
                    throw ConfigError("config: units must be \"natural\" or an object {hbar, mass, omega}");
            } else {
                c.units.natural = false;
                c.units.hbar = u.value("hbar", 1.0);
                c.units.mass = u.value("mass", 1.0);
                c.units.omega = u.value("omega", 1.0);
            }
        }
        if (j.contains("quadrature_tol"))
            c.quadrature_tol = j.at("quadrature_tol").get<double>();
        if (j.contains("entropy_tol"))
            c.entropy_tol = j.at("entropy_tol").get<double>();
        if (j.contains("format")) {
            const auto f = j.at("format").get<std::string>();
            if (f == "csv")
                c.format = OutputFormat::csv;
            else if (f == "json")
                c.format = OutputFormat::json;
            else
                throw ConfigError("config: format must be csv or json");
        }
        if (j.contains("output"))
            c.output_path = j.at("output").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

inline SweepConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
    return config_from_json(j);
}

namespace detail {

/// One QuantumState per (beta, n), shared by every cell that needs it so the
/// position-space expansion is built once.
class StateTable {
public:
    explicit StateTable(const SweepConfig& c)
    {
        for (double b : c.betas)
            for (int n = 0; n <= c.n_max; ++n)
                states_.try_emplace({b, n}, n, c.params(b), c.quadrature_tol);
    }
    const QuantumState& at(double beta, int n) const { return states_.at({beta, n}); }

private:
    std::map<std::pair<double, int>, QuantumState> states_;
};

inline std::vector<double> sorted_unique(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace detail

/// One row per (space, beta, alpha, n), sorted in that order. Failures land in
/// the row's error column; the sweep carries on.
inline std::vector<TableRow> cmd_entropy(const SweepConfig& config)
{
    config.validate();
    auto spaces = config.spaces;
    std::sort(spaces.begin(), spaces.end());
    spaces.erase(std::unique(spaces.begin(), spaces.end()), spaces.end());
    const auto betas = detail::sorted_unique(config.betas);
    const auto alphas = detail::sorted_unique(config.alphas);

    std::vector<TableRow> rows;
    for (Space s : spaces)
        for (double b : betas)
            for (double a : alphas)
                for (int n = 0; n <= config.n_max; ++n) {
                    TableRow r;
                    r.space = s;
                    r.beta = b;
                    r.alpha = a;
                    r.n = n;
                    rows.push_back(r);
                }

    const detail::StateTable states(config);
    const auto opt = config.entropy_options();
    parallel_for(rows.size(), [&](std::size_t i) {
        auto& r = rows[i];
        try {
            const auto res = entropy(density(states.at(r.beta, r.n), r.space), r.alpha, opt);
            r.value = res.value;
            r.err = res.err;
        } catch (const std::exception& e) {
            r.value = r.err = nan_value;
            r.error = e.what();
        }
    });
    return rows;
}

/// Maassen-Uffink audit rows: one per (beta, alpha, n), value = R_alpha[psi_n].
inline std::vector<TableRow> cmd_audit(const SweepConfig& config)
{
    config.validate();
    const auto betas = detail::sorted_unique(config.betas);
    const auto alphas = detail::sorted_unique(config.alphas);

    std::vector<TableRow> rows;
    for (double b : betas)
        for (double a : alphas)
            for (int n = 0; n <= config.n_max; ++n) {
                TableRow r;
                r.space = Space::X;
                r.beta = b;
                r.alpha = a;
                r.n = n;
                r.audit = AuditColumns{};
                rows.push_back(r);
            }

    const detail::StateTable states(config);
    const auto opt = config.entropy_options();
    parallel_for(rows.size(), [&](std::size_t i) {
        auto& r = rows[i];
        try {
            const auto a = audit(states.at(r.beta, r.n), r.alpha, opt);
            r.value = a.position.value;
            r.err = a.position.err;
            r.audit = AuditColumns{a.alpha_star,     a.sum_fourier,   a.sum_actual,
                                   a.bound,          a.margin_fourier, a.margin_actual};
        } catch (const std::exception& e) {
            r.value = r.err = nan_value;
            r.audit = AuditColumns{};
            r.error = e.what();
        }
    });
    return rows;
}

} // namespace minlen
