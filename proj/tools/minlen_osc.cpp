// minlen-osc: entropies of the minimal-length harmonic oscillator.
//
//   minlen-osc entropy          Renyi/Shannon entropies over a (space, beta, alpha, n) grid
//   minlen-osc audit            position/momentum entropy sums against the Maassen-Uffink bound
//   minlen-osc reproduce-tables regression against the published R_2 tables
//   minlen-osc wavefunction     sampled amplitudes for plotting
//
// Exit codes: 0 pass, 1 tolerance failure, 2 numerical, integrity or input failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "minlen/sweep.hpp"
#include "minlen/tables.hpp"
#include "minlen/wavefunction_grid.hpp"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_tolerance = 1;
constexpr int exit_failure = 2;

struct SweepFlags {
    std::string config_path;
    std::vector<double> betas;
    std::optional<int> n_max;
    std::vector<double> alphas;
    std::vector<std::string> spaces;
    std::string out;
    std::string format;
    std::optional<double> tol;
    std::optional<double> hbar, mass, omega;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f, bool with_space)
{
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
    cmd->add_option("--beta", f.betas, "deformation parameter(s)");
    cmd->add_option("--n-max", f.n_max, "highest quantum number");
    cmd->add_option("--alpha", f.alphas, "Renyi order(s); 1 selects Shannon");
    if (with_space)
        cmd->add_option("--space", f.spaces, "Q, K and/or X");
    cmd->add_option("--out", f.out, "output file (default stdout)");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol", f.tol, "absolute tolerance on entropy integrals");
    cmd->add_option("--hbar", f.hbar, "explicit units: hbar");
    cmd->add_option("--mass", f.mass, "explicit units: mass");
    cmd->add_option("--omega", f.omega, "explicit units: omega");
}

minlen::SweepConfig resolve(const SweepFlags& f)
{
    minlen::SweepConfig c = f.config_path.empty() ? minlen::SweepConfig{} : minlen::load_config(f.config_path);
    if (!f.betas.empty())
        c.betas = f.betas;
    if (f.n_max)
        c.n_max = *f.n_max;
    if (!f.alphas.empty())
        c.alphas = f.alphas;
    if (!f.spaces.empty()) {
        c.spaces.clear();
        for (const auto& s : f.spaces)
            c.spaces.push_back(minlen::parse_space(s));
    }
    if (!f.out.empty())
        c.output_path = f.out;
    if (!f.format.empty())
        c.format = f.format == "json" ? minlen::OutputFormat::json : minlen::OutputFormat::csv;
    if (f.tol)
        c.entropy_tol = *f.tol;
    if (f.hbar || f.mass || f.omega) {
        c.units.natural = false;
        c.units.hbar = f.hbar.value_or(c.units.hbar);
        c.units.mass = f.mass.value_or(c.units.mass);
        c.units.omega = f.omega.value_or(c.units.omega);
    }
    c.validate();
    return c;
}

template <class Writer>
void emit(const std::string& path, const Writer& write)
{
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    write(out);
}

void emit_rows(const minlen::SweepConfig& c, const std::vector<minlen::TableRow>& rows, bool audit)
{
    emit(c.output_path, [&](std::ostream& os) {
        if (c.format == minlen::OutputFormat::json)
            minlen::write_json(os, rows);
        else
            minlen::write_csv(os, rows, audit);
    });
}

int run_entropy(const SweepFlags& f)
{
    const auto c = resolve(f);
    const auto rows = minlen::cmd_entropy(c);
    emit_rows(c, rows, false);
    for (const auto& r : rows)
        if (!r.error.empty())
            return exit_failure;
    return exit_pass;
}

int run_audit(const SweepFlags& f)
{
    const auto c = resolve(f);
    const auto rows = minlen::cmd_audit(c);
    emit_rows(c, rows, true);
    int status = exit_pass;
    for (const auto& r : rows) {
        if (!r.error.empty())
            return exit_failure;
        if (r.audit && r.audit->margin_fourier < -1e-8)
            status = exit_tolerance;
    }
    return status;
}

struct TableFlags {
    std::string out_dir = ".";
    std::optional<double> tol;
    std::string reference_path;
};

int run_tables(const TableFlags& f)
{
    minlen::tables::ReproduceOptions opt;
    opt.tolerance = f.tol;
    if (!f.reference_path.empty()) {
        std::ifstream in(f.reference_path, std::ios::binary);
        if (!in)
            throw minlen::tables::IntegrityError("cannot read reference " + f.reference_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        opt.reference_text = ss.str();
    }
    const auto report = minlen::tables::reproduce_tables(opt);
    std::filesystem::create_directories(f.out_dir);
    const auto dir = std::filesystem::path(f.out_dir);
    emit((dir / "table1.csv").string(), [&](std::ostream& os) { minlen::tables::write_table_csv(os, report.table1); });
    emit((dir / "table2.csv").string(), [&](std::ostream& os) { minlen::tables::write_table_csv(os, report.table2); });
    minlen::tables::write_diff_report(std::cout, report);
    return report.all_pass() ? exit_pass : exit_tolerance;
}

struct WaveFlags {
    int n = 0;
    double beta = 0.1;
    std::string space = "Q";
    int points = 101;
    std::optional<double> from, to;
    std::string out;
    std::optional<double> hbar, mass, omega;
};

int run_wavefunction(const WaveFlags& f)
{
    minlen::OscillatorParams p = minlen::OscillatorParams::natural(f.beta);
    p.hbar = f.hbar.value_or(1.0);
    p.mass = f.mass.value_or(1.0);
    p.omega = f.omega.value_or(1.0);
    const minlen::QuantumState state(f.n, p);
    const auto space = minlen::parse_space(f.space);
    auto grid = minlen::default_grid(state, space, f.points);
    if (f.from)
        grid.from = *f.from;
    if (f.to)
        grid.to = *f.to;
    const auto rows = minlen::sample_wavefunction(state, space, grid);
    emit(f.out, [&](std::ostream& os) { minlen::write_wavefunction_csv(os, rows); });
    return exit_pass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Entropies of the harmonic oscillator with a minimal length"};
    app.require_subcommand(1);

    SweepFlags entropy_flags;
    auto* entropy = app.add_subcommand("entropy", "Renyi/Shannon entropies over a parameter grid");
    add_sweep_flags(entropy, entropy_flags, true);

    SweepFlags audit_flags;
    auto* audit = app.add_subcommand("audit", "entropy sums against the Maassen-Uffink bound");
    add_sweep_flags(audit, audit_flags, false);

    TableFlags table_flags;
    auto* tables = app.add_subcommand("reproduce-tables", "regress the published R_2 tables");
    tables->add_option("--out", table_flags.out_dir, "directory for table1.csv and table2.csv");
    tables->add_option("--tol", table_flags.tol, "override both comparison tolerances");
    tables->add_option("--reference", table_flags.reference_path, "reference CSV replacing the embedded one");

    WaveFlags wave_flags;
    auto* wave = app.add_subcommand("wavefunction", "sample a wavefunction on a grid");
    wave->add_option("--n", wave_flags.n, "quantum number")->check(CLI::NonNegativeNumber);
    wave->add_option("--beta", wave_flags.beta, "deformation parameter");
    wave->add_option("--space", wave_flags.space, "Q, K or X");
    wave->add_option("--points", wave_flags.points, "grid points (>= 2)");
    wave->add_option("--from", wave_flags.from, "grid start");
    wave->add_option("--to", wave_flags.to, "grid end");
    wave->add_option("--out", wave_flags.out, "output file (default stdout)");
    wave->add_option("--hbar", wave_flags.hbar, "explicit units: hbar");
    wave->add_option("--mass", wave_flags.mass, "explicit units: mass");
    wave->add_option("--omega", wave_flags.omega, "explicit units: omega");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_failure;
    }

    try {
        if (*entropy)
            return run_entropy(entropy_flags);
        if (*audit)
            return run_audit(audit_flags);
        if (*tables)
            return run_tables(table_flags);
        if (*wave)
            return run_wavefunction(wave_flags);
    } catch (const minlen::tables::IntegrityError& e) {
        std::cerr << "integrity failure: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_failure;
}
