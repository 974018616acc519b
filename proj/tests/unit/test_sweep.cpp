#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "minlen/sweep.hpp"
#include "minlen/tables.hpp"
#include "minlen/wavefunction_grid.hpp"

using Catch::Approx;
using namespace minlen;

namespace {

std::string csv(const std::vector<TableRow>& rows, bool audit_columns)
{
    std::ostringstream os;
    write_csv(os, rows, audit_columns);
    return os.str();
}

} // namespace

TEST_CASE("config defaults and validation", "[sweep]")
{
    SweepConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.betas == std::vector<double>{0.1, 0.5, 1.0});
    CHECK(c.n_max == 5);
    CHECK(c.units.natural);

    auto bad = c;
    bad.alphas.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.alphas = {0.5};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.betas = {0.1, -1.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.n_max = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.entropy_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.spaces.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("config parsed from JSON", "[sweep]")
{
    const auto c = config_from_json(nlohmann::json::parse(
        R"({"betas":[0.2],"n_max":2,"alphas":[0.6,2],"spaces":["K","X"],
            "units":{"hbar":1,"mass":2,"omega":0.5},"format":"json","output":"out.json"})"));
    CHECK(c.betas == std::vector<double>{0.2});
    CHECK(c.n_max == 2);
    CHECK(c.alphas == std::vector<double>{0.6, 2.0});
    CHECK(c.spaces == std::vector<Space>{Space::K, Space::X});
    CHECK_FALSE(c.units.natural);
    CHECK(c.params(0.2).mass == 2.0);
    CHECK(c.format == OutputFormat::json);
    CHECK(c.output_path == "out.json");

    CHECK(config_from_json(nlohmann::json::parse(R"({"units":"natural"})")).units.natural);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"alphas":[]})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"spaces":["P"]})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"betas":"0.1"})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"format":"xml"})")), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("entropy sweep reproduces the beta = 0.1 momentum columns", "[sweep]")
{
    SweepConfig c;
    c.betas = {0.1};
    c.spaces = {Space::K, Space::Q};
    const auto rows = cmd_entropy(c);
    REQUIRE(rows.size() == 12);
    const double aux[] = {0.876, 1.119, 1.242, 1.322, 1.380, 1.424};
    const double act[] = {0.899, 1.229, 1.432, 1.582, 1.700, 1.798};
    for (int n = 0; n <= 5; ++n) {
        // sorted by space first: Q rows precede K rows
        CHECK(rows[n].space == Space::Q);
        CHECK(rows[n].n == n);
        CHECK(rows[n].value == Approx(aux[n]).margin(0.005));
        CHECK(rows[6 + n].space == Space::K);
        CHECK(rows[6 + n].value == Approx(act[n]).margin(0.005));
        CHECK(rows[n].error.empty());
    }
}

TEST_CASE("single-cell entropy sweep", "[sweep]")
{
    SweepConfig c;
    c.betas = {1.0};
    c.n_max = 0;
    c.spaces = {Space::Q};
    const auto rows = cmd_entropy(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].value == Approx(0.565).margin(0.005));
    CHECK(rows[0].beta == 1.0);
    CHECK(rows[0].alpha == 2.0);
}

TEST_CASE("entropy sweep ordering", "[sweep]")
{
    SweepConfig c;
    c.betas = {1.0, 0.5};
    c.alphas = {2.0, 1.0};
    c.n_max = 1;
    c.spaces = {Space::K, Space::Q};
    const auto rows = cmd_entropy(c);
    REQUIRE(rows.size() == 16);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i - 1];
        const auto& b = rows[i];
        CHECK(std::tuple(a.space, a.beta, a.alpha, a.n) < std::tuple(b.space, b.beta, b.alpha, b.n));
    }
}

TEST_CASE("failed cells are recorded and the sweep continues", "[sweep]")
{
    SweepConfig c;
    c.betas = {0.5};
    c.n_max = 1;
    c.spaces = {Space::Q};
    c.entropy_tol = 1e-300;
    const auto rows = cmd_entropy(c);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK_FALSE(r.error.empty());
        CHECK(std::isnan(r.value));
    }
    const auto text = csv(rows, false);
    CHECK(text.find("Q,0,0.5,2,,,") != std::string::npos);
}

TEST_CASE("audit sweep reproduces the beta = 0.5 entropy sums", "[sweep]")
{
    SweepConfig c;
    c.betas = {0.5};
    c.alphas = {2.0 / 3.0};
    const auto rows = cmd_audit(c);
    REQUIRE(rows.size() == 6);
    const double sums[] = {2.205, 2.939, 3.307, 3.526, 3.673, 3.776};
    for (int n = 0; n <= 5; ++n) {
        const auto& r = rows[n];
        REQUIRE(r.audit.has_value());
        const auto& a = *r.audit;
        INFO("n=" << n << " " << r.error);
        CHECK(r.space == Space::X);
        CHECK(a.sum_actual == Approx(sums[n]).margin(0.01));
        CHECK(a.bound == Approx(2.100).margin(0.001));
        CHECK(a.margin_actual == a.sum_actual - a.bound);
        CHECK(a.margin_fourier == a.sum_fourier - a.bound);
        CHECK(a.margin_fourier >= 0.0);
        CHECK(a.alpha_star == Approx(2.0));
    }
}

TEST_CASE("CSV output is fixed-format and deterministic", "[sweep]")
{
    SweepConfig c;
    c.betas = {0.5};
    c.n_max = 2;
    c.spaces = {Space::Q, Space::K};
    const auto first = csv(cmd_entropy(c), false);
    const auto second = csv(cmd_entropy(c), false);
    CHECK(first == second);
    CHECK(first.rfind("space,n,beta,alpha,value,err,error\n", 0) == 0);
    CHECK(first.find('\r') == std::string::npos);

    TableRow r;
    r.space = Space::X;
    r.n = 3;
    r.beta = 0.1;
    r.alpha = 2.0 / 3.0;
    r.value = 1.0 / 3.0;
    r.err = 1e-9;
    r.audit = AuditColumns{2.0, 2.5, 2.6, 2.1, 0.4, 0.5};
    CHECK(csv({r}, true) ==
          "space,n,beta,alpha,value,err,alpha_star,sum_fourier,sum_actual,bound,margin_fourier,margin_actual,error\n"
          "X,3,0.1,0.666666666667,0.333333333333,1e-09,2,2.5,2.6,2.1,0.4,0.5,\n");
    r.error = "bad, \"quoted\"";
    CHECK(csv({r}, false).find(",\"bad, \"\"quoted\"\"\"\n") != std::string::npos);
}

TEST_CASE("JSON output round-trips exactly", "[sweep]")
{
    SweepConfig c;
    c.betas = {1.0};
    c.n_max = 1;
    c.alphas = {2.0 / 3.0};
    auto rows = cmd_audit(c);
    TableRow failed;
    failed.space = Space::K;
    failed.n = 4;
    failed.beta = 0.3;
    failed.alpha = 2.0;
    failed.error = "quadrature budget exhausted";
    rows.push_back(failed);

    std::ostringstream os;
    write_json(os, rows);
    const auto back = nlohmann::json::parse(os.str()).get<std::vector<TableRow>>();
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(back[i] == rows[i]);
}

TEST_CASE("embedded reference integrity", "[tables]")
{
    const auto cells = tables::parse_reference(tables::embedded_reference);
    CHECK(cells.size() == 72);
    int t1 = 0;
    for (const auto& c : cells)
        t1 += c.table == 1;
    CHECK(t1 == 36);
    CHECK(tables::fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(tables::fnv1a("a") == 0xaf63dc4c8601ec8cULL);

    std::string corrupt{tables::embedded_reference};
    corrupt[corrupt.find("0.876")] = '1';
    CHECK_THROWS_AS(tables::parse_reference(corrupt), tables::IntegrityError);
    CHECK(tables::block_alpha("sum_position_actual") == Approx(2.0 / 3.0));
    CHECK(tables::block_alpha("R2_position") == 2.0);
}

TEST_CASE("reproduce report verdict is a function of its cells", "[tables]")
{
    tables::ReproduceReport r;
    tables::CellResult ok;
    ok.pass = true;
    r.table1 = {ok, ok};
    r.table2 = {ok};
    r.bounds = {tables::BoundCheck{0, 0.1, 2.2, 2.15, 2.1, true}};
    CHECK(r.all_pass());
    auto broken = r;
    broken.table2[0].pass = false;
    CHECK_FALSE(broken.all_pass());
    broken = r;
    broken.bounds[0].pass = false;
    CHECK_FALSE(broken.all_pass());

    std::ostringstream os;
    tables::write_diff_report(os, broken);
    CHECK(os.str().find("FAIL bound n=0 beta=0.1") != std::string::npos);
}

TEST_CASE("wavefunction grids", "[sweep]")
{
    const QuantumState g(0, OscillatorParams::natural(0.1));
    const auto q = sample_wavefunction(g, Space::Q, default_grid(g, Space::Q, 101));
    REQUIRE(q.size() == 101);
    for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(q[i].density == Approx(q[100 - i].density).epsilon(1e-12).margin(1e-300));
        CHECK(q[i].density <= q[50].density);
    }
    CHECK(q[50].point == Approx(0.0).margin(1e-15));

    const QuantumState odd(1, OscillatorParams::natural(0.5));
    const auto x = sample_wavefunction(odd, Space::X, GridSpec{-2.0, 2.0, 5});
    CHECK(x[2].point == 0.0);
    CHECK(x[2].density < 1e-15);

    const auto& p = g.params();
    const double lam = p.lambda();
    const auto k = sample_wavefunction(g, Space::K, GridSpec{-10.0, 10.0, 41});
    for (const auto& s : k) {
        // N_0^2 (1 + beta k^2)^{-(lambda + 1)}
        const double oracle = g.norm_const() * g.norm_const() * std::pow(1.0 + p.beta * s.point * s.point, -(lam + 1.0));
        CHECK(std::abs(s.density - oracle) < 1e-10);
        CHECK(s.im == 0.0);
    }

    const double h = p.q_half_width();
    CHECK_THROWS_AS(sample_wavefunction(g, Space::Q, GridSpec{-h, 1.01 * h, 10}), std::invalid_argument);
    CHECK_THROWS_AS(sample_wavefunction(g, Space::K, GridSpec{0.0, 1.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(sample_wavefunction(g, Space::K, GridSpec{1.0, 0.0, 10}), std::invalid_argument);

    std::ostringstream os;
    write_wavefunction_csv(os, sample_wavefunction(g, Space::K, GridSpec{0.0, 1.0, 2}));
    CHECK(os.str().rfind("point,density,re,im\n0,", 0) == 0);
}

TEST_CASE("parallel_for visits every index once and rethrows", "[sweep]")
{
    for (unsigned threads : {1u, 3u, 8u}) {
        std::vector<std::atomic<int>> hits(257);
        parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, threads);
        for (auto& h : hits)
            CHECK(h.load() == 1);
        CHECK_THROWS_AS(parallel_for(
                            10,
                            [](std::size_t i) {
                                if (i == 7)
                                    throw std::runtime_error("boom");
                            },
                            threads),
                        std::runtime_error);
    }
    CHECK(thread_count() >= 1);
}
