#include "speclab/error.hpp"
#include "speclab/harness.hpp"
#include "speclab/table.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

using namespace speclab;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> table_text(const RunResult& r)
{
    std::map<std::string, std::string> out;
    for (const auto& t : r.tables) {
        out[t.name()] = t.to_csv();
    }
    return out;
}

std::string first_line(const std::string& text)
{
    return text.substr(0, text.find('\n'));
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const Table& find_table(const RunResult& r, const std::string& name)
{
    for (const auto& t : r.tables) {
        if (t.name() == name) {
            return t;
        }
    }
    throw std::runtime_error("missing table " + name);
}

ExperimentConfig small(Experiment e)
{
    ExperimentConfig c;
    c.experiment = e;
    c.n = 40;
    c.samples = 3;
    c.xi = {0.0, 0.5};
    c.bins = 30;
    c.seed = 99;
    c.chain = 500;
    c.radii = 5;
    c.steps = 4;
    return c;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("experiment names round-trip")
{
    CHECK(experiment_names().size() == 11);
    for (const auto& name : experiment_names()) {
        const auto e = parse_experiment(name);
        REQUIRE(e);
        CHECK(to_string(*e) == name);
    }
    CHECK_FALSE(parse_experiment("nope"));
}

TEST_CASE("invalid configurations are rejected")
{
    ExperimentConfig c;
    c.n = 2;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.samples = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.xi.clear();
    CHECK_THROWS_AS(compute(c), InvalidArgument);
    c = {};
    c.xi = {NAN};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("table formatting")
{
    Table t("demo", {"a", "b"});
    t.add_row({1, 0.1});
    t.add_row({std::int64_t{-3}, std::optional<double>{}});
    CHECK(t.to_csv() == "a,b\n1,0.1\n-3,\n");
    const auto j = nlohmann::json::parse(t.to_json());
    CHECK(j["name"] == "demo");
    CHECK(j["rows"][1][1].is_null());
    CHECK_THROWS_AS(t.add_row({1}), InvalidArgument);
    CHECK(format_number(NAN) == "nan");
    CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("spectrum tables share the sample across xi")
{
    auto c = small(Experiment::Spectrum);
    const auto r = compute(c);
    const auto& t0 = find_table(r, "spectrum_xi_0");
    const auto& t5 = find_table(r, "spectrum_xi_0.5");
    CHECK(first_line(t0.to_csv()) == "sample_index,re_E,im_E");
    CHECK(t0.rows() == 3u * 40u);
    CHECK(t5.rows() == 3u * 40u);

    // same entries: the xi = 0.5 spectrum is the xi = 0 sample deformed
    ExperimentConfig single = c;
    single.xi = {0.5};
    CHECK(table_text(compute(single))["spectrum_xi_0.5"] == t5.to_csv());
}

TEST_CASE("tables are reproducible and schedule independent")
{
    for (Experiment e : {Experiment::Spectrum, Experiment::Density, Experiment::GammaScatter,
                         Experiment::HoleVsXi, Experiment::DualityCheck}) {
        auto c = small(e);
        c.workers = 1;
        const auto one = table_text(compute(c));
        const auto again = table_text(compute(c));
        c.workers = 3;
        const auto three = table_text(compute(c));
        CHECK(one == again);
        CHECK(one == three);
    }
}

TEST_CASE("every experiment runs at small size")
{
    for (const auto& name : experiment_names()) {
        auto c = small(*parse_experiment(name));
        if (c.experiment == Experiment::HoleVsXi) {
            c.xi = {0.2, 0.8};
        }
        RunResult r;
        CHECK_NOTHROW(r = compute(c));
        CHECK(r.exit_status == 0);
        CHECK(r.failures == 0);
        CHECK_FALSE(r.tables.empty());
        for (const auto& t : r.tables) {
            CHECK(t.rows() > 0);
        }
    }
}

TEST_CASE("column schemas")
{
    CHECK(first_line(find_table(compute(small(Experiment::Density)), "density").to_csv()) ==
          "r_lo,r_hi,count,density,density_smoothed,n0");
    CHECK(first_line(find_table(compute(small(Experiment::GammaScatter)), "scatter").to_csv()) ==
          "abs_E,variance,rate,flagged,seam_flag");
    CHECK(first_line(find_table(compute(small(Experiment::WindingCheck)), "winding").to_csv()) ==
          "radius,winding,eig_count_inside");
    const auto sweep = compute(small(Experiment::PhaseSweep));
    CHECK(first_line(find_table(sweep, "trajectory").to_csv()) == "label,phi,re_E,im_E");
    CHECK_NOTHROW(find_table(sweep, "phase_step_00"));
    CHECK_NOTHROW(find_table(sweep, "phase_step_04"));
}

TEST_CASE("winding check agrees with the eigenvalue count")
{
    auto c = small(Experiment::WindingCheck);
    c.xi = {0.5};
    c.phi = 0.3;
    const auto r = compute(c);
    const auto& t = find_table(r, "winding");
    for (std::size_t i = 0; i < t.rows(); ++i) {
        CHECK(t.row(i)[1].text == t.row(i)[2].text);
    }
}

TEST_CASE("run writes tables and metadata")
{
    const fs::path dir = fs::temp_directory_path() / "speclab_harness_test";
    fs::remove_all(dir);
    auto c = small(Experiment::Spectrum);
    c.out_dir = dir;
    c.format = OutputFormat::Json;
    const auto r = run(c);
    CHECK(r.exit_status == 0);
    CHECK(fs::exists(dir / "metadata.json"));
    const auto meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
    CHECK(meta["config"] == c.to_json());
    CHECK(meta["version"] == std::string(kVersion));
    CHECK(meta["failures"] == 0);
    CHECK(meta.contains("wall_time_seconds"));
    const auto table = nlohmann::json::parse(slurp(dir / "spectrum_xi_0.json"));
    CHECK(table["columns"] == nlohmann::json({"sample_index", "re_E", "im_E"}));

    c.format = OutputFormat::Csv;
    run(c);
    const auto first = slurp(dir / "spectrum_xi_0.5.csv");
    run(c);
    CHECK(slurp(dir / "spectrum_xi_0.5.csv") == first);
    fs::remove_all(dir);
}

TEST_CASE("trajectory continuation")
{
    SUBCASE("zero sweep")
    {
        const Eigen::VectorXcd v = Eigen::VectorXcd::Random(10);
        const auto tr = trajectory_continuation({v, v});
        REQUIRE(tr.path.size() == 10u);
        for (double d : tr.displacement) {
            CHECK(d == 0.0);
        }
    }
    SUBCASE("points rotating by a quarter of their spacing per step")
    {
        const int n = 8;
        std::vector<Eigen::VectorXcd> steps;
        for (int j = 0; j <= 4; ++j) {
            Eigen::VectorXcd v(n);
            for (int k = 0; k < n; ++k) {
                v[k] = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.25 * j) / n);
            }
            steps.push_back(v);
        }
        const auto tr = trajectory_continuation(steps);
        for (int label = 0; label < n; ++label) {
            CHECK(std::abs(tr.path[label].back() - steps[0][(label + 1) % n]) < 1e-12);
            CHECK_FALSE(tr.split[label]);
        }
    }
    SUBCASE("ambiguous continuation is flagged")
    {
        Eigen::VectorXcd a(2), b(2);
        a << 0.0, 10.0;
        b << cplx(1.0, 0.0), cplx(-1.0, 0.05);
        const auto tr = trajectory_continuation({a, b});
        CHECK(tr.split[0]);
    }
}

}
