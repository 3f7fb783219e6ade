#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <gtest/gtest.h>
#include <mblight/cli.hpp>
#include <mblight/errors.hpp>
#include <mblight/material.hpp>
#include <mblight/setup.hpp>
#include <mblight/writer.hpp>

namespace fs = std::filesystem;
using namespace mblight;

namespace {

const std::string setups_dir = MBLIGHT_SETUPS_DIR;

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return { std::istreambuf_iterator<char>(in),
             std::istreambuf_iterator<char>() };
}

/* first issue of the validation error thrown by parse_setup */
std::string parse_issue(const std::string& text)
{
    try {
        parse_setup(text);
    } catch (const validation_error& err) {
        return err.issues().at(0);
    }
    return "";
}

struct cli_run
{
    int code;
    std::string out;
    std::string err;
};

cli_run run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "mblight-tool");
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out, err;
    const int code = cli::main(static_cast<int>(argv.size()), argv.data(),
                               out, err);
    return { code, out.str(), err.str() };
}

const char* minimal_setup = R"({
  "schema": 1,
  "name": "dev",
  "materials": [
    { "id": "setup_test_m", "qm": {
        "type": "generic", "density_3d": 1e24,
        "hamiltonian": { "diag": [0, 1e-20] },
        "dipole": { "diag": [0, 0], "offdiag": [1e-29] },
        "rates": [[0, 1e10], [RATE, 0]],
        "pure_dephasing": [0] } }
  ],
  "regions": REGIONS,
  "scenario": {
    "name": "s", "num_gridpoints": 1, "end_time": 1e-13,
    "num_timesteps": 100,
    "initial": { "density": { "diag": [1, 0] } },
    "records": [ { "name": "d11", "position": 0 } ]
  }
})";

std::string make_minimal(const std::string& rate, const std::string& regions)
{
    std::string s = minimal_setup;
    s.replace(s.find("RATE"), 4, rate);
    s.replace(s.find("REGIONS"), 7, regions);
    return s;
}

const std::string one_point =
    R"([ { "name": "p", "material": "setup_test_m", "x_start": 0, "x_end": 0 } ])";

class TempDir : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto* info =
            ::testing::UnitTest::GetInstance()->current_test_info();
        m_dir = fs::temp_directory_path() /
            (std::string("mblight_setup_") + info->name());
        fs::remove_all(m_dir);
        fs::create_directories(m_dir);
    }

    void TearDown() override { fs::remove_all(m_dir); }

    fs::path m_dir;
};

} // namespace

TEST(Builtins, Names)
{
    EXPECT_EQ(builtin_setups(),
              std::vector<std::string>({ "ziolkowski1995", "song2005",
                                         "marskar2011", "tzenov2016" }));
    EXPECT_THROW(builtin_setup("nonexistent"), not_found_error);
    EXPECT_THROW(builtin_setup("marskar2011-1lvl"), std::exception);
}

TEST(Builtins, AllValidate)
{
    for (const auto& name : builtin_setups()) {
        const setup s = builtin_setup(name);
        EXPECT_TRUE(scenario_issues(s.dev, s.sce).empty()) << name;
    }
    for (unsigned n = 2; n <= 8; ++n) {
        const setup s =
            builtin_setup("marskar2011-" + std::to_string(n) + "lvl");
        EXPECT_TRUE(scenario_issues(s.dev, s.sce).empty()) << n;
        EXPECT_EQ(s.sce.ic_density().dim(), n);
    }
}

TEST(Builtins, Ziolkowski)
{
    const setup s = builtin_setup("ziolkowski1995");
    EXPECT_EQ(s.dev.regions().size(), 3u);
    EXPECT_DOUBLE_EQ(s.dev.length(), 150e-6);
    EXPECT_EQ(s.sce.num_gridpoints(), 32768u);
    EXPECT_EQ(s.sce.end_time(), 200e-15);
    ASSERT_EQ(s.sce.records().size(), 2u);
    EXPECT_EQ(s.sce.records()[0].name, "inv12");
    EXPECT_EQ(s.sce.records()[1].name, "e");
    for (const auto& rec : s.sce.records()) {
        EXPECT_EQ(rec.sample_interval, 2.5e-15);
    }
}

TEST(Builtins, MarskarLadder)
{
    const auto e = marskar_ladder(6);
    const std::vector<real> expected = { 0.0, 1.2, 2.3, 3.3, 4.2, 5.0 };
    ASSERT_EQ(e.size(), expected.size());
    EXPECT_EQ(e[0], 0.0);
    for (std::size_t i = 1; i < e.size(); ++i) {
        EXPECT_NEAR(e[i], expected[i], 1e-12 * expected[i]);
    }
    /* default variant is the six-level ladder */
    EXPECT_EQ(builtin_setup("marskar2011").sce.ic_density().dim(), 6u);
}

TEST(Builtins, Overrides)
{
    setup_overrides ovr;
    ovr.gridpoints = 1024;
    ovr.end_time = 20e-12;
    ovr.length = 0.1e-3;
    ovr.seed = 42;
    const setup s = builtin_setup("tzenov2016", ovr);
    EXPECT_EQ(s.sce.num_gridpoints(), 1024u);
    EXPECT_EQ(s.sce.end_time(), 20e-12);
    EXPECT_DOUBLE_EQ(s.dev.length(), 0.1e-3);
    EXPECT_EQ(std::get<ic_field_random>(s.sce.ic_e()).seed, 42u);
    setup_overrides bad;
    bad.length = 1e-3;
    EXPECT_THROW(builtin_setup("ziolkowski1995", bad), std::invalid_argument);
}

TEST(Json, ZiolkowskiFileEqualsBuiltin)
{
    const setup parsed = parse_setup_file(setups_dir + "/ziolkowski1995.json");
    const setup builtin = builtin_setup("ziolkowski1995");
    EXPECT_TRUE(parsed.dev == builtin.dev);
    EXPECT_TRUE(parsed.sce == builtin.sce);
}

TEST(Json, MinimalGenericSetup)
{
    const setup s = parse_setup(make_minimal("0", one_point));
    EXPECT_EQ(s.dev.name(), "dev");
    EXPECT_EQ(s.sce.num_timesteps(), 100u);
    const auto& qm = material_library::get("setup_test_m")->qm();
    ASSERT_TRUE(qm.has_value());
    EXPECT_EQ(qm->dipole_op().off_diagonal()[0], complex(1e-29));
}

TEST(Json, NegativeRateIsLocated)
{
    EXPECT_EQ(parse_issue(make_minimal("-1e9", one_point)),
              "/materials/0/qm/rates/1/0: rate must be non-negative");
}

TEST(Json, EmptyRegions)
{
    const std::string issue = parse_issue(make_minimal("0", "[]"));
    EXPECT_NE(issue.find("device has no regions"), std::string::npos);
    EXPECT_EQ(issue.rfind("/regions", 0), 0u);
}

TEST(Json, StructuralErrors)
{
    EXPECT_NE(parse_issue("{ bad json").find("JSON"), std::string::npos);
    EXPECT_EQ(parse_issue(R"({ "schema": 2 })").rfind("/schema", 0), 0u);
    const std::string unknown_material = make_minimal(
        "0", R"([ { "name": "p", "material": "nope", "x_start": 0, "x_end": 0 } ])");
    EXPECT_EQ(parse_issue(unknown_material).rfind("/regions/0/material", 0),
              0u);
    EXPECT_THROW(parse_setup_file("/nonexistent/setup.json"), std::exception);
}

TEST(Cli, List)
{
    const auto r = run_cli({ "--list" });
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("fdtd-reg-cayley"), std::string::npos);
    EXPECT_NE(r.out.find("fdtd-rk4"), std::string::npos);
    EXPECT_NE(r.out.find("raw"), std::string::npos);
    for (const auto& name : builtin_setups()) {
        EXPECT_NE(r.out.find(name), std::string::npos) << name;
    }
}

TEST(Cli, Help)
{
    EXPECT_EQ(run_cli({ "--help" }).code, 0);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run_cli({ "--bogus" }).code, 1);
    EXPECT_EQ(run_cli({ "-d", "nonexistent" }).code, 1);
    EXPECT_EQ(run_cli({ "-d", "song2005", "-m", "bogus" }).code, 1);
    EXPECT_EQ(run_cli({ "-d", "song2005", "-w", "bogus" }).code, 1);
    EXPECT_EQ(run_cli({ "-d", "@/nonexistent.json" }).code, 1);
}

TEST_F(TempDir, SongArchiveWithAlias)
{
    const std::string out = (m_dir / "song").string();
    const auto r = run_cli(
        { "-d", "song2005", "-m", "cpu-fdtd-red-3lvl-reg-cayley", "-o", out });
    ASSERT_EQ(r.code, 0) << r.err;
    const archive a = read_archive(out);
    ASSERT_EQ(a.results.size(), 4u);
    EXPECT_EQ(a.results[0].name, "e");
    EXPECT_EQ(a.results[1].name, "d11");
    EXPECT_EQ(a.results[1].rows, 10000u);
    EXPECT_NE(r.err.find("fdtd-reg-cayley"), std::string::npos);
}

TEST_F(TempDir, ArchivesAreReproducible)
{
    const std::string a = (m_dir / "a").string();
    const std::string b = (m_dir / "b").string();
    for (const auto& out : { a, b }) {
        ASSERT_EQ(run_cli({ "-d", "tzenov2016", "-g", "64", "-e", "2e-12",
                            "-L", "2e-5", "-o", out })
                      .code,
                  0);
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        EXPECT_EQ(read_file(entry.path()), read_file(fs::path(b) / name))
            << name;
        ++files;
    }
    EXPECT_EQ(files, 2u);
}

TEST_F(TempDir, JsonSetupRuns)
{
    const fs::path file = m_dir / "setup.json";
    std::ofstream(file) << make_minimal("0", one_point);
    const std::string out = (m_dir / "out").string();
    const auto r = run_cli({ "-d", "@" + file.string(), "-o", out });
    ASSERT_EQ(r.code, 0) << r.err;
    const archive a = read_archive(out);
    ASSERT_EQ(a.results.size(), 1u);
    EXPECT_EQ(a.results[0].at(0, 0), 1.0);
}

TEST_F(TempDir, InvalidJsonSetupIsReported)
{
    const fs::path file = m_dir / "setup.json";
    std::ofstream(file) << make_minimal("-1", one_point);
    const auto r = run_cli({ "-d", "@" + file.string(), "-o",
                             (m_dir / "out").string() });
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("/materials/0/qm/rates/1/0"), std::string::npos);
    EXPECT_FALSE(fs::exists(m_dir / "out"));
}
