#include <cmath>
#include <random>
#include <gtest/gtest.h>
#include <mblight/device.hpp>
#include <mblight/errors.hpp>
#include <mblight/material.hpp>
#include <mblight/scenario.hpp>
#include <mblight/solver.hpp>
#include <mblight/writer.hpp>

using namespace mblight;

namespace {

void ensure_vacuum()
{
    material_library::ensure(material("Vacuum"));
}

bool mentions(const std::vector<std::string>& issues, const std::string& what)
{
    for (const auto& s : issues) {
        if (s.find(what) != std::string::npos) {
            return true;
        }
    }
    return false;
}

qm_description five_level()
{
    std::vector<std::vector<real>> rates(5, std::vector<real>(5, 1e10));
    return qm_description(1e24, qm_operator({ 0, 1e-20, 2e-20, 3e-20, 4e-20 }),
                          qm_operator(std::vector<real>(5, 0.0)),
                          lindblad_relaxation(rates));
}

} // namespace

TEST(Material, VacuumRoundTrip)
{
    ensure_vacuum();
    const auto vac = material_library::get("Vacuum");
    EXPECT_EQ(vac->rel_permittivity(), 1.0);
    EXPECT_EQ(vac->rel_permeability(), 1.0);
    EXPECT_EQ(vac->overlap_factor(), 1.0);
    EXPECT_EQ(vac->losses(), 0.0);
    EXPECT_FALSE(vac->qm().has_value());
    EXPECT_EQ(*vac, material("Vacuum"));
    EXPECT_NEAR(vac->light_speed(), C0, 1e-6);
    EXPECT_NEAR(vac->impedance(), 376.730313668, 1e-6);
}

TEST(Material, LibraryConflicts)
{
    material_library::add(material("core_test_conflict", std::nullopt, 2.0));
    EXPECT_THROW(material_library::add(material("core_test_conflict")),
                 conflict_error);
    EXPECT_NO_THROW(material_library::ensure(
        material("core_test_conflict", std::nullopt, 2.0)));
    EXPECT_THROW(material_library::ensure(
                     material("core_test_conflict", std::nullopt, 3.0)),
                 conflict_error);
    EXPECT_THROW(material_library::get("core_test_missing"), not_found_error);
    EXPECT_TRUE(material_library::contains("core_test_conflict"));
}

TEST(Material, ConductivityFromLosses)
{
    const material ar("core_test_ar", std::nullopt, 12.96, 0.9, 1100.0);
    /* sigma = 2 alpha0 eps0 eps_r c0 / sqrt(eps_r) */
    const real sigma = 2.0 * 1100.0 * EPS0 * 12.96 * C0 / std::sqrt(12.96);
    EXPECT_NEAR(ar.conductivity(), sigma, 1e-12 * sigma);
    EXPECT_NEAR(ar.conductivity(), 21.0, 0.05);
    EXPECT_NEAR(material::losses_from_conductivity(ar.conductivity(), 12.96),
                1100.0, 1e-9);
}

TEST(Material, InvalidParameters)
{
    EXPECT_THROW(material("x", std::nullopt, 0.5), std::invalid_argument);
    EXPECT_THROW(material("x", std::nullopt, 1.0, 1.5), std::invalid_argument);
    EXPECT_THROW(material("x", std::nullopt, 1.0, 1.0, -1.0),
                 std::invalid_argument);
    EXPECT_THROW(material("x", std::nullopt, 1.0, 1.0, 0.0, 0.0),
                 std::invalid_argument);
}

TEST(Device, ThreeRegions)
{
    ensure_vacuum();
    device dev("three");
    dev.add_region({ "a", "Vacuum", 0.0, 7.5e-6 });
    dev.add_region({ "b", "Vacuum", 7.5e-6, 142.5e-6 });
    dev.add_region({ "c", "Vacuum", 142.5e-6, 150e-6 });
    EXPECT_DOUBLE_EQ(dev.length(), 150e-6);
    EXPECT_EQ(dev.regions().size(), 3u);
}

TEST(Device, ZeroLengthRegion)
{
    ensure_vacuum();
    device dev("point");
    dev.add_region({ "p", "Vacuum", 0.0, 0.0 });
    EXPECT_EQ(dev.length(), 0.0);
}

TEST(Device, GapsAndOverlapsAreRejected)
{
    ensure_vacuum();
    device dev("gap");
    dev.add_region({ "a", "Vacuum", 0.0, 7.5e-6 });
    EXPECT_THROW(dev.add_region({ "b", "Vacuum", 5e-6, 10e-6 }),
                 std::invalid_argument);
    EXPECT_THROW(dev.add_region({ "b", "Vacuum", 8e-6, 10e-6 }),
                 std::invalid_argument);
    EXPECT_THROW(dev.add_region({ "b", "Vacuum", 7.5e-6, 7e-6 }),
                 std::invalid_argument);
    EXPECT_THROW(dev.add_region({ "b", "core_test_missing", 7.5e-6, 9e-6 }),
                 not_found_error);
    device late("late");
    EXPECT_THROW(late.add_region({ "a", "Vacuum", 1e-6, 2e-6 }),
                 std::invalid_argument);
}

TEST(Device, MaterialLookupAndBoundaries)
{
    ensure_vacuum();
    material_library::ensure(material("core_test_eps4", std::nullopt, 4.0));
    device dev("lookup");
    dev.add_region({ "a", "Vacuum", 0.0, 1e-6 });
    dev.add_region({ "b", "core_test_eps4", 1e-6, 2e-6 });
    EXPECT_EQ(dev.material_at(0.5e-6)->id(), "Vacuum");
    EXPECT_EQ(dev.material_at(1e-6)->id(), "core_test_eps4");
    EXPECT_EQ(dev.material_at(2e-6)->id(), "core_test_eps4");
    EXPECT_EQ(reflectivity_of(dev.bc_left()), 1.0);
    dev.set_boundaries(bc_reflectivity{ 0.64 }, bc_reflectivity{ 0.0 });
    EXPECT_EQ(reflectivity_of(dev.bc_left()), 0.64);
    EXPECT_EQ(reflectivity_of(dev.bc_right()), 0.0);
    EXPECT_THROW(dev.set_boundaries(bc_reflectivity{ 1.5 }, bc_reflectivity{}),
                 std::invalid_argument);
}

TEST(Source, ZiolkowskiPeak)
{
    const source src{ "s", 0.0, source_kind::hard,
                      sech_pulse{ 4.2186e9, 2e14, 10.0, 2e14, 0.0 } };
    /* envelope maximum at n0 / beta = 50 fs */
    EXPECT_NEAR(source_value(src, 50e-15), 4.2186e9, 1e-3);
    EXPECT_LT(std::abs(source_value(src, 0.0)), 4.2186e9 * 1e-4);
}

TEST(Source, ZeroAmplitude)
{
    const source src{ "s", 0.0, source_kind::soft,
                      sech_pulse{ 0.0, 2e14, 10.0, 2e14, 0.0 } };
    for (real t : { 0.0, 1e-15, 5e-14, 1e-12 }) {
        EXPECT_EQ(source_value(src, t), 0.0);
    }
}

TEST(Source, SongPeak)
{
    const real a = 3.5471e9, f = 3.8118e14, n0 = 17.248, beta = 1.76 / 5e-15;
    const source src{ "s", 0.0, source_kind::hard,
                      sech_pulse{ a, f, n0, beta, -PI / 2 } };
    const real tp = n0 / beta;
    const real expected = a * std::cos(2 * PI * f * tp + PI / 2);
    EXPECT_NEAR(source_value(src, tp), expected, 1e-6 * a);
}

TEST(Source, GaussianShape)
{
    const source src{ "g", 0.0, source_kind::soft,
                      gaussian_pulse{ 2.0, 0.0, 1e-12, 3e-13, 0.0 } };
    EXPECT_DOUBLE_EQ(source_value(src, 1e-12), 2.0);
    EXPECT_NEAR(source_value(src, 1.3e-12), 2.0 * std::exp(-1.0), 1e-12);
}

TEST(Record, FromName)
{
    const auto inv = record::from_name("inv12", 2.5e-15);
    EXPECT_EQ(inv.quantity, record_quantity::inversion);
    const auto d12 = record::from_name("d12", 0.0, 1e-6);
    EXPECT_EQ(d12.quantity, record_quantity::density);
    EXPECT_EQ(d12.row, 1u);
    EXPECT_EQ(d12.col, 2u);
    EXPECT_TRUE(d12.is_complex());
    EXPECT_EQ(*d12.position, 1e-6);
    const auto d33 = record::from_name("d33", 0.0);
    EXPECT_FALSE(d33.is_complex());
    EXPECT_EQ(record::from_name("e", 0.0).quantity, record_quantity::electric);
    EXPECT_EQ(record::from_name("h", 0.0).quantity, record_quantity::magnetic);
    EXPECT_THROW(record::from_name("x7", 0.0), std::invalid_argument);
}

TEST(InitialField, RandomIsReproducible)
{
    const ic_field_random ic{ 1e-4, 0xB10C };
    const auto a = sample_ic_field(ic, 1000);
    const auto b = sample_ic_field(ic, 1000);
    EXPECT_EQ(a, b);

    std::mt19937_64 gen(0xB10C);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const real u = static_cast<real>(gen() >> 11) * 0x1.0p-53;
        EXPECT_EQ(a[i], 1e-4 * (2.0 * u - 1.0));
        EXPECT_LE(std::abs(a[i]), 1e-4);
    }
    const auto c = sample_ic_field(ic_field_random{ 1e-4, 7 }, 1000);
    EXPECT_NE(a, c);
}

TEST(InitialField, ConstAndCurve)
{
    EXPECT_EQ(sample_ic_field(ic_field_const{ 2.5 }, 3),
              std::vector<real>({ 2.5, 2.5, 2.5 }));
    EXPECT_EQ(sample_ic_field(ic_field_curve{ { 1, 2, 3 } }, 3),
              std::vector<real>({ 1, 2, 3 }));
}

TEST(Scenario, InvalidConstruction)
{
    EXPECT_THROW(scenario("s", 0, 1e-12, qm_operator({ 1.0 })),
                 std::invalid_argument);
    EXPECT_THROW(scenario("s", 10, 0.0, qm_operator({ 1.0 })),
                 std::invalid_argument);
    scenario sce("s", 10, 1e-12, qm_operator({ 1.0 }));
    sce.add_record(record::from_name("e", 0.0));
    EXPECT_THROW(sce.add_record(record::from_name("e", 0.0)),
                 std::invalid_argument);
    EXPECT_THROW(sce.add_record(record::from_name("h", -1.0)),
                 std::invalid_argument);
}

TEST(Validation, ValidPointSimulation)
{
    material_library::ensure(material(
        "core_test_5lvl", five_level()));
    device dev("five");
    dev.add_region({ "p", "core_test_5lvl", 0.0, 0.0 });
    scenario sce("s", 1, 1e-13, qm_operator({ 1, 0, 0, 0, 0 }),
                 ic_field_const{}, ic_field_const{}, 100u);
    sce.add_record(record::from_name("d11", 0.0, 0.0));
    EXPECT_NO_THROW(scenario_validate(dev, sce));

    sce.add_record(record::from_name("d47", 0.0, 0.0));
    const auto issues = scenario_issues(dev, sce);
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_TRUE(mentions(issues, "d47"));
    EXPECT_THROW(scenario_validate(dev, sce), validation_error);
}

TEST(Validation, SinglePointNeedsTimesteps)
{
    material_library::ensure(material("core_test_5lvl", five_level()));
    device dev("five");
    dev.add_region({ "p", "core_test_5lvl", 0.0, 0.0 });
    scenario sce("s", 1, 1e-13, qm_operator({ 1, 0, 0, 0, 0 }),
                 ic_field_const{}, ic_field_const{});
    EXPECT_TRUE(mentions(scenario_issues(dev, sce), "time steps"));
}

TEST(Validation, CollectsEveryIssue)
{
    material_library::ensure(material("core_test_5lvl", five_level()));
    device dev("mixed");
    dev.add_region({ "a", "core_test_5lvl", 0.0, 1e-6 });
    scenario sce("s", 10, 1e-13, qm_operator({ 0.5, 0.6 }));
    sce.add_source({ "far", 2e-6, source_kind::soft, sech_pulse{} });
    sce.add_record(record::from_name("inv12", 0.0));
    const auto issues = scenario_issues(dev, sce);
    EXPECT_TRUE(mentions(issues, "dimension"));
    EXPECT_TRUE(mentions(issues, "trace"));
    EXPECT_TRUE(mentions(issues, "far"));
    EXPECT_TRUE(mentions(issues, "inversion"));
    try {
        scenario_validate(dev, sce);
        FAIL() << "expected validation_error";
    } catch (const validation_error& err) {
        EXPECT_EQ(err.issues(), issues);
    }
}

TEST(Validation, EmptyDevice)
{
    device dev("empty");
    scenario sce("s", 10, 1e-13, qm_operator({ 1.0 }));
    EXPECT_TRUE(mentions(scenario_issues(dev, sce), "no regions"));
}

TEST(Registry, SolversAndWriters)
{
    const auto s = available_solvers();
    EXPECT_NE(std::find(s.begin(), s.end(), "fdtd-reg-cayley"), s.end());
    EXPECT_NE(std::find(s.begin(), s.end(), "fdtd-rk4"), s.end());
    EXPECT_EQ(create_solver("fdtd-reg-cayley")->name(), "fdtd-reg-cayley");
    EXPECT_EQ(create_solver("fdtd-rk4")->name(), "fdtd-rk4");
    EXPECT_EQ(resolve_solver_name("cpu-fdtd-red-6lvl-reg-cayley"),
              "fdtd-reg-cayley");
    EXPECT_EQ(resolve_solver_name("cpu-fdtd-2lvl-reg-cayley"),
              "fdtd-reg-cayley");
    EXPECT_THROW(create_solver("bogus"), not_found_error);

    EXPECT_EQ(available_writers(), std::vector<std::string>({ "raw" }));
    try {
        create_writer("bogus");
        FAIL() << "expected not_found_error";
    } catch (const not_found_error& err) {
        EXPECT_NE(std::string(err.what()).find("raw"), std::string::npos);
    }
}
