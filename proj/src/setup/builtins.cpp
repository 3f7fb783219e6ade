#include <cmath>
#include <regex>
#include <stdexcept>
#include <mblight/errors.hpp>
#include <mblight/setup.hpp>

namespace mblight {

namespace {

setup ziolkowski1995()
{
    const material vac("Vacuum");
    const material ar("AR_Ziolkowski",
                      make_two_level_desc(1e24, 2 * PI * 2e14, 6.24e-11,
                                          1.0e10, 1.0e10, -1.0));
    material_library::ensure(vac);
    material_library::ensure(ar);

    device dev("Ziolkowski");
    dev.add_region({ "Vacuum left", "Vacuum", 0, 7.5e-6 });
    dev.add_region({ "Active region", "AR_Ziolkowski", 7.5e-6, 142.5e-6 });
    dev.add_region({ "Vacuum right", "Vacuum", 142.5e-6, 150e-6 });

    scenario sce("Basic", 32768, 200e-15, qm_operator({ 1, 0 }),
                 ic_field_const{ 0.0 });
    sce.add_record(record::from_name("inv12", 2.5e-15));
    sce.add_record(record::from_name("e", 2.5e-15));
    sce.add_source({ "sech", 0.0, source_kind::hard,
                     sech_pulse{ 4.2186e9, 2e14, 10, 2e14, 0.0 } });
    return { std::move(dev), std::move(sce) };
}

setup song2005()
{
    qm_operator hamiltonian({ 0, 2.3717e15 * HBAR, 2.4165e15 * HBAR });
    qm_operator dipole({ 0, 0, 0 }, { -E0 * 9.2374e-11,
                                      -E0 * 9.2374e-11 * std::sqrt(2.0),
                                      0.0 });
    const real rate = 1e10;
    lindblad_relaxation relax(
        { { 0, rate, rate }, { rate, 0, rate }, { rate, rate, 0 } },
        { 0, 0, 0 });
    const material ar("AR_Song",
                      qm_description(6e24, std::move(hamiltonian),
                                     std::move(dipole), std::move(relax)));
    material_library::ensure(ar);

    device dev("Song");
    dev.add_region({ "Active region (single point)", "AR_Song", 0, 0 });

    scenario sce("Basic", 1, 80e-15, qm_operator({ 1, 0, 0 }),
                 ic_field_const{ 0.0 }, ic_field_const{ 0.0 }, 10000);
    sce.add_record(record::from_name("e", 0.0, 0.0));
    sce.add_record({ "d11", record_quantity::density, 1, 1, 0.0, 0.0 });
    sce.add_record({ "d22", record_quantity::density, 2, 2, 0.0, 0.0 });
    sce.add_record({ "d33", record_quantity::density, 3, 3, 0.0, 0.0 });
    sce.add_source({ "sech", 0.0, source_kind::hard,
                     sech_pulse{ 3.5471e9, 3.8118e14, 17.248, 1.76 / 5e-15,
                                 -PI / 2 } });
    return { std::move(dev), std::move(sce) };
}

setup marskar2011(unsigned levels)
{
    const real w0 = 2 * PI * 1e13;
    std::vector<real> energies = marskar_ladder(levels);
    for (auto& en : energies) {
        en *= HBAR * w0;
    }
    /* nearest neighbor transitions with harmonic-oscillator scaling */
    std::vector<complex> dipoles(levels * (levels - 1) / 2, 0.0);
    std::vector<std::vector<real>> rates(levels,
                                         std::vector<real>(levels, 0.0));
    for (unsigned n = 1; n < levels; ++n) {
        dipoles[off_diag_index(n - 1, n)] = -E0 * 1e-9 * std::sqrt(real(n));
        rates[n - 1][n] = 1e10;
    }
    const std::string id = "AR_Marskar_" + std::to_string(levels) + "lvl";
    const material ar(
        id, qm_description(1e24, qm_operator(energies),
                           qm_operator(std::vector<real>(levels, 0.0), dipoles),
                           lindblad_relaxation(rates)));
    material_library::ensure(material("Vacuum"));
    material_library::ensure(ar);

    device dev("Marskar");
    dev.add_region({ "Vacuum left", "Vacuum", 0, 0.1e-3 });
    dev.add_region({ "Active region", id, 0.1e-3, 2.4e-3 });
    dev.add_region({ "Vacuum right", "Vacuum", 2.4e-3, 2.5e-3 });

    std::vector<real> rho(levels, 0.0);
    rho[0] = 1.0;
    scenario sce("Basic", 8192, 2e-9, qm_operator(rho),
                 ic_field_const{ 0.0 });
    sce.add_source({ "gauss", 0.0, source_kind::hard,
                     gaussian_pulse{ 1e6, 1e13, 1e-12, 300e-15, 0.0 } });
    sce.add_record({ "e_out", record_quantity::electric, 0, 0, 10e-15,
                     2.5e-3 });
    for (unsigned n = 1; n <= levels; ++n) {
        const std::string name = "d" + std::to_string(n) + std::to_string(n);
        sce.add_record({ name, record_quantity::density, n, n, 10e-15,
                         1.25e-3 });
    }
    return { std::move(dev), std::move(sce) };
}

setup tzenov2016()
{
    qm_operator hamiltonian(
        { 0.10103 * E0, 0.09677 * E0, 0.09720 * E0, 0.08129 * E0,
          0.07633 * E0 },
        { 0.0, 1.2329e-3 * E0, -1.3447e-3 * E0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
          0.0 });
    qm_operator dipole({ 0, 0, 0, 0, 0 },
                       { 0.0, 0.0, 0.0, 0.0, 0.0, -E0 * 4e-9, 0.0, 0.0, 0.0,
                         0.0 });
    std::vector<std::vector<real>> rates = {
        { 0.0000000, 0.4947e12, 0.0974e12, 0.8116e12, 1.0410e12 },
        { 0.8245e12, 0.0000000, 0.1358e12, 0.6621e12, 1.1240e12 },
        { 0.0229e12, 0.0469e12, 0.0000000, 0.0794e12, 0.0357e12 },
        { 0.0047e12, 0.0029e12, 0.1252e12, 0.0000000, 0.2810e12 },
        { 0.0049e12, 0.0049e12, 0.1101e12, 0.4949e12, 0.0000000 }
    };
    const real deph_inj_ull = 1.0 / 0.6e-12;
    const real deph_xxx_xxx = 1.0 / 1.0e-12;
    std::vector<real> dephasing = { 0,            deph_inj_ull, deph_inj_ull,
                                    deph_xxx_xxx, deph_xxx_xxx, deph_xxx_xxx,
                                    deph_xxx_xxx, deph_xxx_xxx, deph_xxx_xxx,
                                    deph_xxx_xxx };
    const material ar("AR",
                      qm_description(5.6e21, std::move(hamiltonian),
                                     std::move(dipole),
                                     lindblad_relaxation(rates, dephasing)),
                      12.96, 0.9, 1100);
    material_library::ensure(ar);

    device dev("tzenov2016", bc_reflectivity{ 0.8 }, bc_reflectivity{ 0.8 });
    /* desk scale cavity, the full 5 mm device via the length override */
    dev.add_region({ "Active region", "AR", 0, 0.5e-3 });

    scenario sce("basic", 4096, 200e-12, qm_operator({ 0, 0, 1, 0, 0 }));
    sce.add_record({ "e0", record_quantity::electric, 1, 1, 0.0, 0.0 });
    return { std::move(dev), std::move(sce) };
}

} // namespace

std::vector<real> marskar_ladder(unsigned levels)
{
    if (levels < 2) {
        throw std::invalid_argument("ladder requires at least 2 levels");
    }
    std::vector<real> energies(levels, 0.0);
    for (unsigned n = 1; n < levels; ++n) {
        energies[n] = energies[n - 1] + 1.0 - 0.1 * (real(n) - 3.0);
    }
    return energies;
}

std::vector<std::string> builtin_setups()
{
    return { "ziolkowski1995", "song2005", "marskar2011", "tzenov2016" };
}

void apply_overrides(setup& s, const setup_overrides& ovr)
{
    if (ovr.gridpoints) {
        s.sce.set_num_gridpoints(*ovr.gridpoints);
    }
    if (ovr.end_time) {
        s.sce.set_end_time(*ovr.end_time);
    }
    if (ovr.length) {
        if (s.dev.regions().size() != 1) {
            throw std::invalid_argument(
                "length override requires a device with a single region");
        }
        if (!(*ovr.length > 0.0)) {
            throw std::invalid_argument("length must be positive");
        }
        region reg = s.dev.regions().front();
        reg.x_end = *ovr.length;
        device dev(s.dev.name(), s.dev.bc_left(), s.dev.bc_right());
        dev.add_region(std::move(reg));
        s.dev = std::move(dev);
    }
    if (ovr.seed) {
        if (auto* r = std::get_if<ic_field_random>(&s.sce.ic_e())) {
            ic_field_random ic = *r;
            ic.seed = *ovr.seed;
            s.sce.set_ic_e(ic);
        }
        if (auto* r = std::get_if<ic_field_random>(&s.sce.ic_h())) {
            ic_field_random ic = *r;
            ic.seed = *ovr.seed;
            s.sce.set_ic_h(ic);
        }
    }
}

setup builtin_setup(const std::string& name, const setup_overrides& ovr)
{
    static const std::regex ladder("marskar2011-([0-9]+)lvl");
    std::smatch match;
    std::optional<setup> s;
    if (name == "ziolkowski1995") {
        s = ziolkowski1995();
    } else if (name == "song2005") {
        s = song2005();
    } else if (name == "tzenov2016") {
        s = tzenov2016();
    } else if (name == "marskar2011") {
        s = marskar2011(6);
    } else if (std::regex_match(name, match, ladder)) {
        const unsigned long levels = std::stoul(match[1].str());
        if (levels < 2 || levels > 64) {
            throw std::invalid_argument("marskar2011 requires 2 to 64 levels");
        }
        s = marskar2011(static_cast<unsigned>(levels));
    } else {
        std::string msg = "setup " + name + " not found, available:";
        for (const auto& n : builtin_setups()) {
            msg += " " + n;
        }
        throw not_found_error(msg);
    }
    apply_overrides(*s, ovr);
    return std::move(*s);
}

} // namespace mblight
