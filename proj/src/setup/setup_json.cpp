#include <fstream>
#include <map>
#include <sstream>
#include <json.hpp>
#include <mblight/errors.hpp>
#include <mblight/setup.hpp>

using json = nlohmann::json;

namespace mblight {

namespace {

/* structural error at a JSON pointer */
[[noreturn]] void fail(const std::string& ptr, const std::string& msg)
{
    throw validation_error({ (ptr.empty() ? "/" : ptr) + ": " + msg });
}

std::string child(const std::string& ptr, const std::string& key)
{
    return ptr + "/" + key;
}

std::string child(const std::string& ptr, std::size_t idx)
{
    return ptr + "/" + std::to_string(idx);
}

const json& require(const json& obj, const std::string& ptr,
                    const std::string& key)
{
    if (!obj.is_object()) {
        fail(ptr, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(child(ptr, key), "missing required value");
    }
    return *it;
}

const json* optional(const json& obj, const std::string& key)
{
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

real as_real(const json& v, const std::string& ptr)
{
    if (!v.is_number()) {
        fail(ptr, "expected a number");
    }
    return v.get<real>();
}

unsigned as_unsigned(const json& v, const std::string& ptr)
{
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 0xFFFFFFFFull) {
        fail(ptr, "expected a non-negative integer");
    }
    return v.get<unsigned>();
}

std::string as_string(const json& v, const std::string& ptr)
{
    if (!v.is_string()) {
        fail(ptr, "expected a string");
    }
    return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& ptr)
{
    if (!v.is_array()) {
        fail(ptr, "expected an array");
    }
    return v;
}

real get_real(const json& obj, const std::string& ptr, const std::string& key)
{
    return as_real(require(obj, ptr, key), child(ptr, key));
}

real get_real_or(const json& obj, const std::string& ptr,
                 const std::string& key, real fallback)
{
    const json* v = optional(obj, key);
    return v ? as_real(*v, child(ptr, key)) : fallback;
}

/* a complex value is a number or a pair [re, im] */
complex as_complex(const json& v, const std::string& ptr)
{
    if (v.is_number()) {
        return { v.get<real>(), 0.0 };
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() &&
        v[1].is_number()) {
        return { v[0].get<real>(), v[1].get<real>() };
    }
    fail(ptr, "expected a number or [re, im]");
}

std::vector<real> real_list(const json& v, const std::string& ptr)
{
    std::vector<real> out;
    for (std::size_t i = 0; i < as_array(v, ptr).size(); ++i) {
        out.push_back(as_real(v[i], child(ptr, i)));
    }
    return out;
}

std::vector<real> non_negative_list(const json& v, const std::string& ptr)
{
    std::vector<real> out = real_list(v, ptr);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] >= 0.0)) {
            fail(child(ptr, i), "rate must be non-negative");
        }
    }
    return out;
}

qm_operator parse_operator(const json& v, const std::string& ptr)
{
    const std::string dptr = child(ptr, "diag");
    std::vector<real> diag = real_list(require(v, ptr, "diag"), dptr);
    std::vector<complex> off;
    if (const json* o = optional(v, "offdiag")) {
        const std::string optr = child(ptr, "offdiag");
        for (std::size_t i = 0; i < as_array(*o, optr).size(); ++i) {
            off.push_back(as_complex((*o)[i], child(optr, i)));
        }
    }
    const std::size_t n = diag.size();
    if (n == 0) {
        fail(dptr, "operator needs at least one diagonal entry");
    }
    if (!off.empty() && off.size() != n * (n - 1) / 2) {
        fail(child(ptr, "offdiag"),
             "expected " + std::to_string(n * (n - 1) / 2) + " entries");
    }
    return qm_operator(std::move(diag), std::move(off));
}

qm_description parse_qm(const json& v, const std::string& ptr)
{
    const std::string type =
        as_string(require(v, ptr, "type"), child(ptr, "type"));
    const real density = get_real(v, ptr, "density_3d");
    if (!(density > 0.0)) {
        fail(child(ptr, "density_3d"), "must be positive");
    }
    if (type == "two_level") {
        real omega = 0.0;
        const json* w = optional(v, "transition_angular_freq");
        const json* f = optional(v, "transition_freq");
        if ((w == nullptr) == (f == nullptr)) {
            fail(ptr, "give exactly one of transition_freq (Hz) and "
                      "transition_angular_freq (rad/s)");
        }
        if (w != nullptr) {
            omega = as_real(*w, child(ptr, "transition_angular_freq"));
        } else {
            omega = 2 * PI * as_real(*f, child(ptr, "transition_freq"));
        }
        const real gamma1 = get_real(v, ptr, "gamma1");
        const real gamma2 = get_real(v, ptr, "gamma2");
        if (!(gamma1 >= 0.0)) {
            fail(child(ptr, "gamma1"), "rate must be non-negative");
        }
        if (!(gamma2 >= 0.5 * gamma1)) {
            fail(child(ptr, "gamma2"), "must be at least gamma1/2");
        }
        const real w0 = get_real(v, ptr, "equilibrium_inversion");
        if (!(std::abs(w0) <= 1.0)) {
            fail(child(ptr, "equilibrium_inversion"), "must lie in [-1, 1]");
        }
        return make_two_level_desc(density, omega,
                                   get_real(v, ptr, "dipole_length"), gamma1,
                                   gamma2, w0);
    }
    if (type != "generic") {
        fail(child(ptr, "type"), "unknown type " + type +
                                     ", expected two_level or generic");
    }

    qm_operator ham =
        parse_operator(require(v, ptr, "hamiltonian"), child(ptr, "hamiltonian"));
    qm_operator dip =
        parse_operator(require(v, ptr, "dipole"), child(ptr, "dipole"));
    const std::size_t n = ham.dim();
    if (dip.dim() != n) {
        fail(child(ptr, "dipole"), "dimension differs from the Hamiltonian");
    }

    const std::string rptr = child(ptr, "rates");
    std::vector<std::vector<real>> rates;
    if (const json* r = optional(v, "rates")) {
        if (as_array(*r, rptr).size() != n) {
            fail(rptr, "expected " + std::to_string(n) + " rows");
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::string row_ptr = child(rptr, i);
            if (as_array((*r)[i], row_ptr).size() != n) {
                fail(row_ptr, "expected " + std::to_string(n) + " entries");
            }
            std::vector<real> row = real_list((*r)[i], row_ptr);
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && !(row[j] >= 0.0)) {
                    fail(child(row_ptr, j), "rate must be non-negative");
                }
            }
            rates.push_back(std::move(row));
        }
    } else {
        rates.assign(n, std::vector<real>(n, 0.0));
    }

    std::vector<real> deph;
    if (const json* d = optional(v, "pure_dephasing")) {
        const std::string dptr = child(ptr, "pure_dephasing");
        deph = non_negative_list(*d, dptr);
        if (deph.size() != n * (n - 1) / 2) {
            fail(dptr, "expected " + std::to_string(n * (n - 1) / 2) +
                           " entries");
        }
    }
    return qm_description(density, std::move(ham), std::move(dip),
                          lindblad_relaxation(std::move(rates),
                                              std::move(deph)));
}

material parse_material(const json& v, const std::string& ptr)
{
    const std::string id = as_string(require(v, ptr, "id"), child(ptr, "id"));
    std::optional<qm_description> qm;
    if (const json* q = optional(v, "qm")) {
        qm = parse_qm(*q, child(ptr, "qm"));
    }
    const real eps = get_real_or(v, ptr, "rel_permittivity", 1.0);
    const real mu = get_real_or(v, ptr, "rel_permeability", 1.0);
    const real overlap = get_real_or(v, ptr, "overlap_factor", 1.0);
    const real losses = get_real_or(v, ptr, "losses", 0.0);
    if (!(eps >= 1.0)) {
        fail(child(ptr, "rel_permittivity"), "must be at least 1");
    }
    if (!(mu > 0.0)) {
        fail(child(ptr, "rel_permeability"), "must be positive");
    }
    if (!(overlap >= 0.0 && overlap <= 1.0)) {
        fail(child(ptr, "overlap_factor"), "must lie in [0, 1]");
    }
    if (!(losses >= 0.0)) {
        fail(child(ptr, "losses"), "must be non-negative");
    }
    return material(id, std::move(qm), eps, overlap, losses, mu);
}

ic_field parse_ic_field(const json& v, const std::string& ptr)
{
    const std::string type =
        as_string(require(v, ptr, "type"), child(ptr, "type"));
    if (type == "const") {
        return ic_field_const{ get_real_or(v, ptr, "value", 0.0) };
    }
    if (type == "random") {
        ic_field_random ic;
        ic.amplitude = get_real_or(v, ptr, "amplitude", ic.amplitude);
        if (const json* s = optional(v, "seed")) {
            if (!s->is_number_unsigned()) {
                fail(child(ptr, "seed"), "expected a non-negative integer");
            }
            ic.seed = s->get<std::uint64_t>();
        }
        return ic;
    }
    if (type == "curve") {
        return ic_field_curve{ real_list(require(v, ptr, "samples"),
                                         child(ptr, "samples")) };
    }
    fail(child(ptr, "type"), "unknown type " + type +
                                 ", expected const, random or curve");
}

source parse_source(const json& v, const std::string& ptr)
{
    source src;
    src.name = as_string(require(v, ptr, "name"), child(ptr, "name"));
    src.position = get_real(v, ptr, "position");
    const std::string kind =
        as_string(require(v, ptr, "kind"), child(ptr, "kind"));
    if (kind == "hard") {
        src.kind = source_kind::hard;
    } else if (kind == "soft") {
        src.kind = source_kind::soft;
    } else {
        fail(child(ptr, "kind"), "expected hard or soft");
    }
    const std::string wptr = child(ptr, "waveform");
    const json& w = require(v, ptr, "waveform");
    const std::string type =
        as_string(require(w, wptr, "type"), child(wptr, "type"));
    if (type == "sech") {
        sech_pulse p;
        p.amplitude = get_real(w, wptr, "amplitude");
        p.carrier_freq = get_real(w, wptr, "carrier_freq");
        p.envelope_shift = get_real(w, wptr, "envelope_shift");
        p.envelope_rate = get_real(w, wptr, "envelope_rate");
        p.carrier_phase = get_real_or(w, wptr, "carrier_phase", 0.0);
        if (!(p.envelope_rate > 0.0)) {
            fail(child(wptr, "envelope_rate"), "must be positive");
        }
        src.wave = p;
    } else if (type == "gaussian") {
        gaussian_pulse p;
        p.amplitude = get_real(w, wptr, "amplitude");
        p.carrier_freq = get_real(w, wptr, "carrier_freq");
        p.peak_time = get_real(w, wptr, "peak_time");
        p.width = get_real(w, wptr, "width");
        p.carrier_phase = get_real_or(w, wptr, "carrier_phase", 0.0);
        if (!(p.width > 0.0)) {
            fail(child(wptr, "width"), "must be positive");
        }
        src.wave = p;
    } else {
        fail(child(wptr, "type"), "unknown type " + type +
                                      ", expected sech or gaussian");
    }
    return src;
}

record parse_record(const json& v, const std::string& ptr)
{
    const std::string name =
        as_string(require(v, ptr, "name"), child(ptr, "name"));
    const real interval = get_real_or(v, ptr, "sample_interval", 0.0);
    if (!(interval >= 0.0)) {
        fail(child(ptr, "sample_interval"), "must be non-negative");
    }
    std::optional<real> position;
    if (const json* p = optional(v, "position")) {
        position = as_real(*p, child(ptr, "position"));
    }
    const json* q = optional(v, "quantity");
    if (q == nullptr) {
        try {
            return record::from_name(name, interval, position);
        } catch (const std::invalid_argument&) {
            fail(child(ptr, "name"),
                 "quantity missing and not derivable from the name");
        }
    }
    record rec;
    rec.name = name;
    rec.sample_interval = interval;
    rec.position = position;
    const std::string qty = as_string(*q, child(ptr, "quantity"));
    if (qty == "e") {
        rec.quantity = record_quantity::electric;
    } else if (qty == "h") {
        rec.quantity = record_quantity::magnetic;
    } else if (qty == "inversion") {
        rec.quantity = record_quantity::inversion;
        rec.row = 2;
        rec.col = 1;
    } else if (qty == "density") {
        rec.quantity = record_quantity::density;
        rec.row = as_unsigned(require(v, ptr, "row"), child(ptr, "row"));
        rec.col = as_unsigned(require(v, ptr, "col"), child(ptr, "col"));
    } else {
        fail(child(ptr, "quantity"),
             "expected e, h, inversion or density");
    }
    if (const json* r = optional(v, "row"); r && qty != "density") {
        rec.row = as_unsigned(*r, child(ptr, "row"));
    }
    if (const json* c = optional(v, "col"); c && qty != "density") {
        rec.col = as_unsigned(*c, child(ptr, "col"));
    }
    return rec;
}

} // namespace

setup parse_setup(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        fail("", std::string("malformed JSON: ") + ex.what());
    }
    if (!doc.is_object()) {
        fail("", "expected an object");
    }
    const json& schema = require(doc, "", "schema");
    if (!schema.is_number_unsigned() || schema.get<unsigned>() != 1) {
        fail("/schema", "unsupported schema version, expected 1");
    }

    /* materials */
    std::map<std::string, material> defined;
    if (const json* mats = optional(doc, "materials")) {
        for (std::size_t i = 0; i < as_array(*mats, "/materials").size();
             ++i) {
            const std::string ptr = child("/materials", i);
            std::optional<material> parsed;
            try {
                parsed = parse_material((*mats)[i], ptr);
            } catch (const validation_error&) {
                throw;
            } catch (const std::invalid_argument& ex) {
                fail(ptr, ex.what());
            }
            material mat = std::move(*parsed);
            if (defined.count(mat.id()) != 0) {
                fail(child(ptr, "id"), "duplicate material " + mat.id());
            }
            defined.emplace(mat.id(), std::move(mat));
        }
    }

    /* device */
    const std::string name =
        as_string(require(doc, "", "name"), "/name");
    bc_reflectivity left, right;
    if (const json* b = optional(doc, "boundaries")) {
        left.reflectivity = get_real_or(*b, "/boundaries", "left", 1.0);
        right.reflectivity = get_real_or(*b, "/boundaries", "right", 1.0);
        if (!(left.reflectivity >= 0.0 && left.reflectivity <= 1.0)) {
            fail("/boundaries/left", "reflectivity must lie in [0, 1]");
        }
        if (!(right.reflectivity >= 0.0 && right.reflectivity <= 1.0)) {
            fail("/boundaries/right", "reflectivity must lie in [0, 1]");
        }
    }
    device dev(name, left, right);

    const json* regions = optional(doc, "regions");
    if (regions == nullptr || as_array(*regions, "/regions").empty()) {
        fail("/regions", "device has no regions");
    }
    for (std::size_t i = 0; i < regions->size(); ++i) {
        const std::string ptr = child("/regions", i);
        const json& r = (*regions)[i];
        region reg;
        reg.name = as_string(require(r, ptr, "name"), child(ptr, "name"));
        reg.material_id =
            as_string(require(r, ptr, "material"), child(ptr, "material"));
        reg.x_start = get_real(r, ptr, "x_start");
        reg.x_end = get_real(r, ptr, "x_end");
        auto it = defined.find(reg.material_id);
        try {
            if (it != defined.end()) {
                material_library::ensure(it->second);
            } else if (!material_library::contains(reg.material_id)) {
                fail(child(ptr, "material"),
                     "unknown material " + reg.material_id);
            }
            dev.add_region(std::move(reg));
        } catch (const conflict_error& ex) {
            fail(child(ptr, "material"), ex.what());
        } catch (const validation_error&) {
            throw;
        } catch (const std::invalid_argument& ex) {
            fail(ptr, ex.what());
        }
    }

    /* scenario */
    const std::string sptr = "/scenario";
    const json& s = require(doc, "", "scenario");
    const std::string sce_name =
        as_string(require(s, sptr, "name"), child(sptr, "name"));
    const unsigned nx = as_unsigned(require(s, sptr, "num_gridpoints"),
                                    child(sptr, "num_gridpoints"));
    if (nx < 1) {
        fail(child(sptr, "num_gridpoints"), "must be at least 1");
    }
    const real end = get_real(s, sptr, "end_time");
    if (!(end > 0.0)) {
        fail(child(sptr, "end_time"), "must be positive");
    }
    std::optional<unsigned> num_t;
    if (const json* t = optional(s, "num_timesteps")) {
        num_t = as_unsigned(*t, child(sptr, "num_timesteps"));
    }
    const std::string iptr = child(sptr, "initial");
    const json& init = require(s, sptr, "initial");
    qm_operator rho =
        parse_operator(require(init, iptr, "density"), child(iptr, "density"));
    ic_field ic_e = ic_field_random{};
    ic_field ic_h = ic_field_const{};
    if (const json* e = optional(init, "e_field")) {
        ic_e = parse_ic_field(*e, child(iptr, "e_field"));
    }
    if (const json* h = optional(init, "h_field")) {
        ic_h = parse_ic_field(*h, child(iptr, "h_field"));
    }
    scenario sce(sce_name, nx, end, std::move(rho), std::move(ic_e),
                 std::move(ic_h), num_t);

    if (const json* srcs = optional(s, "sources")) {
        const std::string ptr = child(sptr, "sources");
        for (std::size_t i = 0; i < as_array(*srcs, ptr).size(); ++i) {
            try {
                sce.add_source(parse_source((*srcs)[i], child(ptr, i)));
            } catch (const validation_error&) {
                throw;
            } catch (const std::invalid_argument& ex) {
                fail(child(ptr, i), ex.what());
            }
        }
    }
    if (const json* recs = optional(s, "records")) {
        const std::string ptr = child(sptr, "records");
        for (std::size_t i = 0; i < as_array(*recs, ptr).size(); ++i) {
            try {
                sce.add_record(parse_record((*recs)[i], child(ptr, i)));
            } catch (const validation_error&) {
                throw;
            } catch (const std::invalid_argument& ex) {
                fail(child(ptr, i), ex.what());
            }
        }
    }

    scenario_validate(dev, sce);
    return { std::move(dev), std::move(sce) };
}

setup parse_setup_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open setup file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_setup(buf.str());
}

} // namespace mblight
