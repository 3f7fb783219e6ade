#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <json.hpp>
#include <mblight/errors.hpp>
#include <mblight/fdtd.hpp>
#include <mblight/writer.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace mblight {

namespace {

bool valid_result_name(const std::string& name)
{
    if (name.empty() || name.front() == '.') {
        return false;
    }
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
            (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (!ok) {
            return false;
        }
    }
    return true;
}

void write_payload(const fs::path& file, const std::vector<real>& values)
{
    std::vector<unsigned char> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(values[i]);
        for (int b = 0; b < 8; ++b) {
            bytes[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
        }
    }
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
        throw std::runtime_error("cannot write " + file.string());
    }
}

std::vector<real> read_payload(const fs::path& file, std::size_t count)
{
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw corrupt_archive_error("missing payload " + file.string());
    }
    std::vector<unsigned char> bytes(count * 8);
    in.read(reinterpret_cast<char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
        throw corrupt_archive_error("short payload " + file.string());
    }
    if (in.peek() != std::ifstream::traits_type::eof()) {
        throw corrupt_archive_error("oversized payload " + file.string());
    }
    std::vector<real> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) {
            bits |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
        }
        values[i] = std::bit_cast<real>(bits);
    }
    return values;
}

std::optional<std::uint64_t> random_seed(const scenario& sce)
{
    for (const ic_field* ic : { &sce.ic_e(), &sce.ic_h() }) {
        if (const auto* r = std::get_if<ic_field_random>(ic)) {
            return r->seed;
        }
    }
    return std::nullopt;
}

} // namespace

void raw_writer::write(const std::vector<result>& results, const device& dev,
                       const scenario& sce, const std::string& path) const
{
    std::set<std::string> names;
    for (const auto& res : results) {
        if (!valid_result_name(res.name)) {
            throw std::invalid_argument("result name '" + res.name +
                                        "' is not usable as file name");
        }
        if (!names.insert(res.name).second) {
            throw std::invalid_argument("duplicate result name " + res.name);
        }
        if (res.real_part.size() != res.rows * res.cols ||
            (res.is_complex && res.imag_part.size() != res.rows * res.cols)) {
            throw std::invalid_argument("result " + res.name +
                                        ": data size does not match shape");
        }
        for (real v : { res.t0, res.dt_sample, res.x0, res.dx }) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("result " + res.name +
                                            ": non-finite axis value");
            }
        }
    }

    const grid_layout grid = init_fdtd_simulation(dev, sce);
    const fs::path dir(path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create " + dir.string() + ": " +
                                 ec.message());
    }

    json meta;
    meta["format"] = "mblight-raw";
    meta["version"] = 1;
    meta["device"] = dev.name();
    meta["scenario"] = sce.name();
    meta["dx"] = grid.dx;
    meta["dt"] = grid.dt;
    meta["num_x"] = grid.num_x;
    meta["num_t"] = grid.num_t;
    meta["length"] = dev.length();
    meta["end_time"] = sce.end_time();
    if (auto seed = random_seed(sce)) {
        meta["seed"] = *seed;
    } else {
        meta["seed"] = nullptr;
    }
    meta["results"] = json::array();
    for (const auto& res : results) {
        meta["results"].push_back({ { "name", res.name },
                                    { "rows", res.rows },
                                    { "cols", res.cols },
                                    { "is_complex", res.is_complex },
                                    { "t0", res.t0 },
                                    { "dt_sample", res.dt_sample },
                                    { "x0", res.x0 },
                                    { "dx", res.dx } });
        write_payload(dir / (res.name + ".real.f64"), res.real_part);
        const fs::path imag = dir / (res.name + ".imag.f64");
        if (res.is_complex) {
            write_payload(imag, res.imag_part);
        } else {
            fs::remove(imag, ec);
        }
    }

    std::ofstream out(dir / "meta.json", std::ios::trunc);
    out << meta.dump(2) << '\n';
    out.close();
    if (!out) {
        throw std::runtime_error("cannot write " +
                                 (dir / "meta.json").string());
    }
}

archive read_archive(const std::string& path)
{
    const fs::path dir(path);
    const fs::path meta_file = dir / "meta.json";
    std::ifstream in(meta_file);
    if (!in) {
        throw corrupt_archive_error("missing " + meta_file.string());
    }
    archive arc;
    try {
        const json meta = json::parse(in);
        arc.device_name = meta.at("device").get<std::string>();
        arc.scenario_name = meta.at("scenario").get<std::string>();
        arc.dx = meta.at("dx").get<real>();
        arc.dt = meta.at("dt").get<real>();
        arc.num_x = meta.at("num_x").get<unsigned>();
        arc.num_t = meta.at("num_t").get<unsigned>();
        arc.length = meta.at("length").get<real>();
        arc.end_time = meta.at("end_time").get<real>();
        if (meta.contains("seed") && !meta.at("seed").is_null()) {
            arc.seed = meta.at("seed").get<std::uint64_t>();
        }
        for (const auto& d : meta.at("results")) {
            result res;
            res.name = d.at("name").get<std::string>();
            res.rows = d.at("rows").get<std::size_t>();
            res.cols = d.at("cols").get<std::size_t>();
            res.is_complex = d.at("is_complex").get<bool>();
            res.t0 = d.at("t0").get<real>();
            res.dt_sample = d.at("dt_sample").get<real>();
            res.x0 = d.at("x0").get<real>();
            res.dx = d.at("dx").get<real>();
            arc.results.push_back(std::move(res));
        }
    } catch (const json::exception& ex) {
        throw corrupt_archive_error(meta_file.string() + ": " + ex.what());
    }

    for (auto& res : arc.results) {
        if (!valid_result_name(res.name)) {
            throw corrupt_archive_error(meta_file.string() +
                                        ": invalid result name " + res.name);
        }
        const std::size_t count = res.rows * res.cols;
        res.real_part = read_payload(dir / (res.name + ".real.f64"), count);
        const fs::path imag = dir / (res.name + ".imag.f64");
        const bool has_imag = fs::exists(imag);
        if (res.is_complex && !has_imag) {
            throw corrupt_archive_error("missing payload " + imag.string());
        }
        if (!res.is_complex && has_imag) {
            throw corrupt_archive_error("unexpected payload " + imag.string() +
                                        " for real result");
        }
        if (res.is_complex) {
            res.imag_part = read_payload(imag, count);
        }
    }
    return arc;
}

writer_registry& writers()
{
    static writer_registry reg("writer");
    static const bool registered = [] {
        reg.add("raw", [] { return std::make_unique<raw_writer>(); });
        return true;
    }();
    (void)registered;
    return reg;
}

std::unique_ptr<writer> create_writer(const std::string& name)
{
    return writers().create(name);
}

std::vector<std::string> available_writers()
{
    return writers().names();
}

} // namespace mblight
