#ifndef MBLIGHT_WRITER_HPP
#define MBLIGHT_WRITER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>
#include <mblight/device.hpp>
#include <mblight/registry.hpp>
#include <mblight/result.hpp>
#include <mblight/scenario.hpp>

namespace mblight {

/**
 * Contents of a result archive: setup metadata and the stored results.
 */
struct archive
{
    std::string device_name;
    std::string scenario_name;
    real dx = 0.0;
    real dt = 0.0;
    unsigned num_x = 0;
    unsigned num_t = 0;
    real length = 0.0;
    real end_time = 0.0;
    /* seed of a random initial field, if any */
    std::optional<std::uint64_t> seed;
    std::vector<result> results;
};

class writer
{
public:
    virtual ~writer() = default;

    virtual std::string name() const = 0;

    /**
     * Stores the results together with the grid metadata derived from
     * the setup. Throws std::invalid_argument for duplicate or unusable
     * result names and std::runtime_error on I/O failure.
     */
    virtual void write(const std::vector<result>& results, const device& dev,
                       const scenario& sce, const std::string& path) const = 0;
};

/**
 * Directory archive: meta.json plus one raw little-endian float64 file
 * per result part (<name>.real.f64, <name>.imag.f64), time-major without
 * header.
 */
class raw_writer : public writer
{
public:
    std::string name() const override { return "raw"; }

    void write(const std::vector<result>& results, const device& dev,
               const scenario& sce, const std::string& path) const override;
};

/** Reads a raw archive. Throws corrupt_archive_error naming the file. */
archive read_archive(const std::string& path);

using writer_registry = registry<writer>;

writer_registry& writers();

std::unique_ptr<writer> create_writer(const std::string& name);

std::vector<std::string> available_writers();

} // namespace mblight

#endif
