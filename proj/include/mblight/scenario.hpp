#ifndef MBLIGHT_SCENARIO_HPP
#define MBLIGHT_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>
#include <mblight/device.hpp>
#include <mblight/quantum.hpp>

namespace mblight {

enum class source_kind { hard, soft };

/** A sech(beta t - n0) cos(2 pi f t - phi) */
struct sech_pulse
{
    real amplitude = 0.0;
    real carrier_freq = 0.0;
    real envelope_shift = 0.0;
    real envelope_rate = 1.0;
    real carrier_phase = 0.0;

    bool operator==(const sech_pulse&) const = default;
};

/** A exp(-(t - t0)^2 / tau^2) cos(2 pi f t - phi) */
struct gaussian_pulse
{
    real amplitude = 0.0;
    real carrier_freq = 0.0;
    real peak_time = 0.0;
    real width = 1.0;
    real carrier_phase = 0.0;

    bool operator==(const gaussian_pulse&) const = default;
};

using waveform = std::variant<sech_pulse, gaussian_pulse>;

struct source
{
    std::string name;
    real position = 0.0;
    source_kind kind = source_kind::hard;
    waveform wave;

    bool operator==(const source&) const = default;
};

/** Value of the source waveform at time t, in V/m. */
real source_value(const source& src, real t);

enum class record_quantity { electric, magnetic, density, inversion };

/**
 * Request to record a quantity. A sample interval of 0 records every time
 * step; without a position the whole domain is recorded. Density records
 * use one-based level indices; off-diagonal elements are complex.
 */
struct record
{
    std::string name;
    record_quantity quantity = record_quantity::electric;
    unsigned row = 0;
    unsigned col = 0;
    real sample_interval = 0.0;
    std::optional<real> position;

    /**
     * Derives the quantity from a conventional name: "e", "h", "inv12" or
     * "dIJ" with single-digit level indices.
     */
    static record from_name(const std::string& name, real sample_interval,
                            std::optional<real> position = std::nullopt);

    bool is_complex() const
    {
        return quantity == record_quantity::density && row != col;
    }

    bool operator==(const record&) const = default;
};

struct ic_field_const
{
    real value = 0.0;

    bool operator==(const ic_field_const&) const = default;
};

/**
 * Uniform random values on [-amplitude, amplitude]. The generator is
 * std::mt19937_64 seeded with \c seed; each 64-bit output x maps to
 * u = (x >> 11) * 2^-53 and the value amplitude * (2u - 1).
 */
struct ic_field_random
{
    real amplitude = 1e-4;
    std::uint64_t seed = 0xB10C;

    bool operator==(const ic_field_random&) const = default;
};

struct ic_field_curve
{
    std::vector<real> samples;

    bool operator==(const ic_field_curve&) const = default;
};

using ic_field = std::variant<ic_field_const, ic_field_random, ic_field_curve>;

/** Materializes an initial field with \p count values. */
std::vector<real> sample_ic_field(const ic_field& ic, std::size_t count);

/**
 * Dynamic part of a setup: discretization request, end time, initial
 * conditions, sources and records.
 */
class scenario
{
public:
    scenario(std::string name, unsigned num_gridpoints, real end_time,
             qm_operator ic_density, ic_field ic_e = ic_field_random{},
             ic_field ic_h = ic_field_const{},
             std::optional<unsigned> num_timesteps = std::nullopt);

    const std::string& name() const { return m_name; }
    unsigned num_gridpoints() const { return m_num_gridpoints; }
    real end_time() const { return m_end_time; }
    const qm_operator& ic_density() const { return m_ic_density; }
    const ic_field& ic_e() const { return m_ic_e; }
    const ic_field& ic_h() const { return m_ic_h; }
    std::optional<unsigned> num_timesteps() const { return m_num_timesteps; }
    const std::vector<source>& sources() const { return m_sources; }
    const std::vector<record>& records() const { return m_records; }

    void set_num_gridpoints(unsigned n);
    void set_end_time(real t);
    void set_num_timesteps(std::optional<unsigned> n)
    {
        m_num_timesteps = n;
    }
    void set_ic_e(ic_field ic) { m_ic_e = std::move(ic); }
    void set_ic_h(ic_field ic) { m_ic_h = std::move(ic); }

    /** Throws std::invalid_argument for malformed waveform parameters. */
    void add_source(source src);

    /** Throws std::invalid_argument for duplicate names or bad intervals. */
    void add_record(record rec);

    bool operator==(const scenario&) const = default;

private:
    std::string m_name;
    unsigned m_num_gridpoints;
    real m_end_time;
    qm_operator m_ic_density;
    ic_field m_ic_e;
    ic_field m_ic_h;
    std::optional<unsigned> m_num_timesteps;
    std::vector<source> m_sources;
    std::vector<record> m_records;
};

/** All consistency problems of a device/scenario pair; empty if valid. */
std::vector<std::string> scenario_issues(const device& dev,
                                         const scenario& sce);

/** Throws validation_error listing every issue found. */
void scenario_validate(const device& dev, const scenario& sce);

} // namespace mblight

#endif
