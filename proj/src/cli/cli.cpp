#include <chrono>
#include <iostream>
#include <CLI11.hpp>
#include <mblight/cli.hpp>
#include <mblight/errors.hpp>
#include <mblight/fdtd.hpp>
#include <mblight/setup.hpp>
#include <mblight/solver.hpp>
#include <mblight/writer.hpp>

namespace mblight::cli {

namespace {

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& s : items) {
        out += (out.empty() ? "" : ", ") + s;
    }
    return out;
}

} // namespace

int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err)
{
    CLI::App app("Maxwell-Bloch solver for one-dimensional devices",
                 "mblight-tool");
    std::string device_name;
    std::string method = "fdtd-reg-cayley";
    std::string writer_name = "raw";
    std::string output;
    std::optional<unsigned> gridpoints;
    std::optional<real> end_time;
    std::optional<real> length;
    std::uint64_t seed = 0xB10C;
    bool list = false;

    app.add_option("-d,--device", device_name,
                   "Setup: built-in name or @file.json");
    app.add_option("-m,--method", method, "Solver");
    app.add_option("-w,--writer", writer_name, "Writer");
    app.add_option("-g,--gridpoints", gridpoints,
                   "Number of spatial grid points")
        ->check(CLI::PositiveNumber);
    app.add_option("-e,--endtime", end_time, "Simulation end time in s")
        ->check(CLI::PositiveNumber);
    app.add_option("-L,--length", length,
                   "Device length in m (single-region setups)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Seed of random initial fields");
    app.add_option("-o,--output", output,
                   "Output path (default <device>_<scenario>)");
    app.add_flag("--list", list, "List solvers, writers and built-in setups");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return EXIT_OK;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return EXIT_INVALID;
    }

    if (list) {
        out << "solvers: " << join(available_solvers()) << "\n";
        out << "writers: " << join(available_writers()) << "\n";
        out << "setups: " << join(builtin_setups()) << "\n";
        return EXIT_OK;
    }
    if (device_name.empty()) {
        err << "error: no setup given (-d)\n";
        return EXIT_INVALID;
    }

    std::optional<setup> s;
    std::unique_ptr<solver> sol;
    std::unique_ptr<writer> wri;
    grid_layout grid;
    try {
        setup_overrides ovr;
        ovr.gridpoints = gridpoints;
        ovr.end_time = end_time;
        ovr.length = length;
        /* the default seed applies too, so runs stay reproducible */
        ovr.seed = seed;
        if (device_name.front() == '@') {
            s = parse_setup_file(device_name.substr(1));
            apply_overrides(*s, ovr);
        } else {
            s = builtin_setup(device_name, ovr);
        }
        solver_options opts;
        opts.num_threads = default_thread_count();
        sol = create_solver(method, opts);
        wri = create_writer(writer_name);
        scenario_validate(s->dev, s->sce);
        grid = init_fdtd_simulation(s->dev, s->sce);
    } catch (const validation_error& ex) {
        err << "error: " << ex.what() << "\n";
        return EXIT_INVALID;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return EXIT_INVALID;
    } catch (const not_found_error& ex) {
        err << "error: " << ex.what() << "\n";
        return EXIT_INVALID;
    } catch (const conflict_error& ex) {
        err << "error: " << ex.what() << "\n";
        return EXIT_INVALID;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return EXIT_RUNTIME;
    }

    if (output.empty()) {
        output = s->dev.name() + "_" + s->sce.name();
    }
    err << "setup " << device_name << ", solver " << sol->name()
        << ", writer " << wri->name() << "\n";
    err << "grid: N_x = " << grid.num_x << ", dx = " << grid.dx
        << " m, N_t = " << grid.num_t << ", dt = " << grid.dt << " s\n";

    try {
        const auto start = std::chrono::steady_clock::now();
        const auto results = sol->run(s->dev, s->sce);
        const auto mid = std::chrono::steady_clock::now();
        wri->write(results, s->dev, s->sce, output);
        const auto stop = std::chrono::steady_clock::now();
        const std::chrono::duration<double> run_time = mid - start;
        const std::chrono::duration<double> write_time = stop - mid;
        err << "time required (run): " << run_time.count() << " s\n";
        err << "time required (write): " << write_time.count() << " s\n";
        err << "results written to " << output << "\n";
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return EXIT_RUNTIME;
    }
    return EXIT_OK;
}

} // namespace mblight::cli
