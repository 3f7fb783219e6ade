#ifndef MBLIGHT_CLI_HPP
#define MBLIGHT_CLI_HPP

#include <iosfwd>

namespace mblight::cli {

/* exit codes */
inline constexpr int EXIT_OK = 0;
inline constexpr int EXIT_INVALID = 1;
inline constexpr int EXIT_RUNTIME = 2;

/**
 * Command line front end. Selects a setup (-d, built-in name or @file.json),
 * solver (-m) and writer (-w), runs the simulation and writes the results
 * to the output path (-o). Returns 0 on success, 1 on invalid input and 2
 * on failures during the run.
 */
int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

} // namespace mblight::cli

#endif
