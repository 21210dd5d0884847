#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rtquad/experiments.hpp"

namespace rtquad::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_io = 3;

// Environment variable holding the default output directory.
inline constexpr const char* output_dir_env = "RTQUAD_OUTPUT_DIR";

struct RunConfig {
    std::string subcommand; // eval | example1 | example2 | sobolev
    std::uint64_t seed = default_seed;
    std::string output_dir = ".";

    // eval / sobolev
    std::string rule = "ctq";
    std::string integrand = "power";
    double gamma = 1.5;
    double constant = 1.0;
    double slope = 1.0;
    double total_time = 1.0;
    std::size_t intervals = 32;
    bool shared_nodes = false;

    // example1
    std::vector<double> gammas{1.25, 1.5, 1.75};
    std::vector<int> exponents{5, 6, 7, 8, 9, 10};
    std::size_t replications = 100;
    double p = 2.0;

    // example2
    int fine_exponent = 14;
    bool dump_path = false;

    // sobolev
    double sigma = 1.2;
    std::size_t cells = 512;
    double cutoff = 0.0; // 0 -> 2T/cells

    bool svg = false;
    bool timing = true;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Parses argv-style arguments (without the program name). Throws
// std::invalid_argument with a usage message on bad input.
RunConfig parse_args(const std::vector<std::string>& args);

// Textual form accepted by parse_args; parse_args(to_args(c)) == c.
std::vector<std::string> to_args(const RunConfig& config);

int cmd_eval(const RunConfig& config, std::ostream& out);
int cmd_example1(const RunConfig& config, std::ostream& out);
int cmd_example2(const RunConfig& config, std::ostream& out);
int cmd_sobolev(const RunConfig& config, std::ostream& out);

// Parses and dispatches; errors are reported on `err` and mapped to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rtquad::cli
