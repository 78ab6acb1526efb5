#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sgpv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitConfig = 3;

enum class Scale { Raw, Log10 };
enum class OutputFormat { Csv, Json };

// Resolved run configuration: built-in defaults, then the --config JSON file,
// then command-line flags (flags win).
struct RunConfig {
    std::optional<double> null_point;
    std::optional<double> delta;
    std::optional<double> null_lo;
    std::optional<double> null_hi;
    double alpha = 0.05;
    double level = 0.95;
    Scale scale = Scale::Raw;
    OutputFormat format = OutputFormat::Csv;
    std::optional<std::uint64_t> seed;
    int digits = 6;
    bool welch = false;

    // design / reliability / simulate
    std::optional<std::string> grid;
    double n = 16.0;
    double variance = 1.0;
    double r = 1.0;
    std::optional<double> theta;
    std::optional<double> theta1;
    std::uint64_t replicates = 100000;
    unsigned threads = 0;

    // screen
    bool crosstab = false;
    std::optional<std::string> summary_path;
};

// Parses "start:stop:step" (inclusive) or a comma separated list. Throws
// sgpv::Error(InvalidConfig) on malformed input.
std::vector<double> parse_grid(const std::string& spec);

// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgpv::cli
