#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "renormlab/bimodal.hpp"

namespace renormlab {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
    double root_tol = 1e-12;
    double residual_tol = 1e-10;
    double slope_tol = 1e-8;
    double renorm_tol = 1e-9;
    double conjugacy_tol = 1e-9;

    int tower_depth = 10;  // interval tower and I_1^10 check
    int fs_depth = 8;      // branch table of f_{s*}
    int renorm_levels = 6;
    int extension_depth = 12;
    int shift_length = 7;
    int shift_count = 50;
    int shift_alphabet = 3;
    double shift_amplitude = 0.05;

    int feasible_grid = 100000;
    int ratio_grid = 400;
    int sample_grid = 1000;

    std::vector<double> epsilons{0.98, 0.99, 1.0, 1.01, 1.02};
    std::uint64_t seed = 20240611;

    std::vector<Side> sides{Side::Left, Side::Right};
    OutputFormat format = OutputFormat::Csv;
    std::string out;  // empty: stdout

    /// Throws ConfigError on a value outside its documented range.
    void validate() const;

    /// Recorded in JSON output; excludes the output path.
    std::map<std::string, std::string> entries() const;
};

/// Applies one key=value setting; unknown keys and bad values throw.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads a key=value file ('#' starts a comment) on top of cfg.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Defaults, then the file named by RENORMLAB_CONFIG if set.
RunConfig config_from_environment();

std::vector<Side> parse_sides(const std::string& s);
OutputFormat parse_format(const std::string& s);
std::vector<double> parse_list(const std::string& s);

}  // namespace renormlab
