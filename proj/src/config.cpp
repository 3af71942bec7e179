#include "renormlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace renormlab {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& raw)
{
    const std::string v = trim(raw);
    T out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty())
        throw ConfigError("bad value for " + key + ": '" + raw + "'");
    return out;
}

std::string format_double(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, r.ptr};
}

}  // namespace

std::vector<Side> parse_sides(const std::string& raw)
{
    const std::string s = trim(raw);
    if (s == "l" || s == "left")
        return {Side::Left};
    if (s == "r" || s == "right")
        return {Side::Right};
    if (s == "both" || s == "lr")
        return {Side::Left, Side::Right};
    throw ConfigError("side must be l, r or both, got '" + raw + "'");
}

OutputFormat parse_format(const std::string& raw)
{
    const std::string s = trim(raw);
    if (s == "csv")
        return OutputFormat::Csv;
    if (s == "json")
        return OutputFormat::Json;
    throw ConfigError("format must be csv or json, got '" + raw + "'");
}

std::vector<double> parse_list(const std::string& raw)
{
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            out.push_back(parse_number<double>("list", item));
    return out;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value)
{
    const std::string key = trim(raw_key);
    using Setter = std::function<void(RunConfig&, const std::string&)>;
    auto real = [](double RunConfig::*m) {
        return Setter([m](RunConfig& c, const std::string& v) { c.*m = parse_number<double>("value", v); });
    };
    auto integer = [](int RunConfig::*m) {
        return Setter([m](RunConfig& c, const std::string& v) { c.*m = parse_number<int>("value", v); });
    };
    static const std::map<std::string, Setter> setters{
        {"root_tol", real(&RunConfig::root_tol)},
        {"residual_tol", real(&RunConfig::residual_tol)},
        {"slope_tol", real(&RunConfig::slope_tol)},
        {"renorm_tol", real(&RunConfig::renorm_tol)},
        {"conjugacy_tol", real(&RunConfig::conjugacy_tol)},
        {"tower_depth", integer(&RunConfig::tower_depth)},
        {"fs_depth", integer(&RunConfig::fs_depth)},
        {"renorm_levels", integer(&RunConfig::renorm_levels)},
        {"extension_depth", integer(&RunConfig::extension_depth)},
        {"shift_length", integer(&RunConfig::shift_length)},
        {"shift_count", integer(&RunConfig::shift_count)},
        {"shift_alphabet", integer(&RunConfig::shift_alphabet)},
        {"shift_amplitude", real(&RunConfig::shift_amplitude)},
        {"feasible_grid", integer(&RunConfig::feasible_grid)},
        {"ratio_grid", integer(&RunConfig::ratio_grid)},
        {"sample_grid", integer(&RunConfig::sample_grid)},
        {"epsilons", [](RunConfig& c, const std::string& v) { c.epsilons = parse_list(v); }},
        {"seed", [](RunConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>("seed", v); }},
        {"side", [](RunConfig& c, const std::string& v) { c.sides = parse_sides(v); }},
        {"format", [](RunConfig& c, const std::string& v) { c.format = parse_format(v); }},
        {"out", [](RunConfig& c, const std::string& v) { c.out = trim(v); }},
    };
    const auto it = setters.find(key);
    if (it == setters.end())
        throw ConfigError("unknown config key '" + key + "'");
    try {
        it->second(cfg, value);
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

RunConfig config_from_environment()
{
    RunConfig cfg;
    if (const char* path = std::getenv("RENORMLAB_CONFIG"); path && *path)
        apply_config_file(cfg, path);
    return cfg;
}

void RunConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw ConfigError(std::string(name) + " must be > 0");
    };
    auto range = [](int v, int lo, int hi, const char* name) {
        if (v < lo || v > hi)
            throw ConfigError(std::string(name) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "], got " + std::to_string(v));
    };
    positive(root_tol, "root_tol");
    positive(residual_tol, "residual_tol");
    positive(slope_tol, "slope_tol");
    positive(renorm_tol, "renorm_tol");
    positive(conjugacy_tol, "conjugacy_tol");
    positive(shift_amplitude, "shift_amplitude");
    range(tower_depth, 1, 30, "tower_depth");
    range(fs_depth, 2, 10, "fs_depth");
    // zoom composes 3^n branches; beyond 6 levels double precision runs out
    range(renorm_levels, 0, std::min(6, fs_depth - 1), "renorm_levels");
    range(extension_depth, 2, 40, "extension_depth");
    range(shift_length, 2, extension_depth, "shift_length");
    range(shift_count, 1, 10000, "shift_count");
    range(shift_alphabet, 1, 16, "shift_alphabet");
    range(feasible_grid, 1000, 10000000, "feasible_grid");
    range(ratio_grid, 0, 10000000, "ratio_grid");
    range(sample_grid, 2, 10000000, "sample_grid");
    if (sides.empty())
        throw ConfigError("no side selected");
}

std::map<std::string, std::string> RunConfig::entries() const
{
    std::string eps;
    for (double e : epsilons)
        eps += (eps.empty() ? "" : ",") + format_double(e);
    std::string side = sides.size() == 2 ? "both" : (sides.front() == Side::Left ? "l" : "r");
    return {
        {"root_tol", format_double(root_tol)},
        {"residual_tol", format_double(residual_tol)},
        {"slope_tol", format_double(slope_tol)},
        {"renorm_tol", format_double(renorm_tol)},
        {"conjugacy_tol", format_double(conjugacy_tol)},
        {"tower_depth", std::to_string(tower_depth)},
        {"fs_depth", std::to_string(fs_depth)},
        {"renorm_levels", std::to_string(renorm_levels)},
        {"extension_depth", std::to_string(extension_depth)},
        {"shift_length", std::to_string(shift_length)},
        {"shift_count", std::to_string(shift_count)},
        {"shift_alphabet", std::to_string(shift_alphabet)},
        {"shift_amplitude", format_double(shift_amplitude)},
        {"feasible_grid", std::to_string(feasible_grid)},
        {"ratio_grid", std::to_string(ratio_grid)},
        {"sample_grid", std::to_string(sample_grid)},
        {"epsilons", eps},
        {"seed", std::to_string(seed)},
        {"side", side},
        {"format", format == OutputFormat::Csv ? "csv" : "json"},
    };
}

}  // namespace renormlab
