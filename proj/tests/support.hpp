#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace support {

// Reference values produced by tests/oracles/generate_fixtures.py.
inline const std::map<std::string, long double>& fixtures()
{
    static const std::map<std::string, long double> table = [] {
        std::map<std::string, long double> t;
        std::ifstream in(std::string(RENORMLAB_FIXTURE_DIR) + "/reference_values.txt");
        if (!in)
            throw std::runtime_error("cannot open the fixture file");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            std::istringstream row(line);
            std::string key, value;
            row >> key >> value;
            t[key] = std::stold(value);
        }
        return t;
    }();
    return table;
}

inline double fixture(const std::string& key)
{
    auto it = fixtures().find(key);
    if (it == fixtures().end())
        throw std::runtime_error("missing fixture " + key);
    return static_cast<double>(it->second);
}

// The family straight from its rational form, in long double.
inline long double b_left(long double c, long double x)
{
    const long double num = 1 - 6 * c + 9 * c * c - 4 * c * c * c + 6 * c * x - 6 * c * c * x - 3 * x * x + 2 * x * x * x;
    const long double d = 1 - 2 * c;
    return 1 - num / (d * d * d);
}

inline long double b_right(long double c, long double x)
{
    const long double num = 4 * c * c * c - 3 * c * c + 6 * c * x - 6 * c * c * x - 3 * x * x + 2 * x * x * x;
    const long double d = 2 * c - 1;
    return 1 - num / (d * d * d);
}

struct RatiosLD {
    long double s0, s1, s2, g0, g1, R;
    long double b[6];
};

inline RatiosLD ratios_left(long double c)
{
    RatiosLD r{};
    r.b[0] = 0;
    for (int i = 1; i < 6; ++i)
        r.b[i] = b_left(c, r.b[i - 1]);
    const long double L = r.b[1];
    r.s0 = (L - r.b[4]) / L;
    r.s1 = (r.b[2] - r.b[5]) / L;
    r.s2 = r.b[3] / L;
    r.g0 = (r.b[4] - r.b[2]) / L;
    r.g1 = (r.b[5] - r.b[3]) / L;
    r.R = (r.b[2] - c) / r.s1;
    return r;
}

inline RatiosLD ratios_right(long double c)
{
    RatiosLD r{};
    r.b[0] = 1;
    for (int i = 1; i < 6; ++i)
        r.b[i] = b_right(c, r.b[i - 1]);
    const long double d = 1 - r.b[1];
    r.s0 = (r.b[4] - r.b[1]) / d;
    r.s1 = (r.b[5] - r.b[2]) / d;
    r.s2 = (1 - r.b[3]) / d;
    r.g0 = (r.b[2] - r.b[4]) / d;
    r.g1 = (r.b[3] - r.b[5]) / d;
    r.R = 1 - (c - r.b[2]) / r.s1;
    return r;
}

inline std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace support
