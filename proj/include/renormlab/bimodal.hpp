#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace renormlab {

enum class Side { Left, Right };

const char* to_string(Side side);
Side side_from_string(const std::string& text);

/// Closed interval [lo, hi]; lo <= hi is the caller's responsibility.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
    bool contains(const Interval& other, double slack = 0.0) const
    {
        return other.lo >= lo - slack && other.hi <= hi + slack;
    }
    static Interval hull(double a, double b) { return a <= b ? Interval{a, b} : Interval{b, a}; }
};

class ParameterError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Open interval of admissible critical-point abscissae for a side.
Interval admissible_interval(Side side);

class MapParameter {
public:
    MapParameter(double c, Side side);

    double c() const { return c_; }
    Side side() const { return side_; }

private:
    double c_;
    Side side_;
};

struct Orbit {
    double start = 0.0;
    std::vector<double> values;
};

/// One member of the symmetric cubic family, with Horner coefficients
/// precomputed from c. Left is b_c, Right is the tilde branch.
class BimodalMap {
public:
    explicit BimodalMap(MapParameter p);
    BimodalMap(double c, Side side) : BimodalMap(MapParameter(c, side)) {}

    const MapParameter& parameter() const { return param_; }
    double c() const { return param_.c(); }
    Side side() const { return param_.side(); }

    double operator()(double x) const;
    double derivative(double x) const;

    /// (c, 1-c) ordered left to right.
    std::pair<double, double> critical_points() const;

    Orbit orbit(double x0, int k) const;

    /// [0, b(0)] on the left, [b(1), 1] on the right.
    Interval base_interval() const;

    /// Orbit of the side's anchor point (0 on the left, 1 on the right).
    std::array<double, 6> anchor_orbit() const;

private:
    MapParameter param_;
    std::array<double, 4> coeff_{};  // a0 + a1 x + a2 x^2 + a3 x^3
};

double eval(const MapParameter& p, double x);
std::pair<double, double> critical_points(const MapParameter& p);
Orbit orbit(const MapParameter& p, double x0, int k);
Interval base_interval(const MapParameter& p);

}  // namespace renormlab
