#include "renormlab/bimodal.hpp"

#include <cassert>
#include <cmath>

namespace renormlab {

const char* to_string(Side side)
{
    return side == Side::Left ? "left" : "right";
}

Side side_from_string(const std::string& text)
{
    if (text == "l" || text == "left" || text == "L")
        return Side::Left;
    if (text == "r" || text == "right" || text == "R")
        return Side::Right;
    throw std::invalid_argument("unknown side '" + text + "' (expected l or r)");
}

Interval admissible_interval(Side side)
{
    const double root3 = std::sqrt(3.0);
    if (side == Side::Left)
        return {0.0, (3.0 - root3) / 6.0};
    return {(3.0 + root3) / 6.0, 1.0};
}

MapParameter::MapParameter(double c, Side side) : c_(c), side_(side)
{
    const Interval dom = admissible_interval(side);
    if (!std::isfinite(c) || !(c > dom.lo && c < dom.hi))
        throw ParameterError("critical point c=" + std::to_string(c) + " outside the admissible open interval for the " +
                             to_string(side) + " branch");
}

BimodalMap::BimodalMap(MapParameter p) : param_(p)
{
    const double c = p.c();
    // Both branches are 1 - N(x)/(1-2c)^3 (the right one with (2c-1)^3 = -(1-2c)^3).
    double constant = 0.0;
    double d = 0.0;
    if (p.side() == Side::Left) {
        d = (1.0 - 2.0 * c) * (1.0 - 2.0 * c) * (1.0 - 2.0 * c);
        constant = (1.0 - c) * (1.0 - c) * (1.0 - 4.0 * c);
    } else {
        d = (2.0 * c - 1.0) * (2.0 * c - 1.0) * (2.0 * c - 1.0);
        constant = c * c * (4.0 * c - 3.0);
    }
    coeff_[0] = 1.0 - constant / d;
    coeff_[1] = -6.0 * c * (1.0 - c) / d;
    coeff_[2] = 3.0 / d;
    coeff_[3] = -2.0 / d;
}

double BimodalMap::operator()(double x) const
{
    // iterates may land a rounding error outside [0,1]; accept the same slack
    // that the result assertion allows
    if (!(x >= -1e-12 && x <= 1.0 + 1e-12))
        throw std::domain_error("bimodal map evaluated outside [0,1]: x=" + std::to_string(x));
    const double y = coeff_[0] + x * (coeff_[1] + x * (coeff_[2] + x * coeff_[3]));
    assert(y >= -1e-12 && y <= 1.0 + 1e-12);
    return y;
}

double BimodalMap::derivative(double x) const
{
    return coeff_[1] + x * (2.0 * coeff_[2] + x * 3.0 * coeff_[3]);
}

std::pair<double, double> BimodalMap::critical_points() const
{
    const double c = param_.c();
    return c < 0.5 ? std::pair{c, 1.0 - c} : std::pair{1.0 - c, c};
}

Orbit BimodalMap::orbit(double x0, int k) const
{
    if (k < 1)
        throw std::invalid_argument("orbit length must be at least 1");
    Orbit out{x0, {}};
    out.values.reserve(static_cast<std::size_t>(k) + 1);
    out.values.push_back(x0);
    for (int i = 0; i < k; ++i)
        out.values.push_back((*this)(out.values.back()));
    return out;
}

Interval BimodalMap::base_interval() const
{
    if (side() == Side::Left)
        return {0.0, (*this)(0.0)};
    return {(*this)(1.0), 1.0};
}

std::array<double, 6> BimodalMap::anchor_orbit() const
{
    std::array<double, 6> b{};
    b[0] = side() == Side::Left ? 0.0 : 1.0;
    for (std::size_t i = 1; i < b.size(); ++i)
        b[i] = (*this)(b[i - 1]);
    return b;
}

double eval(const MapParameter& p, double x)
{
    return BimodalMap(p)(x);
}

std::pair<double, double> critical_points(const MapParameter& p)
{
    return BimodalMap(p).critical_points();
}

Orbit orbit(const MapParameter& p, double x0, int k)
{
    return BimodalMap(p).orbit(x0, k);
}

Interval base_interval(const MapParameter& p)
{
    return BimodalMap(p).base_interval();
}

}  // namespace renormlab
