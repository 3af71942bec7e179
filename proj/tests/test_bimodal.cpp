#include <doctest.h>

#include <cmath>
#include <random>

#include "renormlab/bimodal.hpp"
#include "support.hpp"

using namespace renormlab;
using doctest::Approx;

TEST_CASE("left map at the critical point, the midpoint and zero")
{
    const BimodalMap b(0.2, Side::Left);
    CHECK(std::abs(b(0.2)) < 1e-15);
    CHECK(std::abs(b(0.5) - 0.5) < 1e-15);
    // 1 - (1-c)^2 (1-4c) / (1-2c)^3 = 1 - 0.128/0.216
    CHECK(std::abs(b(0.0) - (1.0 - 0.128 / 0.216)) < 1e-15);
    CHECK(std::abs(b(0.0) - support::fixture("orbit_left_c0.2_x0_1")) < 1e-15);
}

TEST_CASE("right map reaches 1 at its critical point")
{
    const BimodalMap b(0.85, Side::Right);
    CHECK(std::abs(b(0.85) - 1.0) < 1e-15);
    CHECK(std::abs(b(0.5) - 0.5) < 1e-15);
}

TEST_CASE("critical points")
{
    auto [a, b] = critical_points(MapParameter(0.2, Side::Left));
    CHECK(a == 0.2);
    CHECK(b == Approx(0.8).epsilon(1e-15));
    auto [c, d] = critical_points(MapParameter(0.196693, Side::Left));
    CHECK(c == 0.196693);
    CHECK(std::abs(d - 0.803307) < 1e-15);
    auto [e, f] = critical_points(MapParameter(0.85, Side::Right));
    CHECK(std::abs(e - 0.15) < 1e-15);
    CHECK(f == 0.85);
}

TEST_CASE("orbits")
{
    const MapParameter p(0.2, Side::Left);
    const Orbit o = orbit(p, 0.0, 1);
    REQUIRE(o.values.size() == 2);
    CHECK(o.values[0] == 0.0);
    CHECK(std::abs(o.values[1] - 0.4074074074074074) < 1e-15);

    const Orbit half = orbit(p, 0.5, 3);
    REQUIRE(half.values.size() == 4);
    // 1/2 is repelling, so rounding grows by b'(1/2) each step
    for (double v : half.values)
        CHECK(std::abs(v - 0.5) < 1e-14);

    const Orbit deep = orbit(MapParameter(0.196693, Side::Left), 0.0, 5);
    REQUIRE(deep.values.size() == 6);
    for (int i = 0; i <= 5; ++i)
        CHECK(std::abs(deep.values[i] - support::fixture("orbit_left_c0.196693_x0_" + std::to_string(i))) < 1e-13);

    CHECK_THROWS_AS(orbit(p, 0.0, 0), std::invalid_argument);
}

TEST_CASE("base intervals")
{
    const Interval l = base_interval(MapParameter(0.2, Side::Left));
    CHECK(l.lo == 0.0);
    CHECK(std::abs(l.hi - 0.4074074074074074) < 1e-15);

    const Interval r = base_interval(MapParameter(0.803307, Side::Right));
    const double left_zero = BimodalMap(1.0 - 0.803307, Side::Left)(0.0);
    CHECK(std::abs(r.lo - (1.0 - left_zero)) < 1e-15);
    CHECK(r.hi == 1.0);
    CHECK(r.length() > 0.0);
}

TEST_CASE("parameters outside the admissible interval are rejected")
{
    CHECK_THROWS_AS(MapParameter(0.5, Side::Left), ParameterError);
    CHECK_THROWS_AS(MapParameter(0.5, Side::Right), ParameterError);
    CHECK_THROWS_AS(MapParameter(0.0, Side::Left), ParameterError);
    CHECK_THROWS_AS(MapParameter(0.3, Side::Left), ParameterError);
    CHECK_THROWS_AS(MapParameter(0.7, Side::Right), ParameterError);
    CHECK_THROWS_AS(MapParameter(1.0, Side::Right), ParameterError);
    CHECK_THROWS_AS(MapParameter(std::nan(""), Side::Left), ParameterError);
    CHECK_NOTHROW(MapParameter(0.21, Side::Left));
}

TEST_CASE("inputs a rounding error outside [0,1] are accepted, larger ones are not")
{
    const BimodalMap b(0.2, Side::Left);
    CHECK_NOTHROW(b(-1e-13));
    CHECK_NOTHROW(b(1.0 + 1e-13));
    CHECK_THROWS_AS(b(-1e-9), std::domain_error);
    CHECK_THROWS_AS(b(1.5), std::domain_error);
}

TEST_CASE("side names")
{
    CHECK(side_from_string("l") == Side::Left);
    CHECK(side_from_string("right") == Side::Right);
    CHECK_THROWS_AS(side_from_string("middle"), std::invalid_argument);
}

namespace {

std::vector<double> parameter_grid(Side side, int n)
{
    const Interval dom = admissible_interval(side);
    std::vector<double> cs;
    for (int i = 1; i <= n; ++i)
        cs.push_back(dom.lo + dom.length() * i / (n + 1));
    return cs;
}

}  // namespace

TEST_CASE("property: agreement with the rational form in extended precision")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Side side : {Side::Left, Side::Right}) {
        for (double c : parameter_grid(side, 100)) {
            const BimodalMap b(c, side);
            for (int k = 0; k < 10; ++k) {
                const double x = unit(rng);
                const long double ref = side == Side::Left ? support::b_left(c, x) : support::b_right(c, x);
                CHECK(std::abs(b(x) - static_cast<double>(ref)) < 1e-13);
            }
        }
    }
}

TEST_CASE("property: critical values, endpoints, symmetry and mirror conjugacy")
{
    for (double c : parameter_grid(Side::Left, 1000)) {
        const BimodalMap b(c, Side::Left);
        CHECK(std::abs(b(c)) < 1e-12);
        CHECK(std::abs(b(1.0 - c) - 1.0) < 1e-12);
        CHECK(std::abs(b(0.5) - 0.5) < 1e-12);
        CHECK(std::abs(b(0.0) + b(1.0) - 1.0) < 1e-12);
        CHECK(std::abs(b.derivative(c)) < 1e-10);
        CHECK(std::abs(b.derivative(1.0 - c)) < 1e-10);

        const BimodalMap t(1.0 - c, Side::Right);
        for (double x : {0.0, 0.1, 0.37, 0.5, 0.81, 1.0})
            CHECK(std::abs(t(x) - (1.0 - b(1.0 - x))) < 1e-12);
    }
}

TEST_CASE("property: three monotone laps, down-up-down")
{
    for (Side side : {Side::Left, Side::Right}) {
        for (double c : parameter_grid(side, 50)) {
            const BimodalMap b(c, side);
            const auto [p, q] = b.critical_points();
            for (double x : support::linspace(0.0, 1.0, 400)) {
                const double d = b.derivative(x);
                if (x < p - 1e-9 || x > q + 1e-9)
                    CHECK(d < 0.0);
                else if (x > p + 1e-9 && x < q - 1e-9)
                    CHECK(d > 0.0);
            }
        }
    }
}

TEST_CASE("property: derivative matches a central difference")
{
    for (double c : parameter_grid(Side::Left, 20)) {
        const BimodalMap b(c, Side::Left);
        for (double x : support::linspace(0.01, 0.99, 50)) {
            const long double h = 1e-6L;
            const long double fd = (support::b_left(c, x + h) - support::b_left(c, x - h)) / (2 * h);
            CHECK(std::abs(b.derivative(x) - static_cast<double>(fd)) < 1e-8);
        }
    }
}
