#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "renormlab/tower.hpp"
#include "support.hpp"

using namespace renormlab;

namespace {

double c_star(Side side)
{
    return unperturbed_fixed_point(side).c_star;
}

// I_j^n for the left side composed in long double from the intercept/slope
// forms F0 = b(0) - s0 t, F1 = b^2(0) - s1 t, F2 = s2 t.
struct IntervalLD {
    long double lo, hi;
};

IntervalLD oracle_left(long double c, int n, int j)
{
    const auto r = support::ratios_left(c);
    auto F = [&](int i, long double t) -> long double {
        if (i == 0)
            return r.b[1] - r.s0 * t;
        if (i == 1)
            return r.b[2] - r.s1 * t;
        return r.s2 * t;
    };
    long double a = 0, b = r.b[1];
    a = F(j, a);
    b = F(j, b);
    for (int k = 1; k < n; ++k) {
        a = F(1, a);
        b = F(1, b);
    }
    return a <= b ? IntervalLD{a, b} : IntervalLD{b, a};
}

double interval_error(const Interval& iv, const IntervalLD& ref)
{
    return std::max(std::abs(iv.lo - static_cast<double>(ref.lo)), std::abs(iv.hi - static_cast<double>(ref.hi)));
}

double gap(const Interval& a, const Interval& b)
{
    return std::max(a.lo - b.hi, b.lo - a.hi);
}

}  // namespace

TEST_CASE("induced affine maps")
{
    const double c = c_star(Side::Left);
    const ScalingData data = ScalingData::stationary(Side::Left, c);
    const LevelMaps F = data.maps(1);
    const double b0 = BimodalMap(c, Side::Left)(0.0);
    CHECK(std::abs(F.F0(0.0) - b0) < 1e-15);
    CHECK(F.F2(0.0) == 0.0);
    const double b3 = BimodalMap(c, Side::Left).anchor_orbit()[3];
    CHECK(std::abs(F.F2(b0) - b3) < 1e-15);
    CHECK(std::abs(F.F1(0.0) - BimodalMap(c, Side::Left).anchor_orbit()[2]) < 1e-15);

    const double cr = c_star(Side::Right);
    const LevelMaps G = ScalingData::stationary(Side::Right, cr).maps(1);
    CHECK(std::abs(G.F2(1.0) - 1.0) < 1e-15);
    CHECK(std::abs(G.F0(1.0) - BimodalMap(cr, Side::Right)(1.0)) < 1e-15);
}

TEST_CASE("depth zero and depth one")
{
    const double c = c_star(Side::Left);
    const ScalingData data = ScalingData::stationary(Side::Left, c);
    const IntervalTower t = build_tower(data, 1);
    const double b0 = BimodalMap(c, Side::Left)(0.0);
    const ScalingTriple s = scaling_ratios(Side::Left, c);

    CHECK(t.level(0).I[1].lo == 0.0);
    CHECK(std::abs(t.level(0).I[1].hi - b0) < 1e-15);
    CHECK(std::abs(t.level(1).I[0].lo - (1.0 - s.s0) * b0) < 1e-15);
    CHECK(std::abs(t.level(1).I[0].hi - b0) < 1e-15);
    CHECK(std::abs(t.level(1).I[2].lo) < 1e-15);
    CHECK(std::abs(t.level(1).I[2].hi - s.s2 * b0) < 1e-15);

    CHECK_THROWS_AS(build_tower(data, 0), std::invalid_argument);
}

TEST_CASE("tower intervals against the extended precision composition")
{
    const double c = c_star(Side::Left);
    const IntervalTower t = build_tower(ScalingData::stationary(Side::Left, c), 10);
    const double cr = c_star(Side::Right);
    const IntervalTower tr = build_tower(ScalingData::stationary(Side::Right, cr), 10);
    for (int n = 1; n <= 10; ++n) {
        for (int j = 0; j < 3; ++j) {
            CHECK(interval_error(t.level(n).I[j], oracle_left(c, n, j)) < 1e-14);
            // the right tower is the mirror image of the left one at 1 - c
            const IntervalLD m = oracle_left(1.0L - cr, n, j);
            CHECK(interval_error(tr.level(n).I[j], {1 - m.hi, 1 - m.lo}) < 1e-14);
        }
    }
}

TEST_CASE("property: disjointness, nesting, ratios, gaps and convergence on both sides")
{
    for (Side side : {Side::Left, Side::Right}) {
        const double c = c_star(side);
        const ScalingData data = ScalingData::stationary(side, c);
        const IntervalTower t = build_tower(data, 10);
        const LevelGeometry geo = level_geometry(side, c);
        REQUIRE(geo.s.in_simplex());
        for (int n = 1; n <= 10; ++n) {
            const TowerLevel& lv = t.level(n);
            const Interval& parent = t.level(n - 1).I[1];
            const Interval& lparent = t.level(n - 1).local[1];
            for (int j = 0; j < 3; ++j)
                CHECK(parent.contains(lv.I[j]));
            CHECK(gap(lv.I[0], lv.I[1]) > 0.0);
            CHECK(gap(lv.I[1], lv.I[2]) > 0.0);
            CHECK(gap(lv.I[0], lv.I[2]) > 0.0);
            CHECK(std::abs(lv.local[1].length() / lparent.length() - geo.s.s1) < 1e-14);
            CHECK(std::abs(lv.local[0].length() / lparent.length() - geo.s.s0) < 1e-14);
            CHECK(std::abs(lv.local[2].length() / lparent.length() - geo.s.s2) < 1e-14);
            CHECK(std::abs(gap(lv.local[0], lv.local[1]) / lparent.length() - geo.g.g0) < 1e-10);
            CHECK(std::abs(gap(lv.local[1], lv.local[2]) / lparent.length() - geo.g.g1) < 1e-10);
            CHECK(lv.I[1].contains(c));
        }
        const Interval& i10 = t.level(10).I[1];
        const double bound = std::pow(geo.s.s1, 10) * data.base().length();
        CHECK(std::max(std::abs(i10.lo - c), std::abs(i10.hi - c)) <= bound);
        CHECK(bound < 1e-5 * data.base().length());
    }
}

TEST_CASE("improper data is rejected")
{
    const double c = c_star(Side::Left);
    LevelGeometry bad = level_geometry(Side::Left, c);
    bad.s.s2 = 1e-6;
    const ScalingData data(Side::Left, BimodalMap(c, Side::Left).base_interval(), {bad});
    CHECK_THROWS_AS(build_tower(data, 3), ParameterError);
}

TEST_CASE("f_s branches are affine and follow the route I2 -> I0 -> I1")
{
    const double c = c_star(Side::Left);
    const PiecewiseAffineMap f = build_fs(Side::Left, c, 8);
    const IntervalTower t = build_tower(f.data(), 8);
    CHECK(f.branches().size() == 16);

    for (const Branch& b : f.branches()) {
        const double x0 = b.domain.lo, x2 = b.domain.hi, x1 = 0.5 * (x0 + x2);
        const double second = f(x0) - 2.0 * f(x1) + f(x2);
        CHECK(std::abs(second) < 1e-15);
    }
    for (std::size_t i = 1; i < f.branches().size(); ++i)
        CHECK(f.branches()[i - 1].domain.hi < f.branches()[i].domain.lo);

    // f^{3^{n-1}} carries the endpoints of I_2^n onto those of I_0^n, and
    // those of I_0^n onto those of I_1^n
    auto iterate = [&](const Interval& iv, int times) {
        double a = iv.lo, b = iv.hi;
        for (int k = 0; k < times; ++k) {
            a = f(a);
            b = f(b);
        }
        return Interval::hull(a, b);
    };
    int times = 1;
    for (int n = 1; n <= 5; ++n, times *= 3) {
        const Interval i0 = iterate(t.level(n).I[2], times);
        const Interval i1 = iterate(t.level(n).I[0], times);
        CHECK(std::abs(i0.lo - t.level(n).I[0].lo) < 1e-12);
        CHECK(std::abs(i0.hi - t.level(n).I[0].hi) < 1e-12);
        CHECK(std::abs(i1.lo - t.level(n).I[1].lo) < 1e-12);
        CHECK(std::abs(i1.hi - t.level(n).I[1].hi) < 1e-12);
    }

    // at the first level the branches interpolate the map itself
    const BimodalMap b(c, Side::Left);
    const Branch& br2 = f.branch(1, 2);
    CHECK(std::abs(br2.map(br2.domain.lo) - b(br2.domain.lo)) < 1e-14);
    CHECK(std::abs(br2.map(br2.domain.hi) - b(br2.domain.hi)) < 1e-14);
    const Branch& br0 = f.branch(1, 0);
    CHECK(std::abs(br0.map(br0.domain.lo) - b(br0.domain.lo)) < 1e-14);
    CHECK(std::abs(br0.map(br0.domain.hi) - b(br0.domain.hi)) < 1e-14);

    CHECK_THROWS_AS(f(c), std::domain_error);
    CHECK_THROWS(build_fs(Side::Left, c + 1e-4, 8));
}

TEST_CASE("R f = f at the fixed point")
{
    for (Side side : {Side::Left, Side::Right}) {
        const double c = c_star(side);
        const PiecewiseAffineMap f = build_fs(side, c, 8);
        const PiecewiseAffineMap rf = renormalize(build_fs(side, c, 9));
        CHECK(rf.depth() == 8);
        CHECK(branch_distance(rf, f) < 1e-9);
        CHECK(renormalize(f).depth() == 7);
    }
    const PiecewiseAffineMap shallow = build_fs(Side::Left, c_star(Side::Left), 1);
    CHECK_THROWS_AS(renormalize(shallow), DepthExhausted);
}

TEST_CASE("lemmas on 2-periodic data")
{
    for (Side side : {Side::Left, Side::Right}) {
        const double c = c_star(side);
        const FixedPointResult e = find_perturbed_fixed_point(side, 1.01);
        const ScalingData data(side, BimodalMap(c, side).base_interval(),
                               {level_geometry(side, c), perturbed_geometry(side, e.c_star, 1.01)});
        REQUIRE(data.period() == 2);
        const PiecewiseAffineMap fs = build_fs(data, 8);
        PiecewiseAffineMap r = fs;
        for (int n = 1; n <= 4; ++n) {
            r = renormalize(r);
            CHECK(branch_distance(r, zoom(fs, n)) < 1e-9);
            if (n <= 3)
                CHECK(branch_distance(r, build_fs(data.shifted(n), 8 - n)) < 1e-9);
        }
        // the two levels really differ, so the shift is not the identity
        CHECK(branch_distance(renormalize(fs), build_fs(data, 7)) > 1e-6);
    }
}

TEST_CASE("zoom limits")
{
    const PiecewiseAffineMap f = build_fs(Side::Left, c_star(Side::Left), 4);
    CHECK(branch_distance(zoom(f, 0), f) == 0.0);
    CHECK_THROWS_AS(zoom(f, 9), std::invalid_argument);
    CHECK_THROWS_AS(zoom(f, 4), DepthExhausted);
}

TEST_CASE("infinite renormalizability")
{
    for (Side side : {Side::Left, Side::Right}) {
        const double c = c_star(side);
        const PiecewiseAffineMap f = build_fs(side, c, 8);
        const IntervalTower t = build_tower(f.data(), 8);
        CHECK(verify_infinite_renormalizability(f, t, 0).pass);
        for (int n = 1; n <= 6; ++n) {
            const RenormalizabilityReport rep = verify_infinite_renormalizability(f, t, n);
            CHECK(rep.pass);
            CHECK(rep.clauses.size() == 2);
        }

        // level 1: f^2 maps [0, f(y_1)] (left) onto I_1^1
        const RenormalizabilityReport one = verify_infinite_renormalizability(f, t, 1);
        CHECK(std::abs(one.clauses.back().image.lo - t.level(1).I[1].lo) < 1e-12);
        CHECK(std::abs(one.clauses.back().image.hi - t.level(1).I[1].hi) < 1e-12);
        CHECK_THROWS_AS(verify_infinite_renormalizability(f, t, 9), DepthExhausted);
    }
}

TEST_CASE("negative control: a corrupted s1 breaks renormalizability")
{
    const double c = c_star(Side::Left);
    const ScalingData good = ScalingData::stationary(Side::Left, c);
    LevelGeometry geo = level_geometry(Side::Left, c);
    geo.s.s1 *= 1.01;
    geo.g.g0 -= 0.01 * geo.s.s1 / 1.01;
    const ScalingData bad(Side::Left, good.base(), {geo});
    const PiecewiseAffineMap f = build_fs(bad, 8);
    const IntervalTower t = build_tower(good, 8);
    bool any_fail = false;
    for (int n = 1; n <= 3; ++n) {
        try {
            any_fail = any_fail || !verify_infinite_renormalizability(f, t, n).pass;
        } catch (const DepthExhausted&) {
            any_fail = true;
        }
    }
    CHECK(any_fail);
}
