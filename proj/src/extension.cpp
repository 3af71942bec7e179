#include "renormlab/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace renormlab {

double CubicPiece::lipschitz() const
{
    return std::max(std::abs(second_at_offset(0.0)), std::abs(second_at_offset(span)));
}

double CubicPiece::max_slope() const
{
    const double len = span;
    double m = std::max(std::abs(slope_at_offset(0.0)), std::abs(slope_at_offset(len)));
    if (c[3] != 0.0) {
        const double t = -c[2] / (3.0 * c[3]);
        if (t > 0.0 && t < len)
            m = std::max(m, std::abs(slope_at_offset(t)));
    }
    return m;
}

CubicPiece CubicPiece::from_affine(const Interval& domain, const AffineMap1D& map)
{
    return {domain, {map(domain.lo), map.slope, 0.0, 0.0}, true, domain.length()};
}

CubicPiece CubicPiece::hermite(double x0, double y0, double m0, double x1, double y1, double m1)
{
    const double h = x1 - x0;
    if (!(h > 0.0))
        throw ExtensionError("hermite piece needs x0 < x1");
    const double d = (y1 - y0) / h;
    return {{x0, x1}, {y0, m0, (3.0 * d - 2.0 * m0 - m1) / h, (m0 + m1 - 2.0 * d) / (h * h)}, false, h};
}

namespace {

// Coefficients of p(t0 + u) in u.
std::array<double, 4> taylor_at(const CubicPiece& p, double t0)
{
    return {p.at_offset(t0), p.slope_at_offset(t0), p.c[2] + 3.0 * p.c[3] * t0, p.c[3]};
}

// p(t0 + u) - p(t0) without forming the two values.
double increment(const CubicPiece& p, double t0, double u)
{
    const auto d = taylor_at(p, t0);
    return u * (d[1] + u * (d[2] + u * d[3]));
}

}  // namespace

CubicPiece transform(const CubicPiece& p, const PlaneAffineMap& S)
{
    const double A = S.x_part.slope;
    const double C = S.y_part.slope;
    const double len = p.span;
    // new local variable t' runs from the image of the start of the new domain
    const std::array<double, 4> d = A > 0.0 ? p.c : taylor_at(p, len);
    CubicPiece out;
    out.domain = S.x_part.image(p.domain);
    out.affine = p.affine;
    out.span = std::abs(A) * p.span;
    double scale = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
        out.c[k] = C * d[k] / scale;
        scale *= A;
    }
    out.c[0] = S.y_part(d[0]);
    return out;
}

CubicPiece mirror(const CubicPiece& p)
{
    const auto d = taylor_at(p, p.span);
    CubicPiece out;
    out.domain = {1.0 - p.domain.hi, 1.0 - p.domain.lo};
    out.affine = p.affine;
    out.span = p.span;
    out.c = {1.0 - d[0], d[1], -d[2], d[3]};
    return out;
}

double GraphSegment::lipschitz() const
{
    double m = 0.0;
    for (const CubicPiece& p : pieces)
        m = std::max(m, p.lipschitz());
    return m;
}

double GraphSegment::max_slope() const
{
    double m = 0.0;
    for (const CubicPiece& p : pieces)
        m = std::max(m, p.max_slope());
    return m;
}

const CubicPiece* GraphSegment::find(double x) const
{
    for (const CubicPiece& p : pieces)
        if (p.domain.contains(x))
            return &p;
    return nullptr;
}

namespace {

void finish_segment(GraphSegment& g)
{
    std::sort(g.pieces.begin(), g.pieces.end(),
              [](const CubicPiece& a, const CubicPiece& b) { return a.domain.lo < b.domain.lo; });
    g.domain = {g.pieces.front().domain.lo, g.pieces.back().domain.hi};
    g.slope_lo = g.pieces.front().slope_at_offset(0.0);
    g.slope_hi = g.pieces.back().slope_at_offset(g.pieces.back().span);
}

}  // namespace

GraphSegment transform(const GraphSegment& g, const PlaneAffineMap& S)
{
    GraphSegment out;
    out.n = g.n + 2;
    out.generation = g.generation + 1;
    for (const CubicPiece& p : g.pieces)
        out.pieces.push_back(transform(p, S));
    finish_segment(out);
    return out;
}

GraphSegment mirror(const GraphSegment& g)
{
    GraphSegment out;
    out.n = g.n;
    out.generation = g.generation;
    for (const CubicPiece& p : g.pieces)
        out.pieces.push_back(mirror(p));
    finish_segment(out);
    return out;
}

std::vector<CubicPiece> fill_gap(double x0, double y0, double m0, double x1, double y1, double m1,
                                 const GapPolicy& policy)
{
    const CubicPiece plain = CubicPiece::hermite(x0, y0, m0, x1, y1, m1);
    if (policy.amplitude == 0.0)
        return {plain};
    // split at the midpoint knot; its slope is kept from the plain join
    const double xm = 0.5 * (x0 + x1);
    const double tm = xm - x0;
    const double ym = plain.at_offset(tm) + policy.amplitude * (y1 - y0);
    const double mm = plain.slope_at_offset(tm);
    return {CubicPiece::hermite(x0, y0, m0, xm, ym, mm), CubicPiece::hermite(xm, ym, mm, x1, y1, m1)};
}

namespace {

struct EndData {
    double x;
    double y;
    double m;
};

EndData end_of(const Branch& b, double x)
{
    return {x, b.map(x), b.map.slope};
}

GraphSegment gap_and_branch(int n, const Branch& branch, EndData at_branch, EndData far, const GapPolicy& policy)
{
    GraphSegment g;
    g.n = n;
    g.pieces.push_back(CubicPiece::from_affine(branch.domain, branch.map));
    const EndData& a = at_branch.x < far.x ? at_branch : far;
    const EndData& b = at_branch.x < far.x ? far : at_branch;
    for (const CubicPiece& p : fill_gap(a.x, a.y, a.m, b.x, b.y, b.m, policy))
        g.pieces.push_back(p);
    finish_segment(g);
    return g;
}

}  // namespace

SeedPair seed_segments(Side side, const PiecewiseAffineMap& f, const GapPolicy& policy)
{
    if (f.depth() < 2)
        throw ExtensionError("seed segments need f of depth >= 2");
    if (f.side() != side)
        throw ExtensionError("seed side does not match f");

    const LevelMaps F = f.data().maps(1);
    const Interval& base = f.data().base();
    const double y0 = side == Side::Left ? base.lo : base.hi;
    const double z0 = side == Side::Left ? base.hi : base.lo;
    const double y1 = F.F1(y0);
    const double z1 = F.F1(z0);
    const double x1 = F.F0(z0);
    const double w1 = F.F2(z0);

    const Branch& b10 = f.branch(1, 0);
    const Branch& b12 = f.branch(1, 2);
    const Branch& b20 = f.branch(2, 0);
    const Branch& b22 = f.branch(2, 2);

    SeedPair seed{gap_and_branch(1, b10, end_of(b10, x1), end_of(b22, y1), policy),
                  gap_and_branch(2, b12, end_of(b12, w1), end_of(b20, z1), policy)};

    // the joins are C^1 by construction; anything else is a bug
    for (const GraphSegment* g : {&seed.first, &seed.second}) {
        for (std::size_t i = 0; i + 1 < g->pieces.size(); ++i) {
            const CubicPiece& p = g->pieces[i];
            const CubicPiece& q = g->pieces[i + 1];
            const double jump = std::abs(p.slope_at_offset(p.span) - q.slope_at_offset(0.0));
            const double gap = std::abs(p.at_offset(p.span) - q.at_offset(0.0));
            if (jump > 1e-10 || gap > 1e-12 || std::abs(p.domain.hi - q.domain.lo) > 1e-15)
                throw ExtensionError("seed join is not C^1 (slope jump " + std::to_string(jump) + ")");
        }
    }
    return seed;
}

PlaneAffineMap scaling_map(const ScalingData& data)
{
    const LevelMaps F = data.maps(1);
    return {F.F1, F.F2};
}

void check_contraction(const PlaneAffineMap& S)
{
    const double hx = std::abs(S.x_part.slope);
    const double hy = std::abs(S.y_part.slope);
    // the vertical factor s2 has to be the stronger contraction
    if (!(hy < hx && hx < 1.0))
        throw ExtensionError("scaling map does not satisfy |y-slope| < |x-slope| < 1 (x " + std::to_string(hx) +
                             ", y " + std::to_string(hy) + ")");
}

const GraphSegment& ExtensionGraph::segment(int n) const
{
    for (const GraphSegment& g : segments)
        if (g.n == n)
            return g;
    throw std::out_of_range("no segment G^" + std::to_string(n));
}

const CubicPiece* ExtensionGraph::locate(double x) const
{
    // segment ends carry rounding from the S-powers, so accept a point a
    // hair outside a segment rather than sending it down the recursion
    constexpr double slack = 1e-13;
    auto it = std::upper_bound(segments.begin(), segments.end(), x,
                               [](double v, const GraphSegment& g) { return v < g.domain.lo; });
    const GraphSegment* seg = nullptr;
    if (it != segments.begin() && x <= std::prev(it)->domain.hi + slack)
        seg = &*std::prev(it);
    else if (it != segments.end() && x >= it->domain.lo - slack)
        seg = &*it;
    if (!seg)
        return nullptr;
    const auto& pieces = seg->pieces;
    auto jt = std::upper_bound(pieces.begin(), pieces.end(), x,
                               [](double v, const CubicPiece& p) { return v < p.domain.lo; });
    return jt == pieces.begin() ? &pieces.front() : &*(jt - 1);
}

double ExtensionGraph::eval(double x) const
{
    if (!base.contains(x, 1e-12))
        throw std::domain_error("extension evaluated outside its base interval: x=" + std::to_string(x));
    x = std::clamp(x, base.lo, base.hi);
    // inside the innermost box use S-invariance: g = F2^k o g o F1^{-k}
    const AffineMap1D pull = S.x_part.inverse();
    int k = 0;
    while (k < 400) {
        if (const CubicPiece* p = locate(x)) {
            double y = p->value(x);
            for (int i = 0; i < k; ++i)
                y = S.y_part(y);
            return y;
        }
        if (x == c_star)
            break;
        x = pull(x);
        ++k;
    }
    return critical_value;
}

double ExtensionGraph::derivative(double x) const
{
    if (!base.contains(x, 1e-12))
        throw std::domain_error("extension derivative outside its base interval: x=" + std::to_string(x));
    x = std::clamp(x, base.lo, base.hi);
    const AffineMap1D pull = S.x_part.inverse();
    const double factor = S.y_part.slope / S.x_part.slope;
    int k = 0;
    while (k < 400) {
        if (const CubicPiece* p = locate(x))
            return p->slope(x) * std::pow(factor, k);
        if (x == c_star)
            break;
        x = pull(x);
        ++k;
    }
    return 0.0;
}

namespace {

std::vector<Junction> find_junctions(const std::vector<GraphSegment>& segments)
{
    struct Tagged {
        const CubicPiece* p;
        int n;
        int generation;
    };
    std::vector<Tagged> all;
    for (const GraphSegment& g : segments)
        for (const CubicPiece& p : g.pieces)
            all.push_back({&p, g.n, g.generation});

    std::vector<Junction> out;
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        const CubicPiece& p = *all[i].p;
        const CubicPiece& q = *all[i + 1].p;
        const double scale = std::max(std::abs(p.domain.hi), 1.0);
        if (std::abs(p.domain.hi - q.domain.lo) > 1e-14 * scale)
            continue;  // the hole around the critical point
        const double lp = p.span;
        const double h = 1e-7 * std::min(lp, q.span);
        Junction j;
        j.x = q.domain.lo;
        j.left_n = all[i].n;
        j.right_n = all[i + 1].n;
        j.generation = std::min(all[i].generation, all[i + 1].generation);
        // second-order one-sided differences
        j.slope_left = (4.0 * increment(p, lp, -h) - increment(p, lp, -2.0 * h)) / (-2.0 * h);
        j.slope_right = (4.0 * increment(q, 0.0, h) - increment(q, 0.0, 2.0 * h)) / (2.0 * h);
        j.mismatch = std::abs(j.slope_left - j.slope_right);
        out.push_back(j);
    }
    return out;
}

}  // namespace

ExtensionGraph iterate_extension(const SeedPair& seed, const PlaneAffineMap& S, int depth, Side side,
                                 const Interval& base)
{
    return iterate_extension([&seed](int) { return seed; }, S, depth, side, base);
}

ExtensionGraph iterate_extension(const SeedSource& seeds, const PlaneAffineMap& S, int depth, Side side,
                                 const Interval& base)
{
    if (depth < 1)
        throw std::invalid_argument("extension depth must be at least 1");
    check_contraction(S);

    ExtensionGraph g;
    g.side = side;
    g.S = S;
    g.base = base;
    g.c_star = S.x_part.fixed_point();
    g.critical_value = S.y_part.fixed_point();

    PlaneAffineMap power{AffineMap1D::identity(), AffineMap1D::identity()};
    for (int k = 0; k <= depth; ++k) {
        const SeedPair seed = seeds(k);
        GraphSegment a = seed.first;
        GraphSegment b = seed.second;
        for (int i = 0; i < k; ++i) {
            a = transform(a, S);
            b = transform(b, S);
        }
        g.lipschitz_ledger.push_back(std::max(a.lipschitz(), b.lipschitz()));
        g.slope_ledger.push_back(std::max(a.max_slope(), b.max_slope()));
        g.boxes.push_back({k, power.x_part.image(base), power.y_part.image(base)});
        g.segments.push_back(std::move(a));
        g.segments.push_back(std::move(b));
        power = S.after(power);
    }
    std::sort(g.segments.begin(), g.segments.end(),
              [](const GraphSegment& a, const GraphSegment& b) { return a.domain.lo < b.domain.lo; });

    g.hole = {g.c_star, g.c_star};
    for (std::size_t i = 0; i + 1 < g.segments.size(); ++i)
        if (g.segments[i].domain.hi <= g.c_star && g.segments[i + 1].domain.lo >= g.c_star)
            g.hole = {g.segments[i].domain.hi, g.segments[i + 1].domain.lo};

    g.junctions = find_junctions(g.segments);
    return g;
}

ExtensionGraph build_extension(Side side, double c_star, int depth, int fs_depth)
{
    const PiecewiseAffineMap f = build_fs(side, c_star, std::max(fs_depth, 2));
    const SeedPair seed = seed_segments(side, f);
    return iterate_extension(seed, scaling_map(f.data()), depth, side, f.data().base());
}

double extension_error(const ExtensionGraph& g, const PiecewiseAffineMap& f, int samples_per_branch)
{
    double err = 0.0;
    const int k = std::max(samples_per_branch, 2);
    for (const Branch& b : f.branches()) {
        for (int i = 0; i < k; ++i) {
            const double x = b.domain.lo + b.domain.length() * i / (k - 1);
            err = std::max(err, std::abs(g.eval(x) - b.map(x)));
        }
    }
    return err;
}

double max_junction_mismatch(const ExtensionGraph& g)
{
    double m = 0.0;
    for (const Junction& j : g.junctions)
        m = std::max(m, j.mismatch);
    return m;
}

double empirical_lipschitz(const std::function<double(double)>& derivative, const Interval& domain, int pairs,
                           double min_scale, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double len = domain.length();
    double best = 0.0;
    for (int i = 0; i < pairs; ++i) {
        // log-uniform separation so that every scale above min_scale is hit
        const double d = min_scale * std::pow(len / min_scale, unit());
        const double u = domain.lo + (len - d) * unit();
        const double v = u + d;
        best = std::max(best, std::abs(derivative(u) - derivative(v)) / d);
    }
    return best;
}

double JoinedMap::operator()(double x) const
{
    if (x <= left.base.hi)
        return left.eval(x);
    if (x >= right.base.lo)
        return right.eval(x);
    return middle.value(x);
}

double JoinedMap::derivative(double x) const
{
    if (x <= left.base.hi)
        return left.derivative(x);
    if (x >= right.base.lo)
        return right.derivative(x);
    return middle.slope(x);
}

JoinedMap join_bimodal(ExtensionGraph g_left, ExtensionGraph g_right)
{
    if (g_left.side != Side::Left || g_right.side != Side::Right)
        throw ExtensionError("join_bimodal expects a left and a right graph");
    if (g_left.depth() != g_right.depth())
        throw ExtensionError("join_bimodal expects graphs of equal depth");
    const double xl = g_left.base.hi;
    const double xr = g_right.base.lo;
    if (!(xl < xr))
        throw ExtensionError("left and right base intervals overlap");
    JoinedMap m;
    m.middle = CubicPiece::hermite(xl, g_left.eval(xl), g_left.derivative(xl), xr, g_right.eval(xr),
                                   g_right.derivative(xr));
    m.left = std::move(g_left);
    m.right = std::move(g_right);
    return m;
}

ShapeReport check_shape(const JoinedMap& m, int grid)
{
    ShapeReport rep;
    std::vector<int> laps;
    double prev = m(0.0);
    for (int i = 1; i <= grid; ++i) {
        const double x = static_cast<double>(i) / grid;
        const double y = m(x);
        const int sign = y > prev ? 1 : (y < prev ? -1 : 0);
        prev = y;
        if (sign != 0 && (laps.empty() || laps.back() != sign))
            laps.push_back(sign);
    }
    rep.laps = static_cast<int>(laps.size());
    rep.pass = laps == std::vector<int>{-1, 1, -1};
    for (int s : laps)
        rep.detail += s > 0 ? "up " : "down ";
    if (!rep.detail.empty())
        rep.detail.pop_back();
    return rep;
}

double mirror_error(const JoinedMap& m, int grid)
{
    double err = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double x = static_cast<double>(i) / grid;
        err = std::max(err, std::abs(m(1.0 - x) - (1.0 - m(x))));
    }
    return err;
}

double renormalized_value(const JoinedMap& m, Side side, double x)
{
    const ExtensionGraph& g = side == Side::Left ? m.left : m.right;
    const AffineMap1D& h = g.S.x_part;
    double y = h(x);
    for (int i = 0; i < 3; ++i)
        y = m(y);
    return h.inverse()(y);
}

double self_reproduction_error(const JoinedMap& m, int grid)
{
    double err = 0.0;
    for (const ExtensionGraph* g : {&m.left, &m.right}) {
        for (int i = 0; i <= grid; ++i) {
            const double x = g->base.lo + g->base.length() * i / grid;
            err = std::max(err, std::abs(renormalized_value(m, g->side, x) - g->eval(x)));
        }
    }
    return err;
}

}  // namespace renormlab
