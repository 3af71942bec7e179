#include "renormlab/tower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace renormlab {

LevelMaps induced_affine_maps(Side side, const LevelGeometry& geo, const Interval& base)
{
    const double lo = base.lo;
    const double hi = base.hi;
    const double len = base.length();
    const auto& [s0, s1, s2] = geo.s;
    const double g0 = geo.g.g0;
    if (side == Side::Left) {
        // t measured from lo; with lo = 0 these are b(0) - s0 t, b^2(0) - s1 t, s2 t
        return {{lo + len + s0 * lo, -s0}, {lo + len * (1.0 - s0 - g0) + s1 * lo, -s1}, {lo - s2 * lo, s2}};
    }
    // measured from hi; with hi = 1 these are a + s0 (1-t), b^2(1) + s1 (1-t), 1 - s2 (1-t)
    return {{lo + s0 * hi, -s0}, {lo + len * (s0 + g0) + s1 * hi, -s1}, {hi - s2 * hi, s2}};
}

ScalingData::ScalingData(Side side, Interval base, std::vector<LevelGeometry> levels)
    : side_(side), base_(base), levels_(std::move(levels))
{
    if (levels_.empty())
        throw std::invalid_argument("scaling data needs at least one level");
    if (!(base_.length() > 0.0))
        throw std::invalid_argument("scaling data needs a nondegenerate base interval");
    origin_ = induced_affine_maps(side_, levels_.front(), base_).F1.fixed_point();
}

ScalingData ScalingData::stationary(Side side, double c_star)
{
    const BimodalMap map(c_star, side);
    return ScalingData(side, map.base_interval(), {level_geometry(side, c_star)});
}

const LevelGeometry& ScalingData::at(int n) const
{
    if (n < 1)
        throw std::out_of_range("scaling data levels start at 1");
    return levels_[static_cast<std::size_t>(n - 1) % levels_.size()];
}

ScalingData ScalingData::shifted(int k) const
{
    std::vector<LevelGeometry> rotated(levels_.size());
    for (std::size_t i = 0; i < levels_.size(); ++i)
        rotated[i] = levels_[(i + static_cast<std::size_t>(k)) % levels_.size()];
    return ScalingData(side_, base_, std::move(rotated));
}

bool ScalingData::proper(double margin) const
{
    return std::all_of(levels_.begin(), levels_.end(),
                       [&](const LevelGeometry& g) { return g.s.is_proper(margin) && g.g.positive(); });
}

IntervalTower build_tower(const ScalingData& data, int depth, double proper_margin)
{
    if (depth < 1)
        throw std::invalid_argument("tower depth must be at least 1");
    if (!data.proper(proper_margin))
        throw ParameterError("scaling data is not proper (margin " + std::to_string(proper_margin) + ")");

    IntervalTower tower;
    tower.side = data.side();
    tower.depth = depth;
    tower.base = data.base();

    const Interval& base = data.base();
    const double y0 = data.side() == Side::Left ? base.lo : base.hi;
    const double z0 = data.side() == Side::Left ? base.hi : base.lo;

    const double o = data.origin();
    const Interval lbase = data.local_base();
    TowerLevel root;
    root.I = {base, base, base};
    root.local = {lbase, lbase, lbase};
    root.zoom = AffineMap1D::identity();
    root.y = y0;
    root.z = z0;
    root.x = root.w = std::numeric_limits<double>::quiet_NaN();
    tower.levels.push_back(root);

    // composed relative to the origin, which every I_1^n contains
    const double ly0 = y0 - o;
    const double lz0 = z0 - o;
    AffineMap1D h = AffineMap1D::identity();
    for (int n = 1; n <= depth; ++n) {
        const LevelMaps F = data.local_maps(n);
        TowerLevel lv;
        lv.n = n;
        for (std::size_t i = 0; i < 3; ++i) {
            lv.local[i] = h.after(F[static_cast<int>(i)]).image(lbase);
            lv.I[i] = {lv.local[i].lo + o, lv.local[i].hi + o};
        }
        lv.x = h(F.F0(lz0)) + o;
        lv.w = h(F.F2(lz0)) + o;
        h = h.after(F.F1);
        // the global zoom conjugates the local one by the translation
        lv.zoom = {h.intercept + o - h.slope * o, h.slope};
        lv.y = h(ly0) + o;
        lv.z = h(lz0) + o;
        tower.levels.push_back(lv);
    }
    return tower;
}

Branch translate_branch(const Branch& b, double from, double to)
{
    const double d = from - to;
    // u_to = u_from + d
    return {{b.domain.lo + d, b.domain.hi + d}, {b.map.intercept - b.map.slope * d + d, b.map.slope}, b.level, b.kind};
}

namespace {

// Images are recomputed through long compositions, so lookups allow a small
// fraction of the branch length; gaps between branches are much wider.
double slack_for(const Interval& iv)
{
    return 1e-4 * iv.length() + 1e-14;
}

const Branch* find_in(const std::vector<Branch>& table, double x)
{
    for (const Branch& b : table)
        if (b.domain.contains(x, slack_for(b.domain)))
            return &b;
    return nullptr;
}

const Branch* find_in(const std::vector<Branch>& table, const Interval& iv)
{
    for (const Branch& b : table)
        if (b.domain.contains(iv, slack_for(b.domain)))
            return &b;
    return nullptr;
}

const Branch& branch_in(const std::vector<Branch>& table, int level, int kind)
{
    for (const Branch& b : table)
        if (b.level == level && b.kind == kind)
            return b;
    throw DepthExhausted("no branch at level " + std::to_string(level) + " kind " + std::to_string(kind));
}

}  // namespace

PiecewiseAffineMap::PiecewiseAffineMap(ScalingData data, int depth, std::vector<Branch> local_branches)
    : data_(std::move(data)), depth_(depth), local_(std::move(local_branches))
{
    std::sort(local_.begin(), local_.end(), [](const Branch& a, const Branch& b) { return a.domain.lo < b.domain.lo; });
    branches_.reserve(local_.size());
    for (const Branch& b : local_)
        branches_.push_back(translate_branch(b, data_.origin(), 0.0));
}

const Branch* PiecewiseAffineMap::find(double x) const { return find_in(branches_, x); }
const Branch* PiecewiseAffineMap::find(const Interval& iv) const { return find_in(branches_, iv); }
const Branch& PiecewiseAffineMap::branch(int level, int kind) const { return branch_in(branches_, level, kind); }
const Branch* PiecewiseAffineMap::find_local(double u) const { return find_in(local_, u); }
const Branch* PiecewiseAffineMap::find_local(const Interval& iv) const { return find_in(local_, iv); }
const Branch& PiecewiseAffineMap::local_branch(int level, int kind) const { return branch_in(local_, level, kind); }

double PiecewiseAffineMap::operator()(double x) const
{
    const Branch* b = find_local(x - origin());
    if (b == nullptr)
        throw std::domain_error("x=" + std::to_string(x) + " is outside the truncated domain of f_s");
    return origin() + b->map(x - origin());
}

namespace {

// Branch maps of f_s at levels 1..depth, built from the level-1 maps by
// f_s|I^{n+1}(s) = F2 o f_{sigma s}|I^n(sigma s) o F1^{-1}.
std::vector<Branch> fs_branches(const ScalingData& data, int depth)
{
    if (depth < 1)
        return {};
    // local frame of `data`; the inner table is moved into it below
    const LevelMaps F = data.local_maps(1);
    const Interval base = data.local_base();
    std::vector<Branch> out;
    out.push_back({F.F2.image(base), F.F0.after(F.F2.inverse()), 1, 2});
    out.push_back({F.F0.image(base), F.F1.after(F.F0.inverse()), 1, 0});

    const ScalingData next = data.shifted();
    const AffineMap1D pull = F.F1.inverse();
    for (const Branch& inner : fs_branches(next, depth - 1)) {
        const Branch b = translate_branch(inner, next.origin(), data.origin());
        out.push_back({F.F1.image(b.domain), F.F2.after(b.map).after(pull), b.level + 1, b.kind});
    }
    return out;
}

}  // namespace

PiecewiseAffineMap build_fs(const ScalingData& data, int depth)
{
    if (depth < 1)
        throw std::invalid_argument("f_s depth must be at least 1");
    return PiecewiseAffineMap(data, depth, fs_branches(data, depth));
}

PiecewiseAffineMap build_fs(Side side, double c_star, int depth, double residual_tol)
{
    const double residual = std::abs(renorm_map(side, c_star) - c_star);
    if (!(residual <= residual_tol))
        throw SolverError("c=" + std::to_string(c_star) + " is not a fixed point of the induced map (residual " +
                          std::to_string(residual) + ")");
    return build_fs(ScalingData::stationary(side, c_star), depth);
}

namespace {

// Composes f along the orbit of a piece, looking up the branch that holds the
// current image at every step.
AffineMap1D iterate_on(const PiecewiseAffineMap& f, const Interval& piece, long steps)
{
    AffineMap1D acc = AffineMap1D::identity();
    Interval cur = piece;
    for (long k = 0; k < steps; ++k) {
        const Branch* b = f.find_local(cur);
        if (b == nullptr)
            throw DepthExhausted("orbit of a piece left the truncated domain after " + std::to_string(k) + " steps");
        acc = b->map.after(acc);
        cur = b->map.image(cur);
    }
    return acc;
}

long pow3(int n)
{
    long p = 1;
    for (int i = 0; i < n; ++i)
        p *= 3;
    return p;
}

}  // namespace

PiecewiseAffineMap zoom(const PiecewiseAffineMap& f, int n)
{
    if (n < 0 || n > 8)
        throw std::invalid_argument("zoom level must lie in [0, 8]");
    if (n == 0)
        return f;
    if (f.depth() <= n)
        throw DepthExhausted("cannot zoom " + std::to_string(n) + " levels into depth " + std::to_string(f.depth()));

    AffineMap1D h = AffineMap1D::identity();
    for (int k = 1; k <= n; ++k)
        h = h.after(f.data().local_maps(k).F1);
    const AffineMap1D h_inv = h.inverse();

    const ScalingData next = f.data().shifted(n);
    std::vector<Branch> out;
    for (const Branch& b : f.local_branches()) {
        if (b.level <= n)
            continue;
        const AffineMap1D g = iterate_on(f, b.domain, pow3(n));
        const Branch zoomed{h_inv.image(b.domain), h_inv.after(g).after(h), b.level - n, b.kind};
        out.push_back(translate_branch(zoomed, f.origin(), next.origin()));
    }
    return PiecewiseAffineMap(next, f.depth() - n, std::move(out));
}

PiecewiseAffineMap renormalize(const PiecewiseAffineMap& f)
{
    if (f.depth() < 2)
        throw DepthExhausted("renormalize needs depth >= 2");
    return zoom(f, 1);
}

double branch_distance(const PiecewiseAffineMap& a, const PiecewiseAffineMap& b)
{
    const auto& A = a.branches();
    const auto& B = b.branches();
    if (A.size() != B.size())
        return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (A[i].level != B[i].level || A[i].kind != B[i].kind)
            return std::numeric_limits<double>::infinity();
        d = std::max({d, std::abs(A[i].domain.lo - B[i].domain.lo), std::abs(A[i].domain.hi - B[i].domain.hi),
                      std::abs(A[i].map.intercept - B[i].map.intercept), std::abs(A[i].map.slope - B[i].map.slope)});
    }
    return d;
}

namespace {

Interval intersect(const Interval& a, const Interval& b)
{
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Maximal interval around p on which f^steps is affine, by intersecting the
// pulled-back branch domains along the orbit of p.
std::pair<Interval, AffineMap1D> maximal_affine_domain(const PiecewiseAffineMap& f, double p, long steps)
{
    Interval dom{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    AffineMap1D acc = AffineMap1D::identity();
    for (long k = 0; k < steps; ++k) {
        const double q = acc(p);
        const Branch* b = f.find_local(q);
        if (b == nullptr)
            throw DepthExhausted("orbit of " + std::to_string(p) + " left the truncated domain");
        const Interval pulled = k == 0 ? b->domain : acc.inverse().image(b->domain);
        dom = intersect(dom, pulled);
        acc = b->map.after(acc);
    }
    return {dom, acc};
}

double interval_error(const Interval& a, const Interval& b)
{
    return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
}

}  // namespace

RenormalizabilityReport verify_infinite_renormalizability(const PiecewiseAffineMap& f, const IntervalTower& tower,
                                                          int n, double tol)
{
    RenormalizabilityReport rep;
    rep.n = n;
    if (n < 0)
        throw std::invalid_argument("level must be non-negative");
    if (n == 0) {
        rep.note = "level 0: f^0 is the identity on the base interval";
        return rep;
    }
    if (n > 8)
        throw DepthExhausted("3^n iterations beyond the budget (n <= 8)");
    if (n > f.depth() - 1 || n > tower.depth)
        throw DepthExhausted("level " + std::to_string(n) + " needs f of depth >= " + std::to_string(n + 1));

    const Side side = f.side();
    const TowerLevel& lv = tower.level(n);
    const double anchor = side == Side::Left ? tower.base.lo : tower.base.hi;
    rep.note = "levels 1.." + std::to_string(f.depth() - 1) + " of a depth-" + std::to_string(f.depth()) +
               " truncation can be certified";

    const long full = pow3(n) - 1;
    for (int clause = 0; clause < 2; ++clause) {
        RenormalizabilityClause cl;
        cl.name = clause == 0 ? "anchor" : "anchor image";
        cl.expected_image = lv.I[1];
        try {
            // f(y_n) lies on the level n+1 branch of kind 2, at its end
            const double o = f.origin();
            const double f_y = o + f.local_branch(n + 1, 2).map(lv.y - o);
            const double f_anchor = f(anchor);
            const double point = clause == 0 ? anchor : f_anchor;
            cl.expected_domain = clause == 0 ? Interval::hull(anchor, f_y) : Interval::hull(f(f_y), f_anchor);
            const auto [dom, g] = maximal_affine_domain(f, point - o, clause == 0 ? full : full - 1);
            cl.domain = {dom.lo + o, dom.hi + o};
            const Interval img = g.image(dom);
            cl.image = {img.lo + o, img.hi + o};
            cl.error =
                std::max(interval_error(cl.domain, cl.expected_domain), interval_error(cl.image, cl.expected_image));
        } catch (const std::exception& ex) {
            cl.error = std::numeric_limits<double>::infinity();
            rep.note += "; " + cl.name + ": " + ex.what();
        }
        cl.pass = cl.error <= tol;
        rep.pass = rep.pass && cl.pass;
        rep.clauses.push_back(cl);
    }
    return rep;
}

}  // namespace renormlab
