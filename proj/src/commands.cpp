#include "renormlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "renormlab/extension.hpp"
#include "renormlab/scaling.hpp"
#include "renormlab/shift.hpp"
#include "renormlab/tower.hpp"

namespace renormlab {

namespace {

// published values, given to six decimals
constexpr double kLeftFixedPoint = 0.196693;
constexpr double kRightFixedPoint = 0.803307;
constexpr double kPublishedTol = 1e-6;
constexpr std::array<double, 3> kLeftEndpoints{0.188816, 0.194271, 0.199413};
constexpr std::array<double, 3> kRightEndpoints{0.800587, 0.805729, 0.811184};

std::string side_tag(Side s)
{
    return s == Side::Left ? "l" : "r";
}

CommandOutput start(const std::string& name, const RunConfig& cfg)
{
    cfg.validate();
    CommandOutput out;
    out.command = name;
    out.config = cfg.entries();
    out.has_report = true;
    return out;
}

FixedPointResult fixed_point(Side side, const RunConfig& cfg)
{
    return unperturbed_fixed_point(side, cfg.root_tol);
}

std::int64_t as_int(std::size_t v)
{
    return static_cast<std::int64_t>(v);
}

// Fixed points of the induced map inside one feasible component: sign
// changes of R(c) - c on an interior grid, each polished by the solver.
std::vector<FixedPointResult> fixed_points_in(Side side, const Interval& comp, const RunConfig& cfg)
{
    const double pad = 1e-4 * comp.length();
    const Interval inner{comp.lo + pad, comp.hi - pad};
    constexpr int kScan = 2000;
    std::vector<FixedPointResult> out;
    auto excess = [side](double c) { return renorm_map(side, c) - c; };
    double prev_c = inner.lo;
    double prev = excess(prev_c);
    for (int i = 1; i <= kScan; ++i) {
        const double c = inner.lo + inner.length() * i / kScan;
        const double v = excess(c);
        if ((prev < 0.0) != (v < 0.0)) {
            SolverOptions opts;
            opts.tol = cfg.root_tol;
            opts.residual_tol = cfg.residual_tol;
            out.push_back(solve_fixed_point([side](double x) { return renorm_map(side, x); }, {prev_c, c}, opts));
        }
        prev_c = c;
        prev = v;
    }
    return out;
}

}  // namespace

CommandOutput cmd_ratios(const RunConfig& cfg, const RatioRange& range)
{
    CommandOutput out = start("ratios", cfg);
    out.has_report = false;
    Table t{"ratios", {"side", "c", "s0", "s1", "s2", "g0", "g1", "sum"}, {}};
    for (Side side : cfg.sides) {
        const Interval adm = admissible_interval(side);
        const double lo = range.lo.value_or(adm.lo);
        const double hi = range.hi.value_or(adm.hi);
        if (!(lo < hi) || !adm.contains(Interval{lo, hi}, 0.0))
            throw ConfigError("ratio range must be an increasing sub-interval of the admissible interval");
        const int grid = cfg.ratio_grid;
        for (int i = 0; i < grid; ++i) {
            // cell midpoints keep the degenerate endpoints out
            const double c = lo + (hi - lo) * (i + 0.5) / grid;
            try {
                const ScalingTriple s = scaling_ratios(side, c);
                const GapPair g = gap_ratios(side, c);
                t.add({side_tag(side), c, s.s0, s.s1, s.s2, g.g0, g.g1, s.sum()});
            } catch (const DegenerateRatio&) {
            }
        }
    }
    out.tables.push_back(std::move(t));
    return out;
}

CommandOutput cmd_feasible(const RunConfig& cfg)
{
    CommandOutput out = start("feasible", cfg);
    Table comps{"feasible", {"side", "component", "lo", "hi", "lo_constraint", "hi_constraint", "fixed_points", "c_star"},
                {}};
    Table touches{"touch_points", {"side", "c", "constraints"}, {}};
    for (Side side : cfg.sides) {
        const FeasibleDomain d = feasible_domain(side, cfg.feasible_grid, cfg.root_tol * 0.1);
        const auto& published = side == Side::Left ? kLeftEndpoints : kRightEndpoints;
        const std::vector<double> ends = d.endpoints();
        // endpoints() lists distinct values; the split point appears once
        out.report.add("feasible." + side_tag(side) + ".count", "number of distinct feasible endpoints",
                       static_cast<double>(ends.size()), 3.0, 0.0, Relation::AbsDiff);
        for (std::size_t i = 0; i < published.size(); ++i) {
            const double m = i < ends.size() ? ends[i] : std::nan("");
            out.report.add("feasible." + side_tag(side) + ".endpoint" + std::to_string(i),
                           "feasible domain endpoint matches the published value", m, published[i], kPublishedTol,
                           Relation::AbsDiff);
        }
        for (std::size_t k = 0; k < d.intervals.size(); ++k) {
            const Interval& iv = d.intervals[k];
            const auto fps = fixed_points_in(side, iv, cfg);
            comps.add({side_tag(side), static_cast<std::int64_t>(k + 1), iv.lo, iv.hi, d.boundary_constraints[2 * k],
                       d.boundary_constraints[2 * k + 1], as_int(fps.size()),
                       fps.empty() ? std::nan("") : fps.front().c_star});
            // left: F_d1 empty, F_d2 one; right mirrored
            const bool expect_one = (side == Side::Left) == (k == 1);
            out.report.add("feasible." + side_tag(side) + ".F_d" + std::to_string(k + 1) + ".fixed_points",
                           expect_one ? "unique fixed point in this component" : "no fixed point in this component",
                           static_cast<double>(fps.size()), expect_one ? 1.0 : 0.0, 0.0, Relation::AbsDiff);
        }
        for (std::size_t k = 0; k < d.excluded_points.size(); ++k) {
            std::string names;
            for (const std::string& n : d.excluded_constraints[k])
                names += (names.empty() ? "" : " ") + n;
            touches.add({side_tag(side), d.excluded_points[k], names});
        }
    }
    out.tables.push_back(std::move(comps));
    out.tables.push_back(std::move(touches));
    return out;
}

CommandOutput cmd_fixed_points(const RunConfig& cfg)
{
    CommandOutput out = start("fixed-points", cfg);
    Table t{"fixed_points",
            {"side", "c_star", "residual", "multiplier", "stability", "s0", "s1", "s2", "g0", "g1", "remark_slack"},
            {}};
    double c[2] = {std::nan(""), std::nan("")};
    for (Side side : cfg.sides) {
        const FixedPointResult fp = fixed_point(side, cfg);
        const LevelGeometry geo = level_geometry(side, fp.c_star);
        const double slack = geo.s.s1 * geo.s.s1 - geo.s.s2;
        c[side == Side::Left ? 0 : 1] = fp.c_star;
        t.add({side_tag(side), fp.c_star, fp.residual, fp.multiplier, std::string(to_string(fp.stability)), geo.s.s0,
               geo.s.s1, geo.s.s2, geo.g.g0, geo.g.g1, slack});
        const std::string p = "fixed_point." + side_tag(side);
        out.report.add(p + ".c_star", "fixed point of the induced map matches the published value", fp.c_star,
                       side == Side::Left ? kLeftFixedPoint : kRightFixedPoint, kPublishedTol, Relation::AbsDiff);
        out.report.add(p + ".residual", "|R(c*) - c*| below the residual tolerance", fp.residual, 0.0,
                       cfg.residual_tol, Relation::Below);
        out.report.add(p + ".multiplier", "|R'(c*)| > 1 (unstable)", std::abs(fp.multiplier), 1.0, 0.0,
                       Relation::Above);
        out.report.add(p + ".remark", "s2* <= (s1*)^2 with positive slack", slack, 0.0, 0.0, Relation::Above);
    }
    if (cfg.sides.size() == 2)
        out.report.add("fixed_point.mirror", "c_l* + c_r* = 1", std::abs(c[0] + c[1] - 1.0), 0.0, 1e-8,
                       Relation::Below);
    out.tables.push_back(std::move(t));
    return out;
}

CommandOutput cmd_tower(const RunConfig& cfg)
{
    CommandOutput out = start("tower", cfg);
    Table t{"tower", {"side", "level", "label", "value"}, {}};
    for (Side side : cfg.sides) {
        const FixedPointResult fp = fixed_point(side, cfg);
        const ScalingData data = ScalingData::stationary(side, fp.c_star);
        const IntervalTower tower = build_tower(data, cfg.tower_depth);
        const LevelGeometry geo = data.at(1);
        const std::string p = "tower." + side_tag(side);
        double nest = 0.0, ratio = 0.0, g0 = 0.0, g1 = 0.0;
        bool disjoint = true;
        for (int n = 1; n <= tower.depth; ++n) {
            const TowerLevel& lv = tower.level(n);
            const Interval parent = tower.level(n - 1).I[1];
            const Interval lparent = tower.level(n - 1).local[1];
            const std::int64_t level = n;
            static constexpr const char* names[3] = {"I0", "I1", "I2"};
            for (int j = 0; j < 3; ++j) {
                const Interval& iv = lv.I[static_cast<std::size_t>(j)];
                t.add({side_tag(side), level, std::string(names[j]) + ".lo", iv.lo});
                t.add({side_tag(side), level, std::string(names[j]) + ".hi", iv.hi});
                nest = std::max({nest, parent.lo - iv.lo, iv.hi - parent.hi});
            }
            t.add({side_tag(side), level, "x", lv.x});
            t.add({side_tag(side), level, "y", lv.y});
            t.add({side_tag(side), level, "z", lv.z});
            t.add({side_tag(side), level, "w", lv.w});
            auto dist = [](const Interval& a, const Interval& b) { return std::max(a.lo - b.hi, b.lo - a.hi); };
            const double d01 = dist(lv.local[0], lv.local[1]);
            const double d12 = dist(lv.local[1], lv.local[2]);
            const double d02 = dist(lv.local[0], lv.local[2]);
            disjoint = disjoint && d01 > 0.0 && d12 > 0.0 && d02 > 0.0;
            ratio = std::max(ratio, std::abs(lv.local[1].length() / lparent.length() - geo.s.s1));
            g0 = std::max(g0, std::abs(d01 / lparent.length() - geo.g.g0));
            g1 = std::max(g1, std::abs(d12 / lparent.length() - geo.g.g1));
        }
        out.report.check(p + ".disjoint", "I_0^n, I_1^n, I_2^n pairwise disjoint at every level", disjoint);
        out.report.add(p + ".nesting", "I_j^n contained in I_1^{n-1} (max overshoot)", nest, 0.0, 1e-15,
                       Relation::Below);
        out.report.add(p + ".ratio", "|I_1^n| / |I_1^{n-1}| = s1*", ratio, 0.0, 1e-12, Relation::Below);
        out.report.add(p + ".gap0", "gap between I_0^n and I_1^n over |I_1^{n-1}| = g0", g0, 0.0, 1e-10,
                       Relation::Below);
        out.report.add(p + ".gap1", "gap between I_1^n and I_2^n over |I_1^{n-1}| = g1", g1, 0.0, 1e-10,
                       Relation::Below);
        if (tower.depth >= 10) {
            const Interval& i10 = tower.level(10).I[1];
            const double bound = std::pow(geo.s.s1, 10) * data.base().length();
            const double far = std::max(std::abs(i10.lo - fp.c_star), std::abs(i10.hi - fp.c_star));
            out.report.add(p + ".I1_10", "endpoints of I_1^10 within s1^10 |I_L| of c*", far, 0.0, bound,
                           Relation::Below);
        }
    }
    out.tables.push_back(std::move(t));
    return out;
}

namespace {

// s* followed by the geometry of a perturbed fixed point, repeated.
ScalingData two_periodic_data(Side side, const RunConfig& cfg)
{
    const FixedPointResult fp = fixed_point(side, cfg);
    const FixedPointResult e = find_perturbed_fixed_point(side, 1.01);
    return ScalingData(side, BimodalMap(fp.c_star, side).base_interval(),
                       {level_geometry(side, fp.c_star), perturbed_geometry(side, e.c_star, 1.01)});
}

}  // namespace

CommandOutput cmd_renorm_check(const RunConfig& cfg)
{
    CommandOutput out = start("renorm-check", cfg);
    Table t{"renorm_check", {"side", "check", "n", "error"}, {}};
    const double tol = cfg.renorm_tol;
    for (Side side : cfg.sides) {
        const std::string p = "renorm." + side_tag(side);
        const FixedPointResult fp = fixed_point(side, cfg);
        const PiecewiseAffineMap f = build_fs(side, fp.c_star, cfg.fs_depth, cfg.residual_tol);
        // R drops one level, so it starts one level deeper
        const double d =
            branch_distance(renormalize(build_fs(side, fp.c_star, cfg.fs_depth + 1, cfg.residual_tol)), f);
        t.add({side_tag(side), std::string("R f = f"), std::int64_t{1}, d});
        out.report.add(p + ".fixed_point", "branchwise distance between R f_{s*} and f_{s*}", d, 0.0, tol,
                       Relation::Below);

        const IntervalTower tower = build_tower(f.data(), cfg.fs_depth);
        double worst = 0.0;
        for (int n = 1; n <= cfg.renorm_levels; ++n) {
            const RenormalizabilityReport rep = verify_infinite_renormalizability(f, tower, n, tol);
            for (const RenormalizabilityClause& c : rep.clauses) {
                t.add({side_tag(side), "renormalizable " + c.name, std::int64_t{n}, c.error});
                worst = std::max(worst, c.error);
            }
        }
        out.report.add(p + ".renormalizable", "renormalizability clauses for levels 1.." +
                                                  std::to_string(cfg.renorm_levels),
                       worst, 0.0, tol, Relation::Below);

        const ScalingData data = two_periodic_data(side, cfg);
        const int depth = cfg.fs_depth;
        const PiecewiseAffineMap fs = build_fs(data, depth);
        double lemma = 0.0, powers = 0.0;
        PiecewiseAffineMap r = fs;
        for (int n = 1; n <= 4; ++n) {
            r = renormalize(r);
            const double dz = branch_distance(r, zoom(fs, n));
            t.add({side_tag(side), std::string("R^n = R_n"), std::int64_t{n}, dz});
            powers = std::max(powers, dz);
            if (n <= 3) {
                const double ds = branch_distance(r, build_fs(data.shifted(n), depth - n));
                t.add({side_tag(side), std::string("R^n f_s = f_sigma^n s"), std::int64_t{n}, ds});
                lemma = std::max(lemma, ds);
            }
        }
        out.report.add(p + ".lemma_shift", "R^n f_s = f_{sigma^n s} for 2-periodic s, n <= 3", lemma, 0.0, tol,
                       Relation::Below);
        out.report.add(p + ".lemma_powers", "(R)^n = R_n for 2-periodic s, n <= 4", powers, 0.0, tol,
                       Relation::Below);
    }
    out.tables.push_back(std::move(t));
    return out;
}

CommandOutput cmd_extend(const RunConfig& cfg)
{
    CommandOutput out = start("extend", cfg);
    Table ledger{"ledger", {"side", "generation", "lipschitz", "lipschitz_ratio", "max_slope", "slope_ratio"}, {}};
    Table junctions{"junctions",
                    {"side", "x", "left_n", "right_n", "generation", "slope_left", "slope_right", "mismatch"},
                    {}};
    Table samples{"samples", {"x", "value", "derivative"}, {}};
    Table segments{"segments", {"side", "n", "generation", "lo", "hi", "c0", "c1", "c2", "c3"}, {}};

    std::vector<ExtensionGraph> graphs;
    for (Side side : {Side::Left, Side::Right}) {
        const FixedPointResult fp = fixed_point(side, cfg);
        ExtensionGraph g = build_extension(side, fp.c_star, cfg.extension_depth);
        const PiecewiseAffineMap f = build_fs(side, fp.c_star, cfg.fs_depth, cfg.residual_tol);
        const ScalingTriple s = scaling_ratios(side, fp.c_star);
        const std::string p = "extend." + side_tag(side);
        const bool report_side = std::find(cfg.sides.begin(), cfg.sides.end(), side) != cfg.sides.end();

        double ratio_dev = 0.0;
        bool lip_monotone = true, slope_monotone = true;
        const double expected_ratio = s.s2 / (s.s1 * s.s1);
        for (std::size_t k = 0; k < g.lipschitz_ledger.size(); ++k) {
            const double lr = k ? g.lipschitz_ledger[k] / g.lipschitz_ledger[k - 1] : std::nan("");
            const double sr = k ? g.slope_ledger[k] / g.slope_ledger[k - 1] : std::nan("");
            if (k) {
                ratio_dev = std::max(ratio_dev, std::abs(lr / expected_ratio - 1.0));
                lip_monotone = lip_monotone && lr < 1.0;
                if (k > 4)
                    slope_monotone = slope_monotone && sr < 1.0;
            }
            if (report_side)
                ledger.add({side_tag(side), as_int(k), g.lipschitz_ledger[k], lr, g.slope_ledger[k], sr});
        }
        if (report_side) {
            // coefficients are in t = x - lo
            for (const GraphSegment& seg : g.segments)
                for (const CubicPiece& pc : seg.pieces)
                    segments.add({side_tag(side), std::int64_t{seg.n}, std::int64_t{seg.generation}, pc.domain.lo,
                                  pc.domain.hi, pc.c[0], pc.c[1], pc.c[2], pc.c[3]});
            for (const Junction& j : g.junctions)
                junctions.add({side_tag(side), j.x, std::int64_t{j.left_n}, std::int64_t{j.right_n},
                               std::int64_t{j.generation}, j.slope_left, j.slope_right, j.mismatch});
            out.report.add(p + ".junctions", "C^1 joins: max one-sided slope mismatch",
                           max_junction_mismatch(g), 0.0, cfg.slope_tol, Relation::Below);
            out.report.add(p + ".lipschitz_ratio", "Lipschitz ledger ratio s2/s1^2 per generation (relative)",
                           ratio_dev, 0.0, 1e-8, Relation::Below);
            out.report.check(p + ".lipschitz_monotone", "Lipschitz ledger decreasing", lip_monotone);
            out.report.check(p + ".slope_monotone", "max segment slope decreasing beyond generation 4",
                             slope_monotone);
            out.report.add(p + ".slope_limit", "max segment slope at the deepest generation", g.slope_ledger.back(),
                           0.0, 1e-6, Relation::Below);
            out.report.add(p + ".agrees", "g = f_{s*} on the branch domains", extension_error(g, f), 0.0, 1e-12,
                           Relation::Below);
            out.report.add(p + ".critical", "g'(c*) = 0", std::abs(g.derivative(g.c_star)), 0.0, 1e-12,
                           Relation::Below);
        }
        graphs.push_back(std::move(g));
    }
    const JoinedMap m = join_bimodal(graphs[0], graphs[1]);
    const ShapeReport shape = check_shape(m, cfg.sample_grid);
    out.report.check("extend.shape", "joined map is down-up-down", shape.pass, shape.detail);
    out.report.add("extend.mirror", "g(1 - x) = 1 - g(x)", mirror_error(m, cfg.sample_grid), 0.0, 1e-12,
                   Relation::Below);
    out.report.add("extend.self_reproduction", "h^{-1} g^3 h = g on both base intervals",
                   self_reproduction_error(m, cfg.sample_grid), 0.0, cfg.renorm_tol, Relation::Below);
    const double lambda =
        std::max({m.left.lipschitz_ledger.front(), m.right.lipschitz_ledger.front(), m.middle_lipschitz()});
    const double empirical =
        empirical_lipschitz([&m](double x) { return m.derivative(x); }, {0.0, 1.0}, 100000, 1e-6, cfg.seed);
    out.report.add("extend.lipschitz_bound", "sampled |g'(u) - g'(v)| / |u - v| within the certified bound",
                   empirical, 0.0, lambda * (1.0 + 1e-9), Relation::Below);
    for (int i = 0; i <= cfg.sample_grid; ++i) {
        const double x = static_cast<double>(i) / cfg.sample_grid;
        samples.add({x, m(x), m.derivative(x)});
    }
    out.tables.push_back(std::move(ledger));
    out.tables.push_back(std::move(junctions));
    out.tables.push_back(std::move(segments));
    out.tables.push_back(std::move(samples));
    return out;
}

CommandOutput cmd_shift_check(const RunConfig& cfg)
{
    CommandOutput out = start("shift-check", cfg);
    Table conj{"conjugacy", {"alphabet", "alpha", "depth", "sup_error", "segment_error", "pass"}, {}};
    Table decay{"injectivity_decay", {"position", "distance", "ratio"}, {}};
    const double tol = cfg.conjugacy_tol;
    const ShiftOptions opts{cfg.extension_depth};
    const double c_left = fixed_point(Side::Left, cfg).c_star;
    const double c_right = fixed_point(Side::Right, cfg).c_star;
    const double s2 = scaling_ratios(Side::Left, c_left).s2;

    const ExtensionTriples triples =
        make_triples(default_policies(cfg.shift_alphabet, cfg.shift_amplitude), c_left, c_right);
    out.report.add("shift.mirror", "psi_i(x) = 1 - phi_i(1 - x)", triple_mirror_error(triples), 0.0, 1e-14,
                   Relation::Below);
    const double delta = triples.size() > 1 ? triple_separation(triples) : 0.0;
    out.report.add("shift.separation", "extension pairs pairwise distinct on the gaps", delta, 1e-3, 0.0,
                   Relation::Above);

    std::mt19937_64 rng(cfg.seed);
    std::vector<SymbolSequence> alphas;
    for (int i = 0; i < cfg.shift_count; ++i)
        alphas.push_back(random_sequence(static_cast<std::size_t>(cfg.shift_length), cfg.shift_alphabet, rng));
    const auto reps = verify_conjugacy_batch(alphas, triples, cfg.sample_grid, tol, opts);
    double sup = 0.0, seg = 0.0;
    for (const ConjugacyReport& r : reps) {
        conj.add({std::int64_t{cfg.shift_alphabet}, r.alpha.str(), std::int64_t{r.depth}, r.sup_error,
                  r.segment_error, r.pass});
        sup = std::max(sup, r.sup_error);
        seg = std::max(seg, r.segment_error);
    }
    out.report.add("shift.conjugacy", "sup |R b_alpha - b_sigma(alpha)| over random alpha", sup, 0.0, tol,
                   Relation::Below);
    out.report.add("shift.conjugacy_segments", "segmentwise R b_alpha = b_sigma(alpha)", seg, 0.0, tol,
                   Relation::Below);

    // C^1 joins survive mixing the extension pairs
    double mismatch = 0.0;
    std::vector<JoinedMap> maps;
    for (const SymbolSequence& a : alphas) {
        maps.push_back(build_b_alpha(a, triples, cfg.shift_length, opts));
        mismatch = std::max({mismatch, max_junction_mismatch(maps.back().left), max_junction_mismatch(maps.back().right)});
    }
    out.report.add("shift.junctions", "b_alpha has C^1 joins", mismatch, 0.0, cfg.slope_tol, Relation::Below);

    double closest = std::numeric_limits<double>::infinity();
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (std::size_t j = i + 1; j < alphas.size(); ++j)
            if (alphas[i] != alphas[j]) {
                closest = std::min(closest, multiscale_distance(maps[i], maps[j]));
                ++pairs;
            }
    out.report.add("shift.injectivity", "distinct alpha give distinct b_alpha (" + std::to_string(pairs) + " pairs)",
                   pairs ? closest : 1.0, 0.0, 0.0, Relation::Above);

    if (cfg.shift_alphabet >= 2) {
        const SymbolSequence zero(std::vector<int>(static_cast<std::size_t>(cfg.shift_length), 0),
                                  cfg.shift_alphabet);
        double prev = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0, first = 0.0;
        const int positions = std::min(5, cfg.shift_length);
        for (int k = 1; k <= positions; ++k) {
            SymbolSequence a = zero;
            a.symbols[static_cast<std::size_t>(k - 1)] = 1;
            const double d = injectivity_probe(zero, a, triples, cfg.shift_length, 200, opts);
            const double r = k > 1 ? d / prev : std::nan("");
            decay.add({std::int64_t{k}, d, r});
            if (k == 1)
                first = d;
            else {
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            prev = d;
        }
        const double d01 = seed_pair_distance(triples, 0, 1);
        out.report.add("shift.first_position", "difference at position 1 is at least delta * s2", first, d01 * s2,
                       0.0, Relation::AtLeast);
        out.report.add("shift.decay_min", "decay ratio in the first differing position >= s2/2", lo, 0.5 * s2, 0.0,
                       Relation::AtLeast);
        out.report.add("shift.decay_max", "decay ratio in the first differing position < 2 s2", hi, 0.0, 2.0 * s2,
                       Relation::Below);
    }

    // alphabet 5 spot check
    const ExtensionTriples five = make_triples(default_policies(5, cfg.shift_amplitude), c_left, c_right);
    std::mt19937_64 rng5(cfg.seed + 5);
    std::vector<SymbolSequence> alphas5;
    for (int i = 0; i < 10; ++i)
        alphas5.push_back(random_sequence(static_cast<std::size_t>(cfg.shift_length), 5, rng5));
    double sup5 = 0.0;
    for (const ConjugacyReport& r : verify_conjugacy_batch(alphas5, five, cfg.sample_grid, tol, opts)) {
        conj.add({std::int64_t{5}, r.alpha.str(), std::int64_t{r.depth}, r.sup_error, r.segment_error, r.pass});
        sup5 = std::max({sup5, r.sup_error, r.segment_error});
    }
    out.report.add("shift.alphabet5", "conjugacy with five extension pairs", sup5, 0.0, tol, Relation::Below);
    double closest5 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            const SymbolSequence a(std::vector<int>(static_cast<std::size_t>(cfg.shift_length), i), 5);
            const SymbolSequence b(std::vector<int>(static_cast<std::size_t>(cfg.shift_length), j), 5);
            closest5 = std::min(closest5, injectivity_probe(a, b, five, cfg.shift_length, 200, opts));
        }
    out.report.add("shift.alphabet5_injectivity", "constant sequences over five symbols give distinct maps", closest5,
                   0.0, 0.0, Relation::Above);

    out.tables.push_back(std::move(conj));
    out.tables.push_back(std::move(decay));
    return out;
}

CommandOutput cmd_perturb(const RunConfig& cfg)
{
    CommandOutput out = start("perturb", cfg);
    Table t{"perturb",
            {"side", "epsilon", "status", "c_star", "s0", "s1", "s2", "g0", "g1", "multiplier", "stability"},
            {}};
    for (Side side : cfg.sides) {
        const std::string p = "perturb." + side_tag(side);
        PerturbationConfig pc;
        pc.tol = cfg.root_tol;
        pc.residual_tol = cfg.residual_tol;
        const ContinuumSweep sweep = continuum_sweep(side, cfg.epsilons, pc);
        const FixedPointResult base = fixed_point(side, cfg);

        for (double e : cfg.epsilons) {
            const auto it = std::find_if(sweep.points.begin(), sweep.points.end(),
                                         [e](const ContinuumPoint& q) { return q.epsilon == e; });
            const std::string name = p + ".eps=" + format_number(e);
            if (it != sweep.points.end()) {
                const ContinuumPoint& q = *it;
                t.add({side_tag(side), e, std::string("found"), q.c_star, q.triple.s0, q.triple.s1, q.triple.s2,
                       q.gaps.g0, q.gaps.g1, q.fixed_point.multiplier,
                       std::string(to_string(q.fixed_point.stability))});
                out.report.check(name, "perturbed fixed point found and unstable",
                                 q.fixed_point.stability == Stability::Unstable);
                if (e == 1.0)
                    out.report.add(p + ".eps=1.exact", "epsilon = 1 reproduces the unperturbed fixed point exactly",
                                   std::abs(q.c_star - base.c_star), 0.0, 0.0, Relation::AbsDiff);
            } else {
                std::string reason;
                for (const ContinuumFailure& f : sweep.failures)
                    if (f.epsilon == e)
                        reason = f.reason;
                const double nan = std::nan("");
                t.add({side_tag(side), e, "lost: " + reason, nan, nan, nan, nan, nan, nan, nan, std::string("")});
                out.report.check(name, "perturbed fixed point found and unstable", false, reason);
            }
        }

        // the witness pair is solved on its own when the grid leaves it out
        auto triple_at = [&](double e) -> std::optional<ScalingTriple> {
            for (const ContinuumPoint& q : sweep.points)
                if (q.epsilon == e)
                    return q.triple;
            try {
                return perturbed_ratios(side, find_perturbed_fixed_point(side, e, pc).c_star, e, pc);
            } catch (const std::exception&) {
                return std::nullopt;
            }
        };
        const auto a = triple_at(0.99);
        const auto b = triple_at(1.01);
        if (a && b) {
            const double d = std::min({std::abs(a->s0 - b->s0), std::abs(a->s1 - b->s1), std::abs(a->s2 - b->s2)});
            out.report.add(p + ".non_rigidity", "scaling triples at epsilon 0.99 and 1.01 differ in every component",
                           d, 1e-6, 0.0, Relation::Above);
        } else {
            out.report.check(p + ".non_rigidity", "scaling triples at epsilon 0.99 and 1.01 differ in every component",
                             false, "fixed point missing at 0.99 or 1.01");
        }
    }
    out.tables.push_back(std::move(t));
    return out;
}

CommandOutput cmd_all(const RunConfig& cfg)
{
    CommandOutput out = start("all", cfg);
    std::vector<CommandOutput> parts;
    parts.push_back(cmd_ratios(cfg));
    parts.push_back(cmd_feasible(cfg));
    parts.push_back(cmd_fixed_points(cfg));
    parts.push_back(cmd_tower(cfg));
    parts.push_back(cmd_renorm_check(cfg));
    parts.push_back(cmd_extend(cfg));
    parts.push_back(cmd_shift_check(cfg));
    parts.push_back(cmd_perturb(cfg));
    for (CommandOutput& part : parts) {
        for (Table& t : part.tables) {
            t.name = part.command + "." + t.name;
            out.tables.push_back(std::move(t));
        }
        if (part.has_report)
            out.report.append(part.report);
    }
    return out;
}

std::string render(const CommandOutput& out, OutputFormat format)
{
    std::ostringstream os;
    if (format == OutputFormat::Csv)
        write_csv(os, out);
    else
        write_json(os, out);
    return os.str();
}

void emit(const CommandOutput& out, const RunConfig& cfg)
{
    const std::string text = render(out, cfg.format);
    if (cfg.out.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout)
            throw std::runtime_error("failed writing to stdout");
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open " + cfg.out + " for writing");
    f << text;
    f.close();
    if (!f)
        throw std::runtime_error("failed writing " + cfg.out);
}

int exit_code(const CommandOutput& out)
{
    return out.pass() ? 0 : 1;
}

}  // namespace renormlab
