#include "renormlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace renormlab {

namespace {

struct AnchorData {
    std::array<double, 6> b;
    double length;  // |base interval|
};

AnchorData anchor_data(Side side, double c)
{
    const BimodalMap map(c, side);
    AnchorData out{map.anchor_orbit(), 0.0};
    out.length = side == Side::Left ? out.b[1] : 1.0 - out.b[1];
    // b_c(0) > 0 everywhere on the admissible interval
    if (!(out.length > 0.0))
        throw DegenerateRatio("base interval collapsed at c=" + std::to_string(c));
    return out;
}

std::string format_real(double x)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

double ScalingTriple::boundary_distance() const
{
    // Distance to each facet of {s_i >= 0, sum <= 1} inside R^3.
    const double facet_sum = (1.0 - sum()) / std::sqrt(3.0);
    return std::min({s0, s1, s2, facet_sum});
}

ScalingTriple scaling_ratios(Side side, double c)
{
    const auto [b, len] = anchor_data(side, c);
    if (side == Side::Left)
        return {(b[1] - b[4]) / len, (b[2] - b[5]) / len, b[3] / len};
    return {(b[4] - b[1]) / len, (b[5] - b[2]) / len, (1.0 - b[3]) / len};
}

GapPair gap_ratios(Side side, double c)
{
    const auto [b, len] = anchor_data(side, c);
    if (side == Side::Left)
        return {(b[4] - b[2]) / len, (b[5] - b[3]) / len};
    return {(b[2] - b[4]) / len, (b[3] - b[5]) / len};
}

LevelGeometry level_geometry(Side side, double c)
{
    return {scaling_ratios(side, c), gap_ratios(side, c)};
}

double renorm_map(Side side, double c)
{
    const auto [b, len] = anchor_data(side, c);
    const ScalingTriple s = scaling_ratios(side, c);
    if (s.s1 == 0.0)
        throw DegenerateRatio("s1 vanishes at c=" + format_real(c));
    const double r = side == Side::Left ? (b[2] - c) / s.s1 : 1.0 - (c - b[2]) / s.s1;
    if (!std::isfinite(r))
        throw DegenerateRatio("induced map is not finite at c=" + format_real(c));
    return r;
}

std::array<double, 5> constraint_values(Side side, double c)
{
    const LevelGeometry geo = level_geometry(side, c);
    return {geo.s.s0, geo.s.s1, geo.s.s2, geo.g.g0, geo.g.g1};
}

std::vector<double> FeasibleDomain::endpoints() const
{
    std::vector<double> out;
    for (const Interval& iv : intervals) {
        // components split at a touch point share that endpoint
        if (out.empty() || out.back() != iv.lo)
            out.push_back(iv.lo);
        out.push_back(iv.hi);
    }
    return out;
}

namespace {

bool all_positive(const std::array<double, 5>& v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
}

bool feasible_at(Side side, double c)
{
    try {
        return all_positive(constraint_values(side, c));
    } catch (const std::exception&) {
        return false;
    }
}

// Index of the constraint that is most negative at c.
std::size_t violated_constraint(Side side, double c)
{
    const auto v = constraint_values(side, c);
    std::size_t worst = 0;
    for (std::size_t j = 1; j < v.size(); ++j)
        if (!(v[j] >= v[worst]))
            worst = j;
    return worst;
}

struct Boundary {
    double c;
    std::string constraint;
};

Boundary refine_boundary(Side side, double a, double b, bool feasible_a, double tol)
{
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b)
            break;  // adjacent doubles
        if (feasible_at(side, m) == feasible_a)
            a = m;
        else
            b = m;
    }
    const double outside = feasible_a ? b : a;
    return {0.5 * (a + b), kConstraintNames[violated_constraint(side, outside)]};
}

// Minimiser of constraint j on [a, b] by bisection on the sign of a central
// difference; assumes a single interior minimum.
double refine_minimum(Side side, std::size_t j, double a, double b, double tol)
{
    const double h = 1e-7;
    auto slope = [&](double c) { return constraint_values(side, c + h)[j] - constraint_values(side, c - h)[j]; };
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b)
            break;  // adjacent doubles
        if (slope(m) < 0.0)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

FeasibleDomain feasible_domain(Side side, int grid, double refine_tol)
{
    if (grid < 1000)
        throw std::invalid_argument("feasible_domain needs a grid of at least 1000 points");
    if (!(refine_tol > 0.0))
        throw std::invalid_argument("refine_tol must be positive");

    const Interval dom = admissible_interval(side);
    const double step = dom.length() / grid;
    const auto n = static_cast<std::size_t>(grid);

    std::vector<double> cs(n);
    std::vector<std::array<double, 5>> vals(n);
    std::vector<char> ok(n);
    for (std::size_t k = 0; k < n; ++k) {
        cs[k] = dom.lo + (static_cast<double>(k) + 0.5) * step;
        try {
            vals[k] = constraint_values(side, cs[k]);
        } catch (const std::exception&) {
            vals[k].fill(std::numeric_limits<double>::quiet_NaN());
        }
        ok[k] = all_positive(vals[k]) ? 1 : 0;
    }

    FeasibleDomain out;
    out.side = side;

    struct Run {
        Interval iv;
        std::string lo_name, hi_name;
        std::size_t first, last;
    };
    std::vector<Run> runs;
    for (std::size_t k = 0; k < n;) {
        if (!ok[k]) {
            ++k;
            continue;
        }
        std::size_t last = k;
        while (last + 1 < n && ok[last + 1])
            ++last;
        Run run{{dom.lo, dom.hi}, "admissible", "admissible", k, last};
        if (k > 0) {
            const Boundary bd = refine_boundary(side, cs[k - 1], cs[k], false, refine_tol);
            run.iv.lo = bd.c;
            run.lo_name = bd.constraint;
        }
        if (last + 1 < n) {
            const Boundary bd = refine_boundary(side, cs[last], cs[last + 1], true, refine_tol);
            run.iv.hi = bd.c;
            run.hi_name = bd.constraint;
        }
        runs.push_back(run);
        k = last + 1;
    }

    // Touch points: interior grid minima of a constraint whose refined value
    // is zero to within the touch threshold.
    constexpr double touch_tol = 1e-9;
    struct Touch {
        double c;
        std::vector<std::string> names;
    };
    std::vector<Touch> touches;
    for (const Run& run : runs) {
        for (std::size_t k = run.first + 1; k + 1 <= run.last; ++k) {
            for (std::size_t j = 0; j < 5; ++j) {
                if (!(vals[k][j] < vals[k - 1][j] && vals[k][j] <= vals[k + 1][j]))
                    continue;
                const double c0 = refine_minimum(side, j, cs[k - 1], cs[k + 1], refine_tol * 1e-3);
                if (!(constraint_values(side, c0)[j] <= touch_tol))
                    continue;
                auto same = std::find_if(touches.begin(), touches.end(),
                                         [&](const Touch& t) { return std::abs(t.c - c0) <= 10.0 * step; });
                if (same == touches.end())
                    touches.push_back({c0, {kConstraintNames[j]}});
                else
                    same->names.push_back(kConstraintNames[j]);
            }
        }
    }
    std::sort(touches.begin(), touches.end(), [](const Touch& a, const Touch& b) { return a.c < b.c; });
    for (Touch& t : touches) {
        std::sort(t.names.begin(), t.names.end());
        out.excluded_points.push_back(t.c);
        out.excluded_constraints.push_back(t.names);
    }

    for (const Run& run : runs) {
        Interval cur = run.iv;
        std::string lo_name = run.lo_name;
        for (const Touch& t : touches) {
            if (t.c > cur.lo && t.c < cur.hi) {
                out.intervals.push_back({cur.lo, t.c});
                out.boundary_constraints.push_back(lo_name);
                out.boundary_constraints.emplace_back();
                cur.lo = t.c;
                lo_name.clear();
            }
        }
        out.intervals.push_back(cur);
        out.boundary_constraints.push_back(lo_name);
        out.boundary_constraints.push_back(run.hi_name);
    }
    return out;
}

const char* to_string(Stability s)
{
    switch (s) {
    case Stability::Unstable:
        return "unstable";
    case Stability::Stable:
        return "stable";
    case Stability::Marginal:
        return "marginal";
    }
    return "marginal";
}

Stability classify_multiplier(double multiplier)
{
    const double m = std::abs(multiplier);
    if (m > 1.0 + 1e-6)
        return Stability::Unstable;
    if (m < 1.0 - 1e-6)
        return Stability::Stable;
    return Stability::Marginal;
}

FixedPointResult solve_fixed_point(const std::function<double(double)>& map, Interval bracket,
                                   const SolverOptions& opts)
{
    auto defect = [&](double c) { return map(c) - c; };
    double a = bracket.lo;
    double b = bracket.hi;
    double fa = defect(a);
    double fb = defect(b);
    if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0) || fa == 0.0 || fb == 0.0) {
        if (fa == 0.0 || fb == 0.0) {
            const double c = fa == 0.0 ? a : b;
            const double h = opts.derivative_step;
            const double mult = (map(c + h) - map(c - h)) / (2.0 * h);
            return {c, 0.0, mult, classify_multiplier(mult)};
        }
        throw NoSignChange("R(c) - c keeps one sign on [" + format_real(a) + ", " + format_real(b) + "]");
    }

    for (int it = 0; it < 200 && b - a > opts.tol; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = defect(m);
        if (fm == 0.0) {
            a = b = m;
            fa = fb = 0.0;
            break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    double c = 0.5 * (a + b);
    double residual = std::abs(defect(c));
    if (fb != fa) {
        const double secant = b - fb * (b - a) / (fb - fa);
        if (secant >= a && secant <= b) {
            const double r = std::abs(defect(secant));
            if (r < residual) {
                c = secant;
                residual = r;
            }
        }
    }
    if (!(residual <= opts.residual_tol))
        throw SolverError("bisection converged to c=" + format_real(c) + " with residual " + format_real(residual) +
                          " (bracket straddles a pole?)");

    const double h = opts.derivative_step;
    const double mult = (map(c + h) - map(c - h)) / (2.0 * h);
    return {c, residual, mult, classify_multiplier(mult)};
}

FixedPointResult find_fixed_point(Side side, Interval bracket, double tol)
{
    SolverOptions opts;
    opts.tol = tol;
    auto map = [side](double c) { return renorm_map(side, c); };
    try {
        return solve_fixed_point(map, bracket, opts);
    } catch (const std::exception&) {
    }
    // A whole feasible component may end at a pole of R, where the end values
    // say nothing. Look for a crossing inside instead; a sign flip across a
    // pole fails the residual test and is skipped.
    constexpr int kScan = 2000;
    auto defect = [&](double c) {
        try {
            return map(c) - c;
        } catch (const DegenerateRatio&) {
            return std::nan("");
        }
    };
    double prev_c = bracket.lo;
    double prev = defect(prev_c);
    for (int i = 1; i <= kScan; ++i) {
        const double c = bracket.lo + bracket.length() * i / kScan;
        const double v = defect(c);
        if (std::isfinite(prev) && std::isfinite(v) && (prev < 0.0) != (v < 0.0)) {
            try {
                return solve_fixed_point(map, {prev_c, c}, opts);
            } catch (const SolverError&) {
            }
        }
        prev_c = c;
        prev = v;
    }
    throw NoSignChange("R(c) - c has no crossing on [" + format_real(bracket.lo) + ", " + format_real(bracket.hi) +
                       "]");
}

FixedPointResult unperturbed_fixed_point(Side side, double tol)
{
    const FeasibleDomain fd = feasible_domain(side, 10000, 1e-11);
    for (const Interval& iv : fd.intervals) {
        // stay clear of the pole at a split point
        const double pad = 1e-4 * iv.length();
        try {
            return find_fixed_point(side, {iv.lo + pad, iv.hi - pad}, tol);
        } catch (const NoSignChange&) {
        }
    }
    throw NoSignChange(std::string("no feasible component of the ") + to_string(side) + " domain holds a fixed point");
}

namespace {

void check_window(double epsilon, const PerturbationConfig& cfg)
{
    if (!(epsilon > 0.0) || !cfg.window.contains(epsilon))
        throw ParameterError("epsilon=" + format_real(epsilon) + " outside the configured window [" +
                             format_real(cfg.window.lo) + ", " + format_real(cfg.window.hi) + "]");
}

struct PerturbedOrbit {
    std::array<double, 6> b;
    double len;
    double moved;        // epsilon * b^4
    double moved_image;  // B_c(epsilon * b^4)
};

PerturbedOrbit perturbed_orbit(Side side, double c, double epsilon)
{
    const BimodalMap map(c, side);
    const auto [b, len] = anchor_data(side, c);
    const double moved = epsilon * b[4];
    return {b, len, moved, map(moved)};
}

}  // namespace

ScalingTriple perturbed_ratios(Side side, double c, double epsilon, const PerturbationConfig& cfg)
{
    return perturbed_geometry(side, c, epsilon, cfg).s;
}

LevelGeometry perturbed_geometry(Side side, double c, double epsilon, const PerturbationConfig& cfg)
{
    check_window(epsilon, cfg);
    const auto [b, len, moved, image] = perturbed_orbit(side, c, epsilon);
    if (side == Side::Left)
        return {{(b[1] - moved) / len, (b[2] - image) / len, b[3] / len},
                {(moved - b[2]) / len, (image - b[3]) / len}};
    return {{(moved - b[1]) / len, (image - b[2]) / len, (1.0 - b[3]) / len},
            {(b[2] - moved) / len, (b[3] - image) / len}};
}

double perturbed_renorm_map(Side side, double c, double epsilon, const PerturbationConfig& cfg)
{
    const ScalingTriple s = perturbed_ratios(side, c, epsilon, cfg);
    if (s.s1 == 0.0)
        throw DegenerateRatio("perturbed s1 vanishes at c=" + format_real(c));
    const double b2 = BimodalMap(c, side).anchor_orbit()[2];
    const double r = side == Side::Left ? (b2 - c) / s.s1 : 1.0 - (c - b2) / s.s1;
    if (!std::isfinite(r))
        throw DegenerateRatio("perturbed induced map is not finite at c=" + format_real(c));
    return r;
}

FixedPointResult find_perturbed_fixed_point(Side side, double epsilon, const PerturbationConfig& cfg)
{
    check_window(epsilon, cfg);
    const FixedPointResult base = unperturbed_fixed_point(side, cfg.tol);
    if (epsilon == 1.0)
        return base;

    SolverOptions opts;
    opts.tol = cfg.tol;
    opts.residual_tol = cfg.residual_tol;
    const Interval dom = admissible_interval(side);
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(epsilon - 1.0) / cfg.continuation_step)));

    double c_prev = base.c_star;
    FixedPointResult current = base;
    for (int k = 1; k <= steps; ++k) {
        const double e = k == steps ? epsilon : 1.0 + (epsilon - 1.0) * k / steps;
        auto map = [&](double c) { return perturbed_renorm_map(side, c, e, cfg); };
        bool found = false;
        for (double r = std::min(1e-6, cfg.bracket_radius);; r = std::min(2.0 * r, cfg.bracket_radius)) {
            const Interval bracket{std::max(c_prev - r, dom.lo + 1e-12), std::min(c_prev + r, dom.hi - 1e-12)};
            try {
                current = solve_fixed_point(map, bracket, opts);
                found = true;
            } catch (const std::exception&) {
                // no sign change yet, a pole, or a degenerate evaluation: widen
            }
            if (found || r >= cfg.bracket_radius)
                break;
        }
        if (!found)
            throw NoSignChange("fixed point lost at epsilon=" + format_real(e) + " (last c*=" + format_real(c_prev) +
                               ", bracket radius " + format_real(cfg.bracket_radius) + ")");
        c_prev = current.c_star;
    }
    return current;
}

ContinuumSweep continuum_sweep(Side side, const std::vector<double>& epsilons, const PerturbationConfig& cfg)
{
    ContinuumSweep out;
    out.side = side;
    for (double e : epsilons) {
        try {
            const FixedPointResult fp = find_perturbed_fixed_point(side, e, cfg);
            const LevelGeometry geo = perturbed_geometry(side, fp.c_star, e, cfg);
            out.points.push_back({e, fp.c_star, geo.s, geo.g, fp});
        } catch (const std::exception& ex) {
            out.failures.push_back({e, ex.what()});
        }
    }

    std::vector<ContinuumPoint> sorted = out.points;
    std::sort(sorted.begin(), sorted.end(),
              [](const ContinuumPoint& a, const ContinuumPoint& b) { return a.epsilon < b.epsilon; });
    bool up = true;
    bool down = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        up = up && sorted[i].c_star > sorted[i - 1].c_star;
        down = down && sorted[i].c_star < sorted[i - 1].c_star;
    }
    out.monotone = up || down;
    return out;
}

}  // namespace renormlab
