#pragma once

#include <string>
#include <vector>

#include "renormlab/affine.hpp"
#include "renormlab/scaling.hpp"

namespace renormlab {

struct LevelMaps {
    AffineMap1D F0;
    AffineMap1D F1;
    AffineMap1D F2;

    const AffineMap1D& operator[](int i) const { return i == 0 ? F0 : (i == 1 ? F1 : F2); }
};

/// The three affine maps of one level, acting on the base interval. The gap
/// ratios are needed because F1's offset is fixed by I_0 and the gap g0.
LevelMaps induced_affine_maps(Side side, const LevelGeometry& geo, const Interval& base);

/// Scaling data s(1), s(2), ... on a common base interval. The stored levels
/// repeat periodically, so one entry is stationary data.
class ScalingData {
public:
    ScalingData(Side side, Interval base, std::vector<LevelGeometry> levels);

    /// Stationary data at the fixed point of the induced map.
    static ScalingData stationary(Side side, double c_star);

    Side side() const { return side_; }
    const Interval& base() const { return base_; }
    std::size_t period() const { return levels_.size(); }

    /// Geometry of level n >= 1.
    const LevelGeometry& at(int n) const;
    LevelMaps maps(int n) const { return induced_affine_maps(side_, at(n), base_); }

    /// Fixed point of the first-level F1 (c* for stationary data). Branch
    /// tables are composed in coordinates relative to it, which keeps the
    /// rounding of long compositions small on both sides.
    double origin() const { return origin_; }
    Interval local_base() const { return {base_.lo - origin_, base_.hi - origin_}; }
    LevelMaps local_maps(int n) const { return induced_affine_maps(side_, at(n), local_base()); }

    /// sigma(s): drops the first level.
    ScalingData shifted(int k = 1) const;

    bool proper(double margin) const;

private:
    Side side_;
    Interval base_;
    std::vector<LevelGeometry> levels_;
    double origin_ = 0.0;
};

struct TowerLevel {
    int n = 0;
    std::array<Interval, 3> I;  // I_0^n, I_1^n, I_2^n
    /// the same intervals relative to the data origin; lengths and gaps taken
    /// here keep full relative precision at deep levels
    std::array<Interval, 3> local;
    AffineMap1D zoom;           // h_n = F1(1) o ... o F1(n)
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 0.0;
};

struct IntervalTower {
    Side side = Side::Left;
    int depth = 0;
    Interval base;
    /// levels[0] is the base level (I_1^0 = base), levels[n] is level n.
    std::vector<TowerLevel> levels;

    const TowerLevel& level(int n) const { return levels.at(static_cast<std::size_t>(n)); }
};

IntervalTower build_tower(const ScalingData& data, int depth, double proper_margin = 1e-4);

struct Branch {
    Interval domain;
    AffineMap1D map;
    int level = 1;
    int kind = 0;  // 0 or 2

    Interval image() const { return map.image(domain); }
};

/// f_s on the truncated domain: the union over levels n <= depth of I_0^n and
/// I_2^n, one affine branch each.
class PiecewiseAffineMap {
public:
    /// local_branches are in coordinates relative to data.origin().
    PiecewiseAffineMap(ScalingData data, int depth, std::vector<Branch> local_branches);

    const ScalingData& data() const { return data_; }
    Side side() const { return data_.side(); }
    int depth() const { return depth_; }
    double origin() const { return data_.origin(); }

    /// Branches in absolute coordinates, sorted by domain.
    const std::vector<Branch>& branches() const { return branches_; }
    const std::vector<Branch>& local_branches() const { return local_; }

    /// Branch whose domain contains x (with a relative slack), or nullptr.
    const Branch* find(double x) const;
    /// Branch whose domain contains the whole interval, or nullptr.
    const Branch* find(const Interval& iv) const;
    const Branch& branch(int level, int kind) const;

    /// Same lookups on the local table.
    const Branch* find_local(double u) const;
    const Branch* find_local(const Interval& iv) const;
    const Branch& local_branch(int level, int kind) const;

    double operator()(double x) const;
    bool in_domain(double x) const { return find(x) != nullptr; }

private:
    ScalingData data_;
    int depth_;
    std::vector<Branch> local_;
    std::vector<Branch> branches_;
};

/// Re-expresses a branch given in coordinates relative to `from` in
/// coordinates relative to `to`.
Branch translate_branch(const Branch& b, double from, double to);

class DepthExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

PiecewiseAffineMap build_fs(const ScalingData& data, int depth);

/// Stationary fixed-point map; checks that c_star is a fixed point of the
/// induced map to residual_tol.
PiecewiseAffineMap build_fs(Side side, double c_star, int depth, double residual_tol = 1e-10);

/// h_1^{-1} o f^3 o h_1, computed on branches; depth drops by one.
PiecewiseAffineMap renormalize(const PiecewiseAffineMap& f);

/// h_n^{-1} o f^{3^n} o h_n in one step (n <= 8).
PiecewiseAffineMap zoom(const PiecewiseAffineMap& f, int n);

/// Max over matched branches of the differences in domain endpoints,
/// intercepts and slopes. Infinite if the branch tables do not match.
double branch_distance(const PiecewiseAffineMap& a, const PiecewiseAffineMap& b);

struct RenormalizabilityClause {
    std::string name;
    Interval domain;           // computed maximal affine domain
    Interval image;            // its image under the iterate
    Interval expected_domain;  // from the labeled points
    Interval expected_image;   // I_1^n
    double error = 0.0;
    bool pass = false;
};

struct RenormalizabilityReport {
    int n = 0;
    std::vector<RenormalizabilityClause> clauses;
    bool pass = true;
    std::string note;
};

/// Checks, for level n, the two clauses of the definition of infinite
/// renormalizability. Needs n <= depth - 1 and n <= 8.
RenormalizabilityReport verify_infinite_renormalizability(const PiecewiseAffineMap& f, const IntervalTower& tower,
                                                          int n, double tol = 1e-9);

}  // namespace renormlab
