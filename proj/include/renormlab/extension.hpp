#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "renormlab/affine.hpp"
#include "renormlab/tower.hpp"

namespace renormlab {

/// Cubic on `domain` in the local variable t = x - domain.lo.
struct CubicPiece {
    Interval domain;
    std::array<double, 4> c{};
    bool affine = false;
    /// domain length, carried along so that deep pieces keep their relative
    /// precision (hi - lo loses it far from 0)
    double span = 0.0;

    double at_offset(double t) const { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); }
    double slope_at_offset(double t) const { return c[1] + t * (2.0 * c[2] + t * 3.0 * c[3]); }
    double second_at_offset(double t) const { return 2.0 * c[2] + 6.0 * c[3] * t; }

    double value(double x) const { return at_offset(x - domain.lo); }
    double slope(double x) const { return slope_at_offset(x - domain.lo); }

    /// max |p''| on the domain (p'' is linear, so an endpoint)
    double lipschitz() const;
    /// max |p'| on the domain
    double max_slope() const;

    static CubicPiece from_affine(const Interval& domain, const AffineMap1D& map);
    /// Unique cubic with the given end values and slopes.
    static CubicPiece hermite(double x0, double y0, double m0, double x1, double y1, double m1);
};

/// Image of a piece under a componentwise plane map; the coefficients are
/// Taylor-shifted when the x-part reverses orientation.
CubicPiece transform(const CubicPiece& p, const PlaneAffineMap& S);

/// Image of a piece under (x, y) -> (1 - x, 1 - y).
CubicPiece mirror(const CubicPiece& p);

struct GraphSegment {
    int n = 1;           // G^n
    int generation = 0;  // S-power that produced it
    Interval domain;
    std::vector<CubicPiece> pieces;  // sorted, tiling the domain
    double slope_lo = 0.0;
    double slope_hi = 0.0;

    double lipschitz() const;
    double max_slope() const;
    const CubicPiece* find(double x) const;
};

GraphSegment transform(const GraphSegment& g, const PlaneAffineMap& S);
GraphSegment mirror(const GraphSegment& g);

/// How a gap between two affine branches is filled. Amplitude 0 is the plain
/// cubic Hermite join; otherwise the gap is split at its midpoint and the
/// value there is raised by amplitude * (rise across the gap).
struct GapPolicy {
    double amplitude = 0.0;
};

std::vector<CubicPiece> fill_gap(double x0, double y0, double m0, double x1, double y1, double m1,
                                 const GapPolicy& policy = {});

struct SeedPair {
    GraphSegment first;   // G^1
    GraphSegment second;  // G^2
};

class ExtensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// G^1 over hull(y_1, z_0) and G^2 over hull(y_0, z_1), extending the level-1
/// branches of f across the gaps next to them.
SeedPair seed_segments(Side side, const PiecewiseAffineMap& f, const GapPolicy& policy = {});

/// The pair of scaling maps (F1, F2) of the first level.
PlaneAffineMap scaling_map(const ScalingData& data);

/// Throws ExtensionError unless s2 < s1 < 1 for the map's data.
void check_contraction(const PlaneAffineMap& S);

struct Junction {
    double x = 0.0;
    int left_n = 0;
    int right_n = 0;
    int generation = 0;
    double slope_left = 0.0;   // one-sided finite differences
    double slope_right = 0.0;
    double mismatch = 0.0;
};

struct Box {
    int generation = 0;
    Interval x;
    Interval y;
};

class ExtensionGraph {
public:
    Side side = Side::Left;
    PlaneAffineMap S;
    Interval base;
    double c_star = 0.0;
    double critical_value = 0.0;  // limit of the boxes
    std::vector<GraphSegment> segments;  // sorted by domain
    std::vector<Box> boxes;
    std::vector<Junction> junctions;
    /// max |g''| over G^{2k+1} and G^{2k+2}, indexed by generation k
    std::vector<double> lipschitz_ledger;
    /// max |g'| over generation k
    std::vector<double> slope_ledger;
    /// open x-interval around c_star left uncovered by the finite depth
    Interval hole;

    double eval(double x) const;
    double derivative(double x) const;
    const GraphSegment& segment(int n) const;
    int depth() const { return static_cast<int>(lipschitz_ledger.size()) - 1; }

private:
    const CubicPiece* locate(double x) const;
};

/// Seed used for generation k (0-based).
using SeedSource = std::function<SeedPair(int)>;

/// G^{2k+1} = S^k(G^1), G^{2k+2} = S^k(G^2) for k = 0..depth.
ExtensionGraph iterate_extension(const SeedPair& seed, const PlaneAffineMap& S, int depth, Side side,
                                 const Interval& base);
ExtensionGraph iterate_extension(const SeedSource& seeds, const PlaneAffineMap& S, int depth, Side side,
                                 const Interval& base);

/// Whole pipeline for one side at the stationary data.
ExtensionGraph build_extension(Side side, double c_star, int depth, int fs_depth = 4);

/// sup over branch sample points of |g - f|
double extension_error(const ExtensionGraph& g, const PiecewiseAffineMap& f, int samples_per_branch = 5);

double max_junction_mismatch(const ExtensionGraph& g);

/// Empirical sup of |g'(u) - g'(v)| / |u - v| over random pairs with
/// |u - v| >= min_scale.
double empirical_lipschitz(const std::function<double(double)>& derivative, const Interval& domain, int pairs,
                           double min_scale, std::uint64_t seed);

class JoinedMap {
public:
    ExtensionGraph left;
    ExtensionGraph right;
    CubicPiece middle;

    double operator()(double x) const;
    double derivative(double x) const;
    double middle_lipschitz() const { return middle.lipschitz(); }
};

JoinedMap join_bimodal(ExtensionGraph g_left, ExtensionGraph g_right);

struct ShapeReport {
    bool pass = false;
    int laps = 0;
    std::string detail;
};

/// Down-up-down on a uniform grid, by the signs of successive differences.
ShapeReport check_shape(const JoinedMap& m, int grid);

/// max |m(1 - x) - (1 - m(x))| on a uniform grid
double mirror_error(const JoinedMap& m, int grid);

/// Per side: h^{-1} o g^3 o h compared with g on a uniform grid of the base.
double self_reproduction_error(const JoinedMap& m, int grid);

/// One side of h^{-1} o g^3 o h at x.
double renormalized_value(const JoinedMap& m, Side side, double x);

}  // namespace renormlab
