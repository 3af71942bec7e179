#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "renormlab/bimodal.hpp"

namespace renormlab {

/// A point (s0, s1, s2) that should lie in the open simplex. Raw values are
/// kept even when outside so scans can see the sign changes.
struct ScalingTriple {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;

    double sum() const { return s0 + s1 + s2; }
    bool in_simplex() const { return s0 > 0.0 && s1 > 0.0 && s2 > 0.0 && sum() < 1.0; }
    /// Euclidean distance to the simplex boundary (negative outside).
    double boundary_distance() const;
    bool is_proper(double margin = 1e-4) const { return in_simplex() && boundary_distance() >= margin; }
};

struct GapPair {
    double g0 = 0.0;  // between I_0 and I_1
    double g1 = 0.0;  // between I_1 and I_2

    bool positive() const { return g0 > 0.0 && g1 > 0.0; }
};

/// Relative lengths of the five pieces of the base interval at one level:
/// I_2, gap g1, I_1, gap g0, I_0 (left orientation; mirrored on the right).
struct LevelGeometry {
    ScalingTriple s;
    GapPair g;
};

class DegenerateRatio : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoSignChange : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ScalingTriple scaling_ratios(Side side, double c);
GapPair gap_ratios(Side side, double c);
LevelGeometry level_geometry(Side side, double c);

/// Induced map on the critical-point parameter.
double renorm_map(Side side, double c);

inline constexpr std::array<const char*, 5> kConstraintNames{"s0", "s1", "s2", "g0", "g1"};

/// (s0, s1, s2, g0, g1) at c; c is feasible iff all five are positive.
std::array<double, 5> constraint_values(Side side, double c);

struct FeasibleDomain {
    Side side = Side::Left;
    std::vector<Interval> intervals;
    /// Interior points where a constraint touches zero without changing sign.
    std::vector<double> excluded_points;
    /// Names of the constraints that vanish at each excluded point.
    std::vector<std::vector<std::string>> excluded_constraints;
    /// For every interval endpoint (lo, hi per interval) the constraint that
    /// changes sign there; empty for splits at excluded points.
    std::vector<std::string> boundary_constraints;

    /// Sorted distinct endpoints; a split point is listed once.
    std::vector<double> endpoints() const;
};

FeasibleDomain feasible_domain(Side side, int grid, double refine_tol);

enum class Stability { Unstable, Stable, Marginal };
const char* to_string(Stability s);

struct FixedPointResult {
    double c_star = 0.0;
    double residual = 0.0;
    double multiplier = 0.0;
    Stability stability = Stability::Marginal;
};

Stability classify_multiplier(double multiplier);

struct SolverOptions {
    double tol = 1e-12;           // bracket width at which bisection stops
    double residual_tol = 1e-10;  // accepted |F(c) - c|
    double derivative_step = 1e-6;
};

/// Bracketed bisection on F(c) - c with a secant polish.
FixedPointResult solve_fixed_point(const std::function<double(double)>& map, Interval bracket,
                                   const SolverOptions& opts);

/// Fixed point of R in the bracket. When the ends do not straddle one (a
/// feasible component ending at a pole of R), the bracket is scanned.
FixedPointResult find_fixed_point(Side side, Interval bracket, double tol);

/// Locates the unique fixed point of the unperturbed induced map by scanning
/// the feasible components (grid 10^4).
FixedPointResult unperturbed_fixed_point(Side side, double tol = 1e-12);

struct PerturbationConfig {
    Interval window{0.98, 1.02};
    double bracket_radius = 0.002;
    double continuation_step = 0.0025;
    double tol = 1e-12;
    double residual_tol = 1e-10;
};

ScalingTriple perturbed_ratios(Side side, double c, double epsilon, const PerturbationConfig& cfg = {});
LevelGeometry perturbed_geometry(Side side, double c, double epsilon, const PerturbationConfig& cfg = {});
double perturbed_renorm_map(Side side, double c, double epsilon, const PerturbationConfig& cfg = {});

/// Continues the fixed point from epsilon = 1 to the requested epsilon.
FixedPointResult find_perturbed_fixed_point(Side side, double epsilon, const PerturbationConfig& cfg = {});

struct ContinuumPoint {
    double epsilon = 1.0;
    double c_star = 0.0;
    ScalingTriple triple;
    GapPair gaps;
    FixedPointResult fixed_point;
};

struct ContinuumFailure {
    double epsilon = 1.0;
    std::string reason;
};

struct ContinuumSweep {
    Side side = Side::Left;
    std::vector<ContinuumPoint> points;
    std::vector<ContinuumFailure> failures;
    /// Whether epsilon -> c*_epsilon is strictly monotone over the converged points.
    bool monotone = true;
};

ContinuumSweep continuum_sweep(Side side, const std::vector<double>& epsilons, const PerturbationConfig& cfg = {});

}  // namespace renormlab
