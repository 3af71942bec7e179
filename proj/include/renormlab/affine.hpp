#pragma once

#include "renormlab/bimodal.hpp"

namespace renormlab {

/// t -> intercept + slope * t
struct AffineMap1D {
    double intercept = 0.0;
    double slope = 1.0;

    static AffineMap1D identity() { return {0.0, 1.0}; }

    /// The affine map sending a0 -> b0 and a1 -> b1.
    static AffineMap1D through(double a0, double b0, double a1, double b1)
    {
        const double slope = (b1 - b0) / (a1 - a0);
        return {b0 - slope * a0, slope};
    }

    double operator()(double t) const { return intercept + slope * t; }

    Interval image(const Interval& in) const { return Interval::hull((*this)(in.lo), (*this)(in.hi)); }

    AffineMap1D inverse() const { return {-intercept / slope, 1.0 / slope}; }

    /// (*this) o inner
    AffineMap1D after(const AffineMap1D& inner) const
    {
        return {intercept + slope * inner.intercept, slope * inner.slope};
    }

    /// Unique fixed point; requires slope != 1.
    double fixed_point() const { return intercept / (1.0 - slope); }
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Componentwise plane map (x, y) -> (x_part(x), y_part(y)).
struct PlaneAffineMap {
    AffineMap1D x_part;
    AffineMap1D y_part;

    Point operator()(Point p) const { return {x_part(p.x), y_part(p.y)}; }
    PlaneAffineMap inverse() const { return {x_part.inverse(), y_part.inverse()}; }
    PlaneAffineMap after(const PlaneAffineMap& inner) const
    {
        return {x_part.after(inner.x_part), y_part.after(inner.y_part)};
    }
    PlaneAffineMap power(int n) const
    {
        PlaneAffineMap out{AffineMap1D::identity(), AffineMap1D::identity()};
        for (int i = 0; i < n; ++i)
            out = after(out);
        return out;
    }
};

}  // namespace renormlab
