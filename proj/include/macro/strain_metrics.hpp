#pragma once

#include <array>
#include <span>
#include <vector>

#include "macro/geometry.hpp"

namespace macro {

/// origin + s * side_a + t * side_b for s, t in [0, 1]; cross(side_a, side_b) > 0.
struct Parallelogram {
    Vec2 origin;
    Vec2 side_a;
    Vec2 side_b;

    double area() const { return std::fabs(cross(side_a, side_b)); }
    double perimeter() const { return 2.0 * (norm(side_a) + norm(side_b)); }
    std::array<Vec2, 4> corners() const;

    /// Smallest distance from `p` to the interior; negative when `p` lies outside.
    double signed_inset(Vec2 p) const;
};

/// Bulk strains and their ratios to the applied actuator strain.
struct StrainSummary {
    double eps_x = 0.0;
    double eps_y = 0.0;
    double shear_alpha = 0.0;
    double ratio_x = 0.0;
    double ratio_y = 0.0;
    double ratio_shear = 0.0;

    static StrainSummary from_strains(double eps_x, double eps_y, double shear_alpha, double eps_a);
};

StrainSummary operator+(const StrainSummary& a, const StrainSummary& b);

/// Counter-clockwise convex hull without collinear points (Andrew's monotone chain).
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Minimal-area parallelogram containing every point. Both side directions are
/// taken from hull edge directions; ties go to the smaller perimeter, then to
/// the side_a direction closest to +X. The result is canonical: side_a is the
/// side closest to +X (mod 180 degrees) pointing rightwards.
Parallelogram min_enclosing_parallelogram(std::span<const Vec2> points);

/// Re-express a parallelogram in canonical side order and orientation.
Parallelogram canonicalize(const Parallelogram& p);

/// Engineering strains of the linear map taking (a, b) onto (a', b').
StrainSummary strain_from_parallelograms(const Parallelogram& undeformed, const Parallelogram& deformed,
                                         double eps_a);

/// Strains of the least-squares affine map points0 -> points1.
StrainSummary affine_fit_strain(std::span<const Vec2> points0, std::span<const Vec2> points1, double eps_a);

} // namespace macro
