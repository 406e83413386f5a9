#pragma once

#include <array>
#include <span>
#include <vector>

#include "meshsizer/geometry2d.hpp"

namespace meshsizer {

/// Clamped NURBS curve over the parameter interval [0, 1].
struct NurbsCurve {
    int degree = 0;
    std::vector<double> knots;
    std::vector<Vec2> control_points;
    std::vector<double> weights;

    int cp_count() const { return static_cast<int>(control_points.size()); }
};

/// Throws UsageError if the knot count, clamping, ordering, or weights are
/// inconsistent (knot count must equal cp_count + degree + 1).
void validate_curve(const NurbsCurve& curve);

/// All B-spline basis values at lambda, one per control point. Values are
/// non-negative and sum to one on the clamped knot vector; lambda = 1 is
/// evaluated in the last non-vanishing span.
std::vector<double> eval_basis(const NurbsCurve& curve, double lambda);

/// order 0: point on the curve. order 1: first derivative.
Vec2 eval_curve(const NurbsCurve& curve, double lambda, int order = 0);

struct InversionResult {
    double lambda = 0.0;
    double residual = 0.0;
};

/// Parameter minimizing the distance to the point: Newton on the
/// squared-distance stationarity condition, seeded from 64 uniform samples,
/// with a dense-sampling golden-section fallback.
InversionResult invert_point(const NurbsCurve& curve, const Vec2& point);

/// Two cubic clamped B-spline curves (upper, lower) sharing the leading and
/// trailing edge; the second lower control point enforces a G1 join at the
/// leading edge via the theta parameter.
struct AerofoilGeometry {
    NurbsCurve upper;
    NurbsCurve lower;
    /// 22 control-point offsets followed by theta.
    std::array<double, 23> params{};
};

/// Base control points of the undeformed aerofoil.
std::span<const Vec2, 8> aerofoil_base_upper();
std::span<const Vec2, 8> aerofoil_base_lower();

/// Symmetric half-ranges for the 22 free offsets, in the canonical order:
/// upper dX (cp 1..6), upper dY (cp 1..6), lower dX (cp 2..6),
/// lower dY (cp 2..6).
std::span<const double, 22> aerofoil_offset_ranges();

/// offsets22 ordered as in aerofoil_offset_ranges(); theta in [0.5, 1.5].
AerofoilGeometry build_aerofoil(std::span<const double> offsets22, double theta);

inline AerofoilGeometry base_aerofoil() {
    const std::array<double, 22> zero{};
    return build_aerofoil(zero, 1.0);
}

}  // namespace meshsizer
