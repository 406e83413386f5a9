#pragma once

#include <array>
#include <optional>

#include "meshsizer/mesh.hpp"
#include "meshsizer/nurbs.hpp"

namespace meshsizer {

/// Analytic flow-like fields: smooth base bump, tanh shock band and a
/// Gaussian wake deficit over a boundary-layer profile.
struct SyntheticFieldParams {
    double p_base = 1.0;
    double bump_amplitude = 0.08;
    Vec2 bump_center{0.6, 0.45};
    double bump_radius = 0.35;

    double shock_amplitude = 0.25;
    double shock_position = 0.9;  ///< x location of the tanh band
    double shock_width = 0.05;
    double shock_height = 0.5;  ///< decay length away from the wall

    double mach_base = 0.7;
    double wake_deficit = 0.4;
    double wake_angle_deg = 0.0;
    double wake_width = 0.06;
    Vec2 wake_origin{0.6, 0.3};
    double bl_thickness = 0.0;  ///< 0: derived from the inflation-layer height
};

/// Desk-scale stand-in for solver output: either a flat-wall box or an
/// O-type annulus around an aerofoil, with a quadrilateral inflation layer
/// grown geometrically from h1 = C Re^(-3/4).
struct SyntheticCase {
    enum class Kind { box, aerofoil };
    Kind kind = Kind::box;

    std::array<double, 4> box{0.0, 0.0, 2.0, 1.0};  ///< x0, y0, x1, y1
    int nx = 48;            ///< node columns - 1 (box) ; ignored for aerofoil
    double spacing = 0.05;  ///< isotropic target spacing away from the wall

    double reynolds = 6.5e6;
    double c_first = 1.0;  ///< C in h1 = C Re^(-3/4)
    double growth = 1.2;   ///< G, layer height ratio
    int max_layers = 60;

    std::optional<AerofoilGeometry> geometry;  ///< aerofoil mode; defaults to the base aerofoil
    int wall_segments = 64;                    ///< ring node count (aerofoil mode, even)
    double farfield_offset = 3.0;              ///< far-field circle radius about mid-chord

    SyntheticFieldParams fields;
};

struct SyntheticResult {
    HybridMesh mesh;
    NodalField pressure;
    NodalField mach;
    double first_layer_height = 0.0;
    double inflation_height = 0.0;  ///< total height of the quad band
};

SyntheticResult synthesize_case(const SyntheticCase& descriptor);

}  // namespace meshsizer
