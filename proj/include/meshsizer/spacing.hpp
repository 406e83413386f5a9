#pragma once

#include <optional>
#include <vector>

#include "meshsizer/mesh.hpp"

namespace meshsizer {

enum class RecoveryStrategy {
    fv_dual,    ///< vertex-centred finite-volume gradient on the median dual
    fe_hybrid,  ///< area-weighted element-barycentre average on the hybrid mesh
    fe_split,   ///< same, after splitting quadrilaterals into triangles
};

enum class KeyVariable { smoothed_pressure, pressure, mach };

struct SpacingConfig {
    double scaling = 0.2;  ///< S in (0,1]
    RecoveryStrategy strategy = RecoveryStrategy::fe_split;
    std::vector<KeyVariable> key_variables = {KeyVariable::smoothed_pressure,
                                              KeyVariable::mach};
    /// When set, pressure smoothing is also applied to chains of highly
    /// stretched triangles downstream of this point (the wake region).
    std::optional<Vec2> wake_origin;
    double wake_aspect_threshold = 20.0;
};

struct SymMatrix2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

/// Largest-magnitude eigenvalue, by the closed form for symmetric 2x2.
double max_abs_eigenvalue(const SymMatrix2& m);

struct NodalHessian {
    std::vector<SymMatrix2> values;
    int size() const { return static_cast<int>(values.size()); }
};

struct PrimitiveFields {
    NodalField pressure;
    NodalField mach;
};

/// p = (gamma-1) rho (E - |v|^2/2); M = |v| / sqrt(gamma p / rho).
PrimitiveFields derive_primitives(const NodalField& rho, const NodalField& rho_u,
                                  const NodalField& rho_v, const NodalField& rho_e,
                                  const GasModel& gas);

/// Nodal gradient approximation; exact for globally linear fields for every
/// strategy.
std::vector<Vec2> recover_gradient(const HybridMesh& mesh, const NodalField& field,
                                   RecoveryStrategy strategy);

/// Gradient of the recovered gradient components, symmetrized.
NodalHessian recover_hessian(const HybridMesh& mesh, const NodalField& field,
                             RecoveryStrategy strategy);

/// Eigenvalue sizing: delta_i = clamp(S delta_min sqrt(lambda_max/lambda_i)).
/// When active is non-null, only flagged nodes participate in the global
/// eigenvalue maximum and receive computed values; the rest hold the
/// delta_max sentinel.
SpacingField spacing_from_hessian(const NodalHessian& hessian,
                                  std::pair<double, double> bounds, double scaling,
                                  const std::vector<char>* active = nullptr);

/// Nodewise minimum; inputs must share length and clamp bounds.
SpacingField combine_spacings(const SpacingField& a, const SpacingField& b);

/// Replaces the field along each node chain by the cubic satisfying:
/// value at the first node, zero slope there, value at the second-to-last
/// node, and the one-sided slope towards the last node. The last node keeps
/// its value; chains shorter than 3 nodes are left untouched.
NodalField smooth_along_chains(const HybridMesh& mesh, const NodalField& field,
                               const std::vector<std::vector<int>>& chains);

/// Cubic smoothing along the wall-normal inflation columns.
NodalField smooth_pressure_columns(const HybridMesh& mesh, const NodalField& pressure);

/// Chains of nodes across highly stretched triangles downstream of the wake
/// origin (aspect ratio above the threshold), assembled from their shortest
/// edges. Each chain starts at the end nearest the wake centreline.
std::vector<std::vector<int>> stretched_wake_chains(const HybridMesh& mesh, const Vec2& origin,
                                                    double aspect_threshold);

/// Constant extension of the outermost column value down each inflation
/// column; values on triangle nodes are untouched.
SpacingField extend_mach_spacing(const HybridMesh& mesh, const SpacingField& spacing);

/// Full target-spacing pipeline for one solution.
SpacingField compute_target_spacing(const HybridMesh& mesh, const NodalField& pressure,
                                    const NodalField& mach, const SpacingConfig& config);

}  // namespace meshsizer
