#pragma once

#include <string>

#include "meshsizer/evaluation.hpp"
#include "meshsizer/io.hpp"
#include "meshsizer/morph.hpp"
#include "meshsizer/neural.hpp"
#include "meshsizer/sampling.hpp"
#include "meshsizer/spacing.hpp"
#include "meshsizer/synthetic.hpp"
#include "meshsizer/transfer.hpp"

namespace meshsizer {

// Config/JSON adapters for the pieces the CLI wires together.
SpacingConfig spacing_config_from_json(const json& j);
TrainConfig train_config_from_json(const json& j);
SyntheticCase synthetic_from_json(const json& j);
DesignSpace design_space_from_json(const json& j);
json design_space_to_json(const DesignSpace& space);

json geometry_to_json(const AerofoilGeometry& geom);
AerofoilGeometry geometry_from_json(const json& j);
AerofoilGeometry load_geometry(const std::string& path);
void save_geometry(const AerofoilGeometry& geom, const std::string& path);

/// Parameter spaces of the built-in synthetic families.
///  - "flow2": shock-position/wake-angle analog of varying flow conditions,
///    2 parameters.
///  - "geo23": the 23-parameter aerofoil family (22 offsets + theta).
DesignSpace family_space(const std::string& family);

/// Applies one family parameter vector to the base synthetic descriptor.
SyntheticCase apply_family(const SyntheticCase& base, const std::string& family,
                           std::span<const double> params);

/// A complete training dataset over a shared background mesh.
struct Dataset {
    std::string family;
    HybridMesh background;
    DesignSpace space;
    SplitData train;
    SplitData validation;
    SplitData test;
    double delta_min = 0.0;
    double delta_max = 0.0;
};

json dataset_to_json(const Dataset& ds, const json& provenance = json::object());
Dataset dataset_from_json(const json& j);

struct DatasetBuildOptions {
    std::string family = "flow2";
    SyntheticCase base;          ///< per-case descriptor before family mapping
    SyntheticCase background;    ///< coarse descriptor for the background mesh
    SpacingConfig spacing;
    int n_train = 20;
    int n_validation = 5;
    int n_test = 80;
    bool scrambled = false;
    std::uint64_t seed = 0;
};

/// Runs synthesize -> target spacing -> (morph) -> transfer for every case.
Dataset build_dataset(const DatasetBuildOptions& options);

/// One grid-search cell result.
struct GridCell {
    int layers = 0;
    int neurons = 0;
    double test_r2 = 0.0;
    double validation_cost = 0.0;
};

/// R^2 between raw spacing matrices, evaluated in log10 space.
double spacing_r_squared(const Eigen::MatrixXd& target, const Eigen::MatrixXd& predicted);

/// Predicts every row of the split and stacks the clamped spacing values.
Eigen::MatrixXd predict_matrix(const FeedForwardNet& net, const Eigen::MatrixXd& inputs,
                               const HybridMesh& background);

// CLI command entry points; each reads its inputs from the config document
// and writes its outputs. Throws UsageError/IoError/NumericError.
void cmd_synth(const json& config);
void cmd_compute_spacing(const json& config);
void cmd_transfer(const json& config);
void cmd_morph(const json& config);
void cmd_sample(const json& config);
void cmd_build_dataset(const json& config);
void cmd_train(const json& config);
void cmd_predict(const json& config);
void cmd_evaluate(const json& config);

/// Dispatch by subcommand name; throws UsageError for unknown commands.
void run_command(const std::string& name, const json& config);

}  // namespace meshsizer
