#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "meshsizer/mesh.hpp"
#include "meshsizer/transfer.hpp"

namespace meshsizer {

/// Per-dimension min/max used for affine normalization.
struct Normalization {
    std::vector<double> min;
    std::vector<double> max;
};

/// Fully connected feed-forward network: ReLU hidden layers, linear output.
/// Inputs are min-max normalized; outputs live in normalized log10(spacing)
/// space and are denormalized on prediction.
struct FeedForwardNet {
    std::vector<int> layer_sizes;           ///< [N, n1..nL, M]
    std::vector<Eigen::MatrixXd> weights;   ///< weights[l]: n_l x n_{l+1}
    std::vector<Eigen::VectorXd> biases;    ///< biases[l]: n_{l+1}
    Normalization input_norm;               ///< raw input space
    Normalization output_norm;              ///< log10(spacing) space
    double delta_min = 0.0;                 ///< prediction clamp bounds
    double delta_max = 0.0;
    std::uint64_t seed = 0;

    int input_count() const { return layer_sizes.front(); }
    int output_count() const { return layer_sizes.back(); }
};

/// One dataset split; rows are cases. Outputs are raw spacing values.
struct SplitData {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;
    int case_count() const { return static_cast<int>(x.rows()); }
};

struct TrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int max_epochs = 20000;
    int patience = 200;
    std::uint64_t seed = 0;
};

struct TrainReport {
    int epochs_run = 0;
    int best_epoch = 0;
    double final_train_cost = 0.0;
    double best_validation_cost = 0.0;
    std::vector<double> train_cost_history;
};

struct CostGradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

/// Exact cost gradient by backpropagation, in the same normalized spaces as
/// cost().
CostGradients cost_gradients(const FeedForwardNet& net, const SplitData& split);

/// Raw forward propagation in network space (no normalization applied).
Eigen::VectorXd forward(const FeedForwardNet& net, const Eigen::VectorXd& x);

/// Mean squared error over a split, 1/(N M) sum (y - h)^2, evaluated in the
/// network's normalized input/output spaces.
double cost(const FeedForwardNet& net, const SplitData& split);

/// Full-batch ADAM with exact backpropagated gradients and validation-based
/// early stopping; returns the best-validation weights. Deterministic for a
/// fixed seed.
FeedForwardNet train(const SplitData& train_split, const SplitData& validation_split,
                     const std::vector<int>& hidden_layers, const TrainConfig& config,
                     std::pair<double, double> delta_bounds, TrainReport* report = nullptr);

/// Coefficient of determination 1 - SSE/SST over all entries jointly.
double r_squared(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions);
double r_squared(std::span<const double> targets, std::span<const double> predictions);

/// Denormalized prediction (10^) clamped to the net's delta bounds and
/// attached to the background mesh. Emits a warning through warn when the
/// parameters fall outside the training ranges (extrapolation).
BackgroundMesh predict_spacing(const FeedForwardNet& net, std::span<const double> params,
                               const HybridMesh& bg_mesh,
                               const std::function<void(const std::string&)>& warn = {});

FeedForwardNet load_model(const std::string& path);
void save_model(const FeedForwardNet& net, const std::string& path);

}  // namespace meshsizer
