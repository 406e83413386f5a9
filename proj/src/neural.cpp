#include "meshsizer/neural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "meshsizer/errors.hpp"
#include "meshsizer/io.hpp"

namespace meshsizer {

namespace {

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa draw; avoids distribution objects so streams are
    // identical across standard libraries.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::MatrixXd normalize_cols(const Eigen::MatrixXd& m, const Normalization& norm) {
    Eigen::MatrixXd out = m;
    for (int c = 0; c < m.cols(); ++c) {
        const double span = norm.max[c] - norm.min[c];
        out.col(c) = (m.col(c).array() - norm.min[c]) / span;
    }
    return out;
}

Normalization column_ranges(const Eigen::MatrixXd& m) {
    Normalization norm;
    for (int c = 0; c < m.cols(); ++c) {
        const double lo = m.col(c).minCoeff();
        double hi = m.col(c).maxCoeff();
        if (!(hi - lo > 1e-12)) hi = lo + 1.0;  // constant column
        norm.min.push_back(lo);
        norm.max.push_back(hi);
    }
    return norm;
}

Eigen::MatrixXd log10_outputs(const Eigen::MatrixXd& y) {
    if (!(y.minCoeff() > 0.0)) throw UsageError("spacing outputs must be positive");
    return y.array().log10();
}

/// Row-batched forward pass storing activations per layer.
struct ForwardPass {
    std::vector<Eigen::MatrixXd> z;  // activations, z[0] = input batch
    std::vector<Eigen::MatrixXd> a;  // pre-activations per non-input layer
};

ForwardPass forward_batch(const FeedForwardNet& net, const Eigen::MatrixXd& x) {
    ForwardPass fp;
    fp.z.push_back(x);
    const int n_links = static_cast<int>(net.weights.size());
    for (int l = 0; l < n_links; ++l) {
        Eigen::MatrixXd pre = (fp.z.back() * net.weights[l]).rowwise() + net.biases[l].transpose();
        fp.a.push_back(pre);
        if (l + 1 < n_links) pre = pre.cwiseMax(0.0);  // ReLU on hidden layers
        fp.z.push_back(std::move(pre));
    }
    return fp;
}

double mse(const Eigen::MatrixXd& h, const Eigen::MatrixXd& y) {
    return (h - y).squaredNorm() / (static_cast<double>(y.rows()) * y.cols());
}

CostGradients backward(const FeedForwardNet& net, const ForwardPass& fp,
                       const Eigen::MatrixXd& yn) {
    const int n_links = static_cast<int>(net.weights.size());
    CostGradients g;
    g.weights.resize(n_links);
    g.biases.resize(n_links);
    const double denom = static_cast<double>(yn.rows()) * yn.cols();
    Eigen::MatrixXd delta = 2.0 * (fp.z.back() - yn) / denom;
    for (int l = n_links - 1; l >= 0; --l) {
        g.weights[l] = fp.z[l].transpose() * delta;
        g.biases[l] = delta.colwise().sum();
        if (l > 0) {
            delta = (delta * net.weights[l].transpose())
                        .cwiseProduct((fp.a[l - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return g;
}

void check_net(const FeedForwardNet& net) {
    if (net.layer_sizes.size() < 2) throw UsageError("network needs at least input and output layers");
    if (net.weights.size() + 1 != net.layer_sizes.size() || net.biases.size() != net.weights.size())
        throw UsageError("network weight/bias shapes inconsistent with layer sizes");
    for (size_t l = 0; l < net.weights.size(); ++l) {
        if (net.weights[l].rows() != net.layer_sizes[l] ||
            net.weights[l].cols() != net.layer_sizes[l + 1] ||
            net.biases[l].size() != net.layer_sizes[l + 1])
            throw UsageError("network weight matrix " + std::to_string(l) + " has wrong shape");
    }
}

}  // namespace

Eigen::VectorXd forward(const FeedForwardNet& net, const Eigen::VectorXd& x) {
    check_net(net);
    if (x.size() != net.input_count())
        throw UsageError("input vector length " + std::to_string(x.size()) +
                         " does not match network input size " +
                         std::to_string(net.input_count()));
    return forward_batch(net, x.transpose()).z.back().transpose();
}

double cost(const FeedForwardNet& net, const SplitData& split) {
    check_net(net);
    if (split.case_count() == 0) throw UsageError("cost of an empty split");
    const Eigen::MatrixXd xn = normalize_cols(split.x, net.input_norm);
    const Eigen::MatrixXd yn = normalize_cols(log10_outputs(split.y), net.output_norm);
    return mse(forward_batch(net, xn).z.back(), yn);
}

FeedForwardNet train(const SplitData& train_split, const SplitData& validation_split,
                     const std::vector<int>& hidden_layers, const TrainConfig& config,
                     std::pair<double, double> delta_bounds, TrainReport* report) {
    if (train_split.case_count() == 0 || validation_split.case_count() == 0)
        throw UsageError("train and validation splits must be non-empty");
    if (!(config.learning_rate > 0.0)) throw UsageError("learning rate must be positive");
    if (config.patience < 1) throw UsageError("patience must be at least 1");

    FeedForwardNet net;
    net.seed = config.seed;
    net.delta_min = delta_bounds.first;
    net.delta_max = delta_bounds.second;
    net.layer_sizes.push_back(static_cast<int>(train_split.x.cols()));
    for (int h : hidden_layers) {
        if (h < 1) throw UsageError("hidden layer sizes must be positive");
        net.layer_sizes.push_back(h);
    }
    net.layer_sizes.push_back(static_cast<int>(train_split.y.cols()));

    net.input_norm = column_ranges(train_split.x);
    net.output_norm = column_ranges(log10_outputs(train_split.y));

    const Eigen::MatrixXd xn = normalize_cols(train_split.x, net.input_norm);
    const Eigen::MatrixXd yn = normalize_cols(log10_outputs(train_split.y), net.output_norm);
    const Eigen::MatrixXd vx = normalize_cols(validation_split.x, net.input_norm);
    const Eigen::MatrixXd vy = normalize_cols(log10_outputs(validation_split.y), net.output_norm);

    // Fan-in-scaled uniform weights; biases start small and non-negative so
    // every rectifier is initially active somewhere on the normalized input
    // box (full-batch training cannot revive a dead unit).
    std::mt19937_64 rng(config.seed);
    const int n_links = static_cast<int>(net.layer_sizes.size()) - 1;
    for (int l = 0; l < n_links; ++l) {
        const int rows = net.layer_sizes[l], cols = net.layer_sizes[l + 1];
        const double s = 1.0 / std::sqrt(static_cast<double>(rows));
        Eigen::MatrixXd w(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) w(i, j) = s * (2.0 * uniform01(rng) - 1.0);
        net.weights.push_back(std::move(w));
        Eigen::VectorXd b(cols);
        for (int j = 0; j < cols; ++j) b[j] = s * uniform01(rng);
        net.biases.push_back(std::move(b));
    }

    std::vector<Eigen::MatrixXd> mw(n_links), vw(n_links);
    std::vector<Eigen::VectorXd> mb(n_links), vb(n_links);
    for (int l = 0; l < n_links; ++l) {
        mw[l] = Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols());
        vw[l] = mw[l];
        mb[l] = Eigen::VectorXd::Zero(net.biases[l].size());
        vb[l] = mb[l];
    }

    auto best_weights = net.weights;
    auto best_biases = net.biases;
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int since_best = 0;
    double train_cost = 0.0;
    int epoch = 0;

    for (epoch = 1; epoch <= config.max_epochs; ++epoch) {
        ForwardPass fp = forward_batch(net, xn);
        train_cost = mse(fp.z.back(), yn);
        if (!std::isfinite(train_cost))
            throw NumericError("training diverged (non-finite cost) at epoch " +
                               std::to_string(epoch));
        if (report) report->train_cost_history.push_back(train_cost);

        const CostGradients grad = backward(net, fp, yn);
        const double bc1 = 1.0 - std::pow(config.beta1, epoch);
        const double bc2 = 1.0 - std::pow(config.beta2, epoch);
        for (int l = n_links - 1; l >= 0; --l) {
            const Eigen::MatrixXd& gw = grad.weights[l];
            const Eigen::VectorXd& gb = grad.biases[l];
            mw[l] = config.beta1 * mw[l] + (1.0 - config.beta1) * gw;
            vw[l] = config.beta2 * vw[l] + (1.0 - config.beta2) * gw.cwiseProduct(gw);
            mb[l] = config.beta1 * mb[l] + (1.0 - config.beta1) * gb;
            vb[l] = config.beta2 * vb[l] + (1.0 - config.beta2) * gb.cwiseProduct(gb);
            net.weights[l] -= (config.learning_rate * (mw[l] / bc1).array() /
                               ((vw[l] / bc2).array().sqrt() + config.epsilon))
                                  .matrix();
            net.biases[l] -= (config.learning_rate * (mb[l] / bc1).array() /
                              ((vb[l] / bc2).array().sqrt() + config.epsilon))
                                 .matrix();
        }

        const double val_cost = mse(forward_batch(net, vx).z.back(), vy);
        if (val_cost < best_val) {
            best_val = val_cost;
            best_epoch = epoch;
            best_weights = net.weights;
            best_biases = net.biases;
            since_best = 0;
        } else if (++since_best >= config.patience) {
            break;
        }
    }

    net.weights = best_weights;
    net.biases = best_biases;
    if (report) {
        report->epochs_run = std::min(epoch, config.max_epochs);
        report->best_epoch = best_epoch;
        report->final_train_cost = train_cost;
        report->best_validation_cost = best_val;
    }
    return net;
}

CostGradients cost_gradients(const FeedForwardNet& net, const SplitData& split) {
    check_net(net);
    if (split.case_count() == 0) throw UsageError("cost gradient of an empty split");
    const Eigen::MatrixXd xn = normalize_cols(split.x, net.input_norm);
    const Eigen::MatrixXd yn = normalize_cols(log10_outputs(split.y), net.output_norm);
    const ForwardPass fp = forward_batch(net, xn);
    return backward(net, fp, yn);
}

double r_squared(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions) {
    if (targets.rows() != predictions.rows() || targets.cols() != predictions.cols())
        throw UsageError("r_squared shape mismatch");
    if (targets.size() < 2) throw UsageError("r_squared needs at least two values");
    const double mean = targets.mean();
    const double sst = (targets.array() - mean).square().sum();
    if (sst == 0.0) throw NumericError("r_squared undefined for zero-variance targets");
    const double sse = (targets - predictions).squaredNorm();
    return 1.0 - sse / sst;
}

double r_squared(std::span<const double> targets, std::span<const double> predictions) {
    if (targets.size() != predictions.size()) throw UsageError("r_squared shape mismatch");
    const Eigen::Map<const Eigen::VectorXd> t(targets.data(), targets.size());
    const Eigen::Map<const Eigen::VectorXd> p(predictions.data(), predictions.size());
    return r_squared(Eigen::MatrixXd(t), Eigen::MatrixXd(p));
}

BackgroundMesh predict_spacing(const FeedForwardNet& net, std::span<const double> params,
                               const HybridMesh& bg_mesh,
                               const std::function<void(const std::string&)>& warn) {
    check_net(net);
    if (static_cast<int>(params.size()) != net.input_count())
        throw UsageError("expected " + std::to_string(net.input_count()) + " parameters, got " +
                         std::to_string(params.size()));
    if (net.output_count() != bg_mesh.node_count())
        throw UsageError("network predicts " + std::to_string(net.output_count()) +
                         " values for a background mesh with " +
                         std::to_string(bg_mesh.node_count()) + " nodes");

    Eigen::VectorXd x(net.input_count());
    for (int i = 0; i < net.input_count(); ++i) {
        x[i] = (params[i] - net.input_norm.min[i]) / (net.input_norm.max[i] - net.input_norm.min[i]);
        if ((params[i] < net.input_norm.min[i] || params[i] > net.input_norm.max[i]) && warn)
            warn("parameter " + std::to_string(i) + " = " + std::to_string(params[i]) +
                 " lies outside the training range [" + std::to_string(net.input_norm.min[i]) +
                 ", " + std::to_string(net.input_norm.max[i]) + "] (extrapolating)");
    }

    const Eigen::VectorXd out = forward_batch(net, x.transpose()).z.back().transpose();
    BackgroundMesh result;
    result.mesh = bg_mesh;
    result.spacing.delta_min = net.delta_min;
    result.spacing.delta_max = net.delta_max;
    result.spacing.values.resize(net.output_count());
    for (int i = 0; i < net.output_count(); ++i) {
        const double log_s =
            out[i] * (net.output_norm.max[i] - net.output_norm.min[i]) + net.output_norm.min[i];
        result.spacing.values[i] = std::clamp(std::pow(10.0, log_s), net.delta_min, net.delta_max);
    }
    return result;
}

FeedForwardNet load_model(const std::string& path) {
    const json j = read_json_file(path);
    FeedForwardNet net;
    try {
        net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
        const auto& jw = j.at("weights");
        const auto& jb = j.at("biases");
        for (size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
            const int rows = net.layer_sizes[l], cols = net.layer_sizes[l + 1];
            const auto wflat = jw.at(l).get<std::vector<double>>();
            if (static_cast<int>(wflat.size()) != rows * cols)
                throw IoError("model weight matrix " + std::to_string(l) + " has wrong size");
            Eigen::MatrixXd w(rows, cols);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) w(r, c) = wflat[r * cols + c];
            net.weights.push_back(std::move(w));
            const auto bflat = jb.at(l).get<std::vector<double>>();
            net.biases.push_back(Eigen::Map<const Eigen::VectorXd>(bflat.data(), bflat.size()));
        }
        net.input_norm.min = j.at("input_norm").at("min").get<std::vector<double>>();
        net.input_norm.max = j.at("input_norm").at("max").get<std::vector<double>>();
        net.output_norm.min = j.at("output_norm").at("min").get<std::vector<double>>();
        net.output_norm.max = j.at("output_norm").at("max").get<std::vector<double>>();
        const auto& meta = j.at("meta");
        net.delta_min = meta.at("delta_min");
        net.delta_max = meta.at("delta_max");
        net.seed = meta.value("seed", 0ull);
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed model JSON: ") + ex.what());
    }
    check_net(net);
    return net;
}

void save_model(const FeedForwardNet& net, const std::string& path) {
    check_net(net);
    json j;
    j["layer_sizes"] = net.layer_sizes;
    j["weights"] = json::array();
    j["biases"] = json::array();
    for (size_t l = 0; l < net.weights.size(); ++l) {
        std::vector<double> flat;
        flat.reserve(net.weights[l].size());
        for (int r = 0; r < net.weights[l].rows(); ++r)
            for (int c = 0; c < net.weights[l].cols(); ++c) flat.push_back(net.weights[l](r, c));
        j["weights"].push_back(flat);
        j["biases"].push_back(
            std::vector<double>(net.biases[l].data(), net.biases[l].data() + net.biases[l].size()));
    }
    j["input_norm"] = {{"min", net.input_norm.min}, {"max", net.input_norm.max}};
    j["output_norm"] = {{"min", net.output_norm.min}, {"max", net.output_norm.max}};
    j["meta"] = {{"delta_min", net.delta_min}, {"delta_max", net.delta_max}, {"seed", net.seed}};
    write_json_file(j, path);
}

}  // namespace meshsizer
