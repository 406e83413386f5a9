#include "meshsizer/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

constexpr const char* kVersion = "0.1.0";

void warn_stderr(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

json provenance_block(const json& config, const std::string& command) {
    return json{{"version", kVersion},
                {"command", command},
                {"seed", config.value("seed", 0)},
                {"config_hash", json_hash(config)}};
}

std::string required_path(const json& config, const std::string& key) {
    const auto& paths = config.value("paths", json::object());
    if (!paths.contains(key))
        throw UsageError("config is missing paths." + key);
    return paths.at(key).get<std::string>();
}

RecoveryStrategy strategy_from_string(const std::string& s) {
    if (s == "fv_dual") return RecoveryStrategy::fv_dual;
    if (s == "fe_hybrid") return RecoveryStrategy::fe_hybrid;
    if (s == "fe_split") return RecoveryStrategy::fe_split;
    throw UsageError("unknown recovery strategy: " + s);
}

std::string strategy_to_string(RecoveryStrategy s) {
    switch (s) {
        case RecoveryStrategy::fv_dual: return "fv_dual";
        case RecoveryStrategy::fe_hybrid: return "fe_hybrid";
        case RecoveryStrategy::fe_split: return "fe_split";
    }
    return "?";
}

KeyVariable key_variable_from_string(const std::string& s) {
    if (s == "smoothed_pressure") return KeyVariable::smoothed_pressure;
    if (s == "pressure") return KeyVariable::pressure;
    if (s == "mach") return KeyVariable::mach;
    throw UsageError("unknown key variable: " + s);
}

std::string key_variable_to_string(KeyVariable kv) {
    switch (kv) {
        case KeyVariable::smoothed_pressure: return "smoothed_pressure";
        case KeyVariable::pressure: return "pressure";
        case KeyVariable::mach: return "mach";
    }
    return "?";
}

json split_to_json(const SplitData& split) {
    json inputs = json::array(), outputs = json::array();
    for (int r = 0; r < split.x.rows(); ++r) {
        inputs.push_back(std::vector<double>(split.x.row(r).begin(), split.x.row(r).end()));
        outputs.push_back(std::vector<double>(split.y.row(r).begin(), split.y.row(r).end()));
    }
    return json{{"inputs", inputs}, {"outputs", outputs}};
}

SplitData split_from_json(const json& j) {
    SplitData split;
    const auto inputs = j.at("inputs").get<std::vector<std::vector<double>>>();
    const auto outputs = j.at("outputs").get<std::vector<std::vector<double>>>();
    if (inputs.size() != outputs.size()) throw IoError("dataset split row counts differ");
    if (inputs.empty()) return split;
    split.x.resize(inputs.size(), inputs[0].size());
    split.y.resize(outputs.size(), outputs[0].size());
    for (size_t r = 0; r < inputs.size(); ++r) {
        if (inputs[r].size() != inputs[0].size() || outputs[r].size() != outputs[0].size())
            throw IoError("dataset split has ragged rows");
        for (size_t c = 0; c < inputs[r].size(); ++c) split.x(r, c) = inputs[r][c];
        for (size_t c = 0; c < outputs[r].size(); ++c) split.y(r, c) = outputs[r][c];
    }
    return split;
}

}  // namespace

SpacingConfig spacing_config_from_json(const json& j) {
    SpacingConfig cfg;
    cfg.scaling = j.value("scaling", cfg.scaling);
    if (j.contains("strategy")) cfg.strategy = strategy_from_string(j.at("strategy"));
    if (j.contains("key_variables")) {
        cfg.key_variables.clear();
        for (const auto& kv : j.at("key_variables"))
            cfg.key_variables.push_back(key_variable_from_string(kv));
    }
    if (j.contains("wake_origin"))
        cfg.wake_origin = Vec2{j.at("wake_origin").at(0), j.at("wake_origin").at(1)};
    cfg.wake_aspect_threshold = j.value("wake_aspect_threshold", cfg.wake_aspect_threshold);
    return cfg;
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig cfg;
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.beta1 = j.value("beta1", cfg.beta1);
    cfg.beta2 = j.value("beta2", cfg.beta2);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.max_epochs = j.value("max_epochs", cfg.max_epochs);
    cfg.patience = j.value("patience", cfg.patience);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

SyntheticCase synthetic_from_json(const json& j) {
    SyntheticCase d;
    const std::string kind = j.value("kind", "box");
    if (kind == "box")
        d.kind = SyntheticCase::Kind::box;
    else if (kind == "aerofoil")
        d.kind = SyntheticCase::Kind::aerofoil;
    else
        throw UsageError("unknown synthetic kind: " + kind);
    if (j.contains("box")) d.box = j.at("box").get<std::array<double, 4>>();
    d.nx = j.value("nx", d.nx);
    d.spacing = j.value("spacing", d.spacing);
    d.reynolds = j.value("reynolds", d.reynolds);
    d.c_first = j.value("c_first", d.c_first);
    d.growth = j.value("growth", d.growth);
    d.max_layers = j.value("max_layers", d.max_layers);
    d.wall_segments = j.value("wall_segments", d.wall_segments);
    d.farfield_offset = j.value("farfield_offset", d.farfield_offset);
    if (j.contains("geometry")) d.geometry = geometry_from_json(j.at("geometry"));

    if (j.contains("fields")) {
        const auto& f = j.at("fields");
        auto& p = d.fields;
        p.p_base = f.value("p_base", p.p_base);
        p.bump_amplitude = f.value("bump_amplitude", p.bump_amplitude);
        if (f.contains("bump_center"))
            p.bump_center = {f.at("bump_center").at(0), f.at("bump_center").at(1)};
        p.bump_radius = f.value("bump_radius", p.bump_radius);
        p.shock_amplitude = f.value("shock_amplitude", p.shock_amplitude);
        p.shock_position = f.value("shock_position", p.shock_position);
        p.shock_width = f.value("shock_width", p.shock_width);
        p.shock_height = f.value("shock_height", p.shock_height);
        p.mach_base = f.value("mach_base", p.mach_base);
        p.wake_deficit = f.value("wake_deficit", p.wake_deficit);
        p.wake_angle_deg = f.value("wake_angle_deg", p.wake_angle_deg);
        p.wake_width = f.value("wake_width", p.wake_width);
        if (f.contains("wake_origin"))
            p.wake_origin = {f.at("wake_origin").at(0), f.at("wake_origin").at(1)};
        p.bl_thickness = f.value("bl_thickness", p.bl_thickness);
    }
    return d;
}

DesignSpace design_space_from_json(const json& j) {
    DesignSpace space;
    for (const auto& d : j) {
        DesignDimension dim;
        dim.label = d.value("label", "");
        dim.lower = d.at("min");
        dim.upper = d.at("max");
        if (!(dim.lower < dim.upper))
            throw UsageError("design dimension '" + dim.label + "' has an empty range");
        space.dims.push_back(dim);
    }
    return space;
}

json design_space_to_json(const DesignSpace& space) {
    json arr = json::array();
    for (const auto& d : space.dims)
        arr.push_back({{"label", d.label}, {"min", d.lower}, {"max", d.upper}});
    return arr;
}

// ---------------------------------------------------------------------------
// Synthetic families
// ---------------------------------------------------------------------------

DesignSpace family_space(const std::string& family) {
    DesignSpace space;
    if (family == "flow2") {
        space.dims.push_back({"mach", 0.4, 0.85});
        space.dims.push_back({"alpha", 0.0, 3.0});
        return space;
    }
    if (family == "geo23") {
        const auto ranges = aerofoil_offset_ranges();
        for (int k = 0; k < 22; ++k)
            space.dims.push_back({"offset" + std::to_string(k), -ranges[k], ranges[k]});
        space.dims.push_back({"theta", 0.5, 1.5});
        return space;
    }
    throw UsageError("unknown synthetic family: " + family);
}

SyntheticCase apply_family(const SyntheticCase& base, const std::string& family,
                           std::span<const double> params) {
    SyntheticCase d = base;
    if (family == "flow2") {
        if (params.size() != 2) throw UsageError("flow2 expects 2 parameters");
        const double t = (params[0] - 0.4) / 0.45;  // Mach-number analog in [0,1]
        const double width = d.box[2] - d.box[0];
        d.fields.shock_position = d.box[0] + (0.3 + 0.4 * t) * width;
        d.fields.shock_amplitude = 0.15 + 0.2 * t;
        d.fields.wake_angle_deg = params[1];  // angle-of-attack analog
        return d;
    }
    if (family == "geo23") {
        if (params.size() != 23) throw UsageError("geo23 expects 23 parameters");
        d.kind = SyntheticCase::Kind::aerofoil;
        d.geometry = build_aerofoil(params.subspan(0, 22), params[22]);
        return d;
    }
    throw UsageError("unknown synthetic family: " + family);
}

// ---------------------------------------------------------------------------
// Geometry files
// ---------------------------------------------------------------------------

namespace {

json curve_to_json(const NurbsCurve& c) {
    json j;
    j["degree"] = c.degree;
    j["knots"] = c.knots;
    j["cps"] = json::array();
    for (const auto& p : c.control_points) j["cps"].push_back({p.x, p.y});
    j["weights"] = c.weights;
    return j;
}

}  // namespace

json geometry_to_json(const AerofoilGeometry& geom) {
    json j;
    j["upper"] = curve_to_json(geom.upper);
    j["lower"] = curve_to_json(geom.lower);
    j["offsets"] = std::vector<double>(geom.params.begin(), geom.params.begin() + 22);
    j["theta"] = geom.params[22];
    return j;
}

AerofoilGeometry geometry_from_json(const json& j) {
    try {
        const auto offsets = j.at("offsets").get<std::vector<double>>();
        return build_aerofoil(offsets, j.at("theta").get<double>());
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed geometry JSON: ") + ex.what());
    }
}

AerofoilGeometry load_geometry(const std::string& path) {
    return geometry_from_json(read_json_file(path));
}

void save_geometry(const AerofoilGeometry& geom, const std::string& path) {
    write_json_file(geometry_to_json(geom), path);
}

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

json dataset_to_json(const Dataset& ds, const json& provenance) {
    json j;
    j["family"] = ds.family;
    j["background_mesh"] = mesh_to_json(ds.background);
    j["space"] = design_space_to_json(ds.space);
    j["delta_min"] = ds.delta_min;
    j["delta_max"] = ds.delta_max;
    j["splits"] = {{"train", split_to_json(ds.train)},
                   {"validation", split_to_json(ds.validation)},
                   {"test", split_to_json(ds.test)}};
    if (!provenance.empty()) j["provenance"] = provenance;
    return j;
}

Dataset dataset_from_json(const json& j) {
    try {
        Dataset ds;
        ds.family = j.value("family", "");
        ds.background = mesh_from_json(j.at("background_mesh"));
        ds.space = design_space_from_json(j.at("space"));
        ds.delta_min = j.at("delta_min");
        ds.delta_max = j.at("delta_max");
        ds.train = split_from_json(j.at("splits").at("train"));
        ds.validation = split_from_json(j.at("splits").at("validation"));
        ds.test = split_from_json(j.at("splits").at("test"));
        for (const SplitData* split : {&ds.train, &ds.validation, &ds.test}) {
            if (split->case_count() == 0) continue;
            if (split->y.cols() != ds.background.node_count())
                throw IoError("dataset outputs do not match the background node count");
            if (!(split->y.minCoeff() > 0.0))
                throw IoError("dataset spacing outputs must be positive");
        }
        return ds;
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed dataset JSON: ") + ex.what());
    }
}

Dataset build_dataset(const DatasetBuildOptions& options) {
    Dataset ds;
    ds.family = options.family;
    ds.space = family_space(options.family);

    const bool geometric = options.family == "geo23";
    AerofoilGeometry ref_geom = base_aerofoil();
    SyntheticCase bg_descriptor = options.background;
    if (geometric) {
        bg_descriptor.kind = SyntheticCase::Kind::aerofoil;
        bg_descriptor.geometry = ref_geom;
    }
    ds.background = synthesize_case(bg_descriptor).mesh;

    WallParametrization wall;
    if (geometric) wall = recover_wall_params(ds.background, ref_geom);

    const DesignSample sample = sample_design(ds.space, options.n_train, options.n_validation,
                                              options.n_test, options.scrambled, options.seed);

    ds.delta_min = std::numeric_limits<double>::infinity();
    ds.delta_max = 0.0;

    auto run_case = [&](const std::vector<double>& params) {
        const SyntheticCase descriptor = apply_family(options.base, options.family, params);
        const SyntheticResult solved = synthesize_case(descriptor);
        const SpacingField target =
            compute_target_spacing(solved.mesh, solved.pressure, solved.mach, options.spacing);
        const HybridMesh* bg = &ds.background;
        HybridMesh morphed;
        if (geometric) {
            morphed = morph_background(ds.background, wall, *descriptor.geometry,
                                       ElasticityConfig{});
            bg = &morphed;
        }
        const BackgroundMesh transferred = transfer_spacing(solved.mesh, target, *bg, warn_stderr);
        ds.delta_min = std::min(ds.delta_min, target.delta_min);
        ds.delta_max = std::max(ds.delta_max, target.delta_max);
        return transferred.spacing.values;
    };

    auto fill_split = [&](const std::vector<std::vector<double>>& rows, SplitData& split,
                          const char* tag) {
        if (rows.empty()) return;
        split.x.resize(rows.size(), ds.space.dim_count());
        split.y.resize(rows.size(), ds.background.node_count());
        for (size_t r = 0; r < rows.size(); ++r) {
            std::vector<double> values;
            try {
                values = run_case(rows[r]);
            } catch (const std::exception& ex) {
                throw NumericError("case " + std::string(tag) + "[" + std::to_string(r) +
                                   "] failed: " + ex.what());
            }
            for (int c = 0; c < ds.space.dim_count(); ++c) split.x(r, c) = rows[r][c];
            for (int c = 0; c < ds.background.node_count(); ++c) split.y(r, c) = values[c];
        }
    };

    fill_split(sample.train, ds.train, "train");
    fill_split(sample.validation, ds.validation, "validation");
    fill_split(sample.test, ds.test, "test");
    return ds;
}

double spacing_r_squared(const Eigen::MatrixXd& target, const Eigen::MatrixXd& predicted) {
    if (!(target.minCoeff() > 0.0) || !(predicted.minCoeff() > 0.0))
        throw NumericError("spacing matrices must be positive for log-space R^2");
    return r_squared(Eigen::MatrixXd(target.array().log10()),
                     Eigen::MatrixXd(predicted.array().log10()));
}

Eigen::MatrixXd predict_matrix(const FeedForwardNet& net, const Eigen::MatrixXd& inputs,
                               const HybridMesh& background) {
    Eigen::MatrixXd out(inputs.rows(), background.node_count());
    for (int r = 0; r < inputs.rows(); ++r) {
        std::vector<double> params(inputs.row(r).begin(), inputs.row(r).end());
        const BackgroundMesh bg = predict_spacing(net, params, background);
        for (int c = 0; c < background.node_count(); ++c) out(r, c) = bg.spacing[c];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace {

/// Mesh written by a command: the canonical mesh schema plus a provenance
/// block. Loaders ignore the extra key.
void save_mesh_with_provenance(const HybridMesh& mesh, const std::string& path,
                               const json& provenance) {
    HybridMesh canonical = mesh;
    canonicalize_boundary(canonical);
    json j = mesh_to_json(canonical);
    j["provenance"] = provenance;
    write_json_file(j, path);
}

}  // namespace

void cmd_synth(const json& config) {
    const SyntheticCase descriptor = synthetic_from_json(config.value("synth", json::object()));
    const SyntheticResult result = synthesize_case(descriptor);
    save_mesh_with_provenance(result.mesh, required_path(config, "mesh"),
                              provenance_block(config, "synth"));
    save_field(result.pressure, required_path(config, "pressure"));
    save_field(result.mach, required_path(config, "mach"));
}

void cmd_compute_spacing(const json& config) {
    const HybridMesh mesh = load_mesh(required_path(config, "mesh"));
    const auto& paths = config.value("paths", json::object());
    NodalField p, mach;
    if (paths.contains("density")) {
        // Conserved solver output: derive pressure and Mach number first.
        const PrimitiveFields primitives = derive_primitives(
            load_field(paths.at("density")), load_field(required_path(config, "momentum_x")),
            load_field(required_path(config, "momentum_y")),
            load_field(required_path(config, "energy")),
            GasModel{config.value("gamma", 1.4)});
        p = primitives.pressure;
        mach = primitives.mach;
    } else {
        p = load_field(required_path(config, "pressure"));
        mach = load_field(required_path(config, "mach"));
    }
    const json scfg = config.value("spacing", json::object());
    const SpacingConfig cfg = spacing_config_from_json(scfg);
    const SpacingField spacing = compute_target_spacing(mesh, p, mach, cfg);

    json prov = provenance_block(config, "compute-spacing");
    prov["scaling"] = cfg.scaling;
    prov["strategy"] = strategy_to_string(cfg.strategy);
    json kvs = json::array();
    for (KeyVariable kv : cfg.key_variables) kvs.push_back(key_variable_to_string(kv));
    prov["key_variables"] = kvs;
    save_spacing(spacing, required_path(config, "spacing"), prov);
}

void cmd_transfer(const json& config) {
    const HybridMesh comp = load_mesh(required_path(config, "mesh"));
    const SpacingField spacing = load_spacing(required_path(config, "spacing"));
    const std::string bg_path = required_path(config, "background_mesh");
    const HybridMesh bg = load_mesh(bg_path);
    const BackgroundMesh result = transfer_spacing(comp, spacing, bg, warn_stderr);

    json prov = provenance_block(config, "transfer");
    prov["background_mesh"] = bg_path;
    save_spacing(result.spacing, required_path(config, "output"), prov);
}

void cmd_morph(const json& config) {
    const HybridMesh bg = load_mesh(required_path(config, "background_mesh"));
    const AerofoilGeometry ref = load_geometry(required_path(config, "ref_geometry"));
    const AerofoilGeometry target = load_geometry(required_path(config, "geometry"));
    const WallParametrization wall = recover_wall_params(bg, ref);
    const HybridMesh morphed = morph_background(bg, wall, target, ElasticityConfig{}, warn_stderr);
    save_mesh_with_provenance(morphed, required_path(config, "output"),
                              provenance_block(config, "morph"));
}

void cmd_sample(const json& config) {
    const json& dj = config.value("design", json::object());
    DesignSpace space;
    if (dj.contains("space"))
        space = design_space_from_json(dj.at("space"));
    else if (dj.contains("family"))
        space = family_space(dj.at("family"));
    else
        throw UsageError("design needs either a space or a family");
    const auto& counts = dj.value("counts", json::object());
    const DesignSample sample =
        sample_design(space, counts.value("train", 20), counts.value("validation", 5),
                      counts.value("test", 80), dj.value("scrambled", false),
                      config.value("seed", 0));

    json out;
    out["space"] = design_space_to_json(space);
    out["splits"] = {{"train", sample.train},
                     {"validation", sample.validation},
                     {"test", sample.test}};
    out["provenance"] = provenance_block(config, "sample");
    write_json_file(out, required_path(config, "output"));
}

void cmd_build_dataset(const json& config) {
    const json& dj = config.value("dataset", json::object());
    DatasetBuildOptions options;
    options.family = dj.value("family", "flow2");
    options.base = synthetic_from_json(config.value("synth", json::object()));
    options.background = synthetic_from_json(dj.value("background", json::object()));
    options.spacing = spacing_config_from_json(config.value("spacing", json::object()));
    const auto& counts = dj.value("counts", json::object());
    options.n_train = counts.value("train", 20);
    options.n_validation = counts.value("validation", 5);
    options.n_test = counts.value("test", 80);
    options.scrambled = dj.value("scrambled", options.family == "geo23");
    options.seed = config.value("seed", 0);

    const Dataset ds = build_dataset(options);
    write_json_file(dataset_to_json(ds, provenance_block(config, "build-dataset")),
                    required_path(config, "output"));
}

void cmd_train(const json& config) {
    const Dataset ds = dataset_from_json(read_json_file(required_path(config, "dataset")));
    const json tj = config.value("train", json::object());
    TrainConfig cfg = train_config_from_json(tj);
    if (cfg.seed == 0) cfg.seed = config.value("seed", 0);

    std::vector<std::pair<int, int>> grid;  // (layers, neurons)
    if (tj.contains("grid")) {
        for (int layers : tj.at("grid").at("layers").get<std::vector<int>>())
            for (int neurons : tj.at("grid").at("neurons").get<std::vector<int>>())
                grid.emplace_back(layers, neurons);
    } else {
        const auto hidden = tj.value("hidden_layers", std::vector<int>{10});
        grid.emplace_back(static_cast<int>(hidden.size()), hidden.empty() ? 0 : hidden[0]);
    }

    FeedForwardNet best_net;
    double best_val = std::numeric_limits<double>::infinity();
    json cells = json::array();
    for (const auto& [layers, neurons] : grid) {
        std::vector<int> hidden;
        if (tj.contains("grid")) {
            hidden.assign(layers, neurons);
        } else {
            hidden = tj.value("hidden_layers", std::vector<int>{10});
        }
        TrainReport report;
        const FeedForwardNet net = train(ds.train, ds.validation, hidden, cfg,
                                         {ds.delta_min, ds.delta_max}, &report);
        const double test_r2 =
            spacing_r_squared(ds.test.y, predict_matrix(net, ds.test.x, ds.background));
        cells.push_back({{"layers", layers},
                         {"neurons", neurons},
                         {"test_r2", test_r2},
                         {"validation_cost", report.best_validation_cost},
                         {"epochs", report.epochs_run}});
        std::cout << "grid " << layers << " x " << neurons << ": test R2 = " << test_r2
                  << ", validation cost = " << report.best_validation_cost << "\n";
        if (report.best_validation_cost < best_val) {
            best_val = report.best_validation_cost;
            best_net = net;
        }
    }

    save_model(best_net, required_path(config, "model"));
    if (config.value("paths", json::object()).contains("report")) {
        json report;
        report["cells"] = cells;
        report["provenance"] = provenance_block(config, "train");
        write_json_file(report, required_path(config, "report"));
    }
}

void cmd_predict(const json& config) {
    const FeedForwardNet net = load_model(required_path(config, "model"));
    const auto params = config.value("predict", json::object())
                            .value("params", std::vector<double>{});
    HybridMesh bg = load_mesh(required_path(config, "background_mesh"));
    const auto& paths = config.value("paths", json::object());
    if (paths.contains("ref_geometry") && params.size() == 23) {
        // Geometry-driven prediction: morph the background mesh first.
        const AerofoilGeometry ref = load_geometry(paths.at("ref_geometry"));
        const AerofoilGeometry target =
            build_aerofoil(std::span<const double>(params).subspan(0, 22), params[22]);
        bg = morph_background(bg, recover_wall_params(bg, ref), target, ElasticityConfig{},
                              warn_stderr);
    }
    const BackgroundMesh result = predict_spacing(net, params, bg, warn_stderr);

    json prov = provenance_block(config, "predict");
    prov["params"] = params;
    save_spacing(result.spacing, required_path(config, "output"), prov);
}

void cmd_evaluate(const json& config) {
    const HybridMesh bg = load_mesh(required_path(config, "background_mesh"));
    BackgroundMesh target{bg, load_spacing(required_path(config, "target"))};
    BackgroundMesh predicted{bg, load_spacing(required_path(config, "predicted"))};

    const RatioHistogram histogram = spacing_ratio_histogram(target, predicted);
    const NodalField errors = spacing_error_map(target, predicted);

    const std::string prefix = required_path(config, "output");
    write_histogram_csv(histogram, prefix + ".histogram.csv");
    save_field(errors, prefix + ".error_map.json");

    json summary;
    summary["fraction_within_1.15"] = histogram.fraction_tight();
    summary["fraction_within_1.5"] = histogram.fraction_loose();
    summary["elements"] = histogram.total;
    summary["max_error_percent"] = *std::max_element(errors.values.begin(), errors.values.end());
    summary["provenance"] = provenance_block(config, "evaluate");
    write_json_file(summary, prefix + ".summary.json");
}

void run_command(const std::string& name, const json& config) {
    if (name == "synth") return cmd_synth(config);
    if (name == "compute-spacing") return cmd_compute_spacing(config);
    if (name == "transfer") return cmd_transfer(config);
    if (name == "morph") return cmd_morph(config);
    if (name == "sample") return cmd_sample(config);
    if (name == "build-dataset") return cmd_build_dataset(config);
    if (name == "train") return cmd_train(config);
    if (name == "predict") return cmd_predict(config);
    if (name == "evaluate") return cmd_evaluate(config);
    throw UsageError("unknown command: " + name);
}

}  // namespace meshsizer
