#include <doctest.h>

#include <cmath>

#include "meshsizer/errors.hpp"
#include "meshsizer/pipeline.hpp"
#include "test_helpers.hpp"

using namespace meshsizer;
using namespace test_helpers;

namespace {

/// Small, fast flow2 setup shared by the dataset tests.
DatasetBuildOptions tiny_flow_options() {
    DatasetBuildOptions opt;
    opt.family = "flow2";
    opt.base.nx = 24;
    opt.base.box = {0.0, 0.0, 2.0, 1.0};
    opt.base.spacing = 0.08;
    opt.base.reynolds = 1e5;
    opt.base.fields.wake_origin = {0.5, 0.35};
    opt.background.nx = 10;
    opt.background.box = opt.base.box;
    opt.background.spacing = 0.15;
    opt.background.reynolds = 1e3;
    opt.n_train = 3;
    opt.n_validation = 1;
    opt.n_test = 2;
    return opt;
}

}  // namespace

TEST_CASE("config adapters") {
    SUBCASE("spacing config round trip through JSON") {
        const json j = {{"scaling", 0.35},
                        {"strategy", "fv_dual"},
                        {"key_variables", {"pressure", "mach"}},
                        {"wake_origin", {0.7, 0.2}}};
        const SpacingConfig cfg = spacing_config_from_json(j);
        CHECK(cfg.scaling == 0.35);
        CHECK(cfg.strategy == RecoveryStrategy::fv_dual);
        REQUIRE(cfg.key_variables.size() == 2);
        CHECK(cfg.key_variables[0] == KeyVariable::pressure);
        CHECK(cfg.key_variables[1] == KeyVariable::mach);
        REQUIRE(cfg.wake_origin.has_value());
        CHECK(cfg.wake_origin->x == 0.7);
    }
    SUBCASE("unknown strategy is a usage error") {
        CHECK_THROWS_AS(spacing_config_from_json({{"strategy", "magic"}}), UsageError);
    }
    SUBCASE("train config defaults") {
        const TrainConfig cfg = train_config_from_json(json::object());
        CHECK(cfg.learning_rate == 1e-3);
        CHECK(cfg.beta1 == 0.9);
        CHECK(cfg.beta2 == 0.999);
        CHECK(cfg.epsilon == 1e-8);
        CHECK(cfg.max_epochs == 20000);
        CHECK(cfg.patience == 200);
    }
}

TEST_CASE("synthetic families") {
    SUBCASE("flow2 space mirrors the flow-condition ranges") {
        const DesignSpace space = family_space("flow2");
        REQUIRE(space.dim_count() == 2);
        CHECK(space.dims[0].lower == 0.4);
        CHECK(space.dims[0].upper == 0.85);
        CHECK(space.dims[1].lower == 0.0);
        CHECK(space.dims[1].upper == 3.0);
    }
    SUBCASE("geo23 space has 23 dimensions with the table ranges") {
        const DesignSpace space = family_space("geo23");
        REQUIRE(space.dim_count() == 23);
        CHECK(space.dims[0].upper == doctest::Approx(4.3e-2));
        CHECK(space.dims[22].lower == 0.5);
        CHECK(space.dims[22].upper == 1.5);
    }
    SUBCASE("flow2 mapping moves the shock with the Mach analog") {
        SyntheticCase base;
        base.box = {0.0, 0.0, 2.0, 1.0};
        const SyntheticCase lo = apply_family(base, "flow2", std::vector<double>{0.4, 0.0});
        const SyntheticCase hi = apply_family(base, "flow2", std::vector<double>{0.85, 3.0});
        CHECK(lo.fields.shock_position == doctest::Approx(0.6));
        CHECK(hi.fields.shock_position == doctest::Approx(1.4));
        CHECK(hi.fields.wake_angle_deg == 3.0);
        CHECK(hi.fields.shock_amplitude > lo.fields.shock_amplitude);
    }
    SUBCASE("geo23 mapping builds the geometry") {
        SyntheticCase base;
        std::vector<double> params(23, 0.0);
        params[22] = 1.0;
        const SyntheticCase c = apply_family(base, "geo23", params);
        CHECK(c.kind == SyntheticCase::Kind::aerofoil);
        REQUIRE(c.geometry.has_value());
        CHECK(c.geometry->lower.control_points[1].y == -0.024);
    }
    SUBCASE("unknown family is rejected") {
        CHECK_THROWS_AS(family_space("flow99"), UsageError);
    }
}

TEST_CASE("geometry JSON round trip") {
    std::array<double, 22> offsets{};
    offsets[3] = 0.01;
    const AerofoilGeometry geom = build_aerofoil(offsets, 1.2);
    TempDir tmp("geom");
    save_geometry(geom, tmp.path("g.json"));
    const AerofoilGeometry loaded = load_geometry(tmp.path("g.json"));
    CHECK(loaded.params == geom.params);
    for (int i = 0; i < 8; ++i) {
        CHECK(loaded.upper.control_points[i].x == geom.upper.control_points[i].x);
        CHECK(loaded.lower.control_points[i].y == geom.lower.control_points[i].y);
    }
}

TEST_CASE("build_dataset: flow2") {
    const DatasetBuildOptions opt = tiny_flow_options();
    const Dataset ds = build_dataset(opt);

    CHECK(ds.train.case_count() == 3);
    CHECK(ds.validation.case_count() == 1);
    CHECK(ds.test.case_count() == 2);
    CHECK(ds.train.y.cols() == ds.background.node_count());
    CHECK(ds.train.x.cols() == 2);
    CHECK(ds.delta_min > 0.0);
    CHECK(ds.delta_min <= ds.delta_max);
    // All outputs are valid spacing values.
    CHECK(ds.train.y.minCoeff() > 0.0);
    CHECK(ds.train.y.maxCoeff() <= ds.delta_max + 1e-15);

    SUBCASE("deterministic rebuild") {
        const Dataset again = build_dataset(opt);
        CHECK(ds.train.x == again.train.x);
        CHECK(ds.train.y == again.train.y);
        CHECK(ds.test.y == again.test.y);
    }
    SUBCASE("dataset JSON round trip") {
        const json j = dataset_to_json(ds);
        const Dataset back = dataset_from_json(j);
        CHECK(back.family == "flow2");
        CHECK(back.train.x == ds.train.x);
        CHECK(back.train.y == ds.train.y);
        CHECK(back.background.node_count() == ds.background.node_count());
        CHECK(back.delta_min == ds.delta_min);
    }
}

TEST_CASE("build_dataset: geo23 morphs a shared background") {
    DatasetBuildOptions opt;
    opt.family = "geo23";
    opt.base.kind = SyntheticCase::Kind::aerofoil;
    opt.base.wall_segments = 24;
    opt.base.spacing = 0.12;
    opt.base.reynolds = 1e4;
    opt.base.farfield_offset = 1.5;
    opt.background.kind = SyntheticCase::Kind::aerofoil;
    opt.background.wall_segments = 16;
    opt.background.spacing = 0.25;
    opt.background.reynolds = 1e3;
    opt.background.farfield_offset = 1.5;
    opt.n_train = 2;
    opt.n_validation = 1;
    opt.n_test = 1;
    opt.scrambled = true;
    opt.seed = 7;

    const Dataset ds = build_dataset(opt);
    CHECK(ds.train.x.cols() == 23);
    CHECK(ds.train.y.cols() == ds.background.node_count());
    CHECK(ds.train.y.minCoeff() > 0.0);
}

TEST_CASE("spacing_r_squared is 1 for a perfect prediction") {
    Eigen::MatrixXd y(2, 3);
    y << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
    CHECK(spacing_r_squared(y, y) == 1.0);
}

TEST_CASE("predict_matrix shape") {
    const Dataset ds = build_dataset(tiny_flow_options());
    TrainConfig cfg;
    cfg.max_epochs = 50;
    const FeedForwardNet net =
        train(ds.train, ds.validation, {5}, cfg, {ds.delta_min, ds.delta_max});
    const Eigen::MatrixXd pred = predict_matrix(net, ds.test.x, ds.background);
    CHECK(pred.rows() == 2);
    CHECK(pred.cols() == ds.background.node_count());
    CHECK(pred.minCoeff() >= ds.delta_min);
    CHECK(pred.maxCoeff() <= ds.delta_max);
}

TEST_CASE("commands operate on files") {
    TempDir tmp("cmd");
    json config;
    config["seed"] = 3;
    config["synth"] = {{"kind", "box"}, {"nx", 16}, {"spacing", 0.1}, {"reynolds", 1e5}};
    config["paths"] = {{"mesh", tmp.path("mesh.json")},
                       {"pressure", tmp.path("p.json")},
                       {"mach", tmp.path("m.json")},
                       {"spacing", tmp.path("spacing.json")}};

    SUBCASE("synth then compute-spacing, idempotently") {
        cmd_synth(config);
        const HybridMesh mesh = load_mesh(config["paths"]["mesh"]);
        CHECK(mesh.node_count() > 100);

        cmd_compute_spacing(config);
        const std::string first = read_file(tmp.path("spacing.json"));
        cmd_compute_spacing(config);
        CHECK(read_file(tmp.path("spacing.json")) == first);

        json prov;
        const SpacingField spacing = load_spacing(tmp.path("spacing.json"), &prov);
        CHECK(spacing.size() == mesh.node_count());
        CHECK(prov.at("strategy") == "fe_split");
        CHECK(prov.at("key_variables").size() == 2);
        CHECK(prov.contains("config_hash"));
    }
    SUBCASE("uniform fields produce delta_max everywhere") {
        cmd_synth(config);
        const HybridMesh mesh = load_mesh(config["paths"]["mesh"]);
        save_field(NodalField("pressure", std::vector<double>(mesh.node_count(), 1.0)),
                   tmp.path("p.json"));
        save_field(NodalField("mach", std::vector<double>(mesh.node_count(), 0.5)),
                   tmp.path("m.json"));
        cmd_compute_spacing(config);
        const SpacingField spacing = load_spacing(tmp.path("spacing.json"));
        const auto [dmin, dmax] = mesh_spacing_bounds(mesh);
        (void)dmin;
        for (int i = 0; i < spacing.size(); ++i) CHECK(spacing[i] == dmax);
    }
    SUBCASE("a missing field file names the path") {
        cmd_synth(config);
        config["paths"]["pressure"] = tmp.path("nope.json");
        CHECK_THROWS_WITH_AS(cmd_compute_spacing(config), doctest::Contains("nope.json"),
                             IoError);
    }
    SUBCASE("conserved solver fields are derived before sizing") {
        cmd_synth(config);
        const HybridMesh mesh = load_mesh(config["paths"]["mesh"]);
        const int n = mesh.node_count();
        // Uniform free stream: rho = 1, v = (0.5, 0), p = 1/1.4.
        const double energy = (1.0 / 1.4) / 0.4 + 0.5 * 0.25;
        save_field(NodalField("density", std::vector<double>(n, 1.0)), tmp.path("rho.json"));
        save_field(NodalField("momentum_x", std::vector<double>(n, 0.5)), tmp.path("mx.json"));
        save_field(NodalField("momentum_y", std::vector<double>(n, 0.0)), tmp.path("my.json"));
        save_field(NodalField("energy", std::vector<double>(n, energy)), tmp.path("e.json"));
        config["paths"].erase("pressure");
        config["paths"].erase("mach");
        config["paths"]["density"] = tmp.path("rho.json");
        config["paths"]["momentum_x"] = tmp.path("mx.json");
        config["paths"]["momentum_y"] = tmp.path("my.json");
        config["paths"]["energy"] = tmp.path("e.json");
        cmd_compute_spacing(config);
        const SpacingField spacing = load_spacing(tmp.path("spacing.json"));
        const auto [dmin, dmax] = mesh_spacing_bounds(mesh);
        (void)dmin;
        for (int i = 0; i < spacing.size(); ++i) CHECK(spacing[i] == dmax);
    }
    SUBCASE("transfer command writes a background reference") {
        cmd_synth(config);
        cmd_compute_spacing(config);
        json bg_cfg = config;
        bg_cfg["synth"]["nx"] = 6;
        bg_cfg["synth"]["reynolds"] = 1e3;
        bg_cfg["paths"] = {{"mesh", tmp.path("bg.json")},
                           {"pressure", tmp.path("bgp.json")},
                           {"mach", tmp.path("bgm.json")}};
        cmd_synth(bg_cfg);

        config["paths"]["background_mesh"] = tmp.path("bg.json");
        config["paths"]["output"] = tmp.path("bg_spacing.json");
        cmd_transfer(config);
        json prov;
        const SpacingField bg_spacing = load_spacing(tmp.path("bg_spacing.json"), &prov);
        const HybridMesh bg = load_mesh(tmp.path("bg.json"));
        CHECK(bg_spacing.size() == bg.node_count());
        CHECK(prov.at("background_mesh") == tmp.path("bg.json"));
    }
}

TEST_CASE("sample command writes the design JSON") {
    TempDir tmp("design");
    json config;
    config["seed"] = 1;
    config["design"] = {{"family", "flow2"},
                        {"counts", {{"train", 4}, {"validation", 2}, {"test", 3}}}};
    config["paths"] = {{"output", tmp.path("design.json")}};
    cmd_sample(config);
    const json out = read_json_file(tmp.path("design.json"));
    CHECK(out.at("splits").at("train").size() == 4);
    CHECK(out.at("splits").at("validation").size() == 2);
    CHECK(out.at("splits").at("test").size() == 3);
    CHECK(out.at("space").size() == 2);
}

TEST_CASE("train/predict/evaluate command chain") {
    TempDir tmp("chain");
    const DatasetBuildOptions opt = tiny_flow_options();
    const Dataset ds = build_dataset(opt);
    write_json_file(dataset_to_json(ds), tmp.path("dataset.json"));

    json config;
    config["seed"] = 9;
    config["train"] = {{"hidden_layers", {4}}, {"max_epochs", 400}, {"patience", 400}};
    config["paths"] = {{"dataset", tmp.path("dataset.json")},
                       {"model", tmp.path("model.json")},
                       {"report", tmp.path("report.json")}};
    cmd_train(config);
    const json report = read_json_file(tmp.path("report.json"));
    REQUIRE(report.at("cells").size() == 1);

    // Predict for a training case and compare against its stored row.
    save_mesh(ds.background, tmp.path("bg.json"));
    config["paths"]["background_mesh"] = tmp.path("bg.json");
    config["paths"]["output"] = tmp.path("pred.json");
    config["predict"] = {{"params", {ds.train.x(0, 0), ds.train.x(0, 1)}}};
    cmd_predict(config);
    const SpacingField pred = load_spacing(tmp.path("pred.json"));
    CHECK(pred.size() == ds.background.node_count());

    // Evaluate the prediction against the stored target row.
    SpacingField target;
    target.delta_min = ds.delta_min;
    target.delta_max = ds.delta_max;
    target.values.assign(ds.train.y.row(0).begin(), ds.train.y.row(0).end());
    save_spacing(target, tmp.path("target.json"));
    config["paths"]["target"] = tmp.path("target.json");
    config["paths"]["predicted"] = tmp.path("pred.json");
    config["paths"]["output"] = tmp.path("eval");
    cmd_evaluate(config);
    const json summary = read_json_file(tmp.path("eval.summary.json"));
    CHECK(summary.at("elements").get<long>() == ds.background.element_count());
    CHECK(read_file(tmp.path("eval.histogram.csv")).rfind("bin_low", 0) == 0);

    SUBCASE("evaluate against itself is all ones") {
        config["paths"]["predicted"] = tmp.path("target.json");
        config["paths"]["output"] = tmp.path("self");
        cmd_evaluate(config);
        const json self = read_json_file(tmp.path("self.summary.json"));
        CHECK(self.at("fraction_within_1.15").get<double>() == 1.0);
        CHECK(self.at("max_error_percent").get<double>() == 0.0);
    }
}

TEST_CASE("grid search reports one cell per combination") {
    TempDir tmp("grid");
    DatasetBuildOptions opt = tiny_flow_options();
    const Dataset ds = build_dataset(opt);
    write_json_file(dataset_to_json(ds), tmp.path("dataset.json"));

    json config;
    config["seed"] = 4;
    config["train"] = {{"grid", {{"layers", {1, 2}}, {"neurons", {3, 5}}}},
                       {"max_epochs", 120},
                       {"patience", 120}};
    config["paths"] = {{"dataset", tmp.path("dataset.json")},
                       {"model", tmp.path("model.json")},
                       {"report", tmp.path("report.json")}};
    cmd_train(config);
    const json report = read_json_file(tmp.path("report.json"));
    CHECK(report.at("cells").size() == 4);
    const FeedForwardNet best = load_model(tmp.path("model.json"));
    CHECK(best.output_count() == ds.background.node_count());
}

TEST_CASE("run_command rejects unknown commands") {
    CHECK_THROWS_AS(run_command("fly", json::object()), UsageError);
}
