#include "meshsizer.h"

#include <string>

#include "meshsizer/errors.hpp"
#include "meshsizer/pipeline.hpp"

using namespace meshsizer;

struct msz_mesh {
    HybridMesh value;
};
struct msz_field {
    NodalField value;
};
struct msz_spacing {
    SpacingField value;
};
struct msz_geometry {
    AerofoilGeometry value;
};
struct msz_model {
    FeedForwardNet value;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
msz_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MSZ_OK;
    } catch (const UsageError& e) {
        g_last_error = e.what();
        return MSZ_ERR_USAGE;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return MSZ_ERR_IO;
    } catch (const NumericError& e) {
        g_last_error = e.what();
        return MSZ_ERR_NUMERIC;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MSZ_ERR_NUMERIC;
    }
}

msz_status fail_usage(const char* msg) {
    g_last_error = msg;
    return MSZ_ERR_USAGE;
}

json parse_config(const char* config_json) {
    if (config_json == nullptr || config_json[0] == '\0') return json::object();
    json j = json::parse(config_json, nullptr, false);
    if (j.is_discarded()) throw UsageError("config is not valid JSON");
    return j;
}

}  // namespace

extern "C" {

const char* msz_version(void) { return "0.1.0"; }

const char* msz_last_error(void) { return g_last_error.c_str(); }

/* --- meshes ------------------------------------------------------------ */

msz_status msz_mesh_load(const char* path, msz_mesh** out) {
    if (!path || !out) return fail_usage("msz_mesh_load: null argument");
    return guarded([&] { *out = new msz_mesh{load_mesh(path)}; });
}

msz_status msz_mesh_save(const msz_mesh* mesh, const char* path) {
    if (!mesh || !path) return fail_usage("msz_mesh_save: null argument");
    return guarded([&] { save_mesh(mesh->value, path); });
}

void msz_mesh_free(msz_mesh* mesh) { delete mesh; }

long msz_mesh_node_count(const msz_mesh* mesh) { return mesh ? mesh->value.node_count() : -1; }

long msz_mesh_triangle_count(const msz_mesh* mesh) {
    return mesh ? mesh->value.triangle_count() : -1;
}

long msz_mesh_quad_count(const msz_mesh* mesh) { return mesh ? mesh->value.quad_count() : -1; }

msz_status msz_mesh_spacing_bounds(const msz_mesh* mesh, double* delta_min, double* delta_max) {
    if (!mesh || !delta_min || !delta_max)
        return fail_usage("msz_mesh_spacing_bounds: null argument");
    return guarded([&] {
        const auto [lo, hi] = mesh_spacing_bounds(mesh->value);
        *delta_min = lo;
        *delta_max = hi;
    });
}

msz_status msz_synthesize(const char* descriptor_json, msz_mesh** mesh, msz_field** pressure,
                          msz_field** mach) {
    if (!descriptor_json) return fail_usage("msz_synthesize: null descriptor");
    return guarded([&] {
        const SyntheticResult r = synthesize_case(synthetic_from_json(parse_config(descriptor_json)));
        if (mesh) *mesh = new msz_mesh{r.mesh};
        if (pressure) *pressure = new msz_field{r.pressure};
        if (mach) *mach = new msz_field{r.mach};
    });
}

/* --- nodal fields ------------------------------------------------------ */

msz_status msz_field_load(const char* path, msz_field** out) {
    if (!path || !out) return fail_usage("msz_field_load: null argument");
    return guarded([&] { *out = new msz_field{load_field(path)}; });
}

msz_status msz_field_save(const msz_field* field, const char* path) {
    if (!field || !path) return fail_usage("msz_field_save: null argument");
    return guarded([&] { save_field(field->value, path); });
}

void msz_field_free(msz_field* field) { delete field; }

long msz_field_size(const msz_field* field) { return field ? field->value.size() : -1; }

msz_status msz_field_values(const msz_field* field, const double** values, size_t* count) {
    if (!field || !values || !count) return fail_usage("msz_field_values: null argument");
    *values = field->value.values.data();
    *count = field->value.values.size();
    return MSZ_OK;
}

/* --- spacing fields ------------------------------------------------------ */

msz_status msz_spacing_load(const char* path, msz_spacing** out) {
    if (!path || !out) return fail_usage("msz_spacing_load: null argument");
    return guarded([&] { *out = new msz_spacing{load_spacing(path)}; });
}

msz_status msz_spacing_save(const msz_spacing* spacing, const char* path) {
    if (!spacing || !path) return fail_usage("msz_spacing_save: null argument");
    return guarded([&] { save_spacing(spacing->value, path); });
}

void msz_spacing_free(msz_spacing* spacing) { delete spacing; }

long msz_spacing_size(const msz_spacing* spacing) { return spacing ? spacing->value.size() : -1; }

msz_status msz_spacing_values(const msz_spacing* spacing, const double** values, size_t* count) {
    if (!spacing || !values || !count) return fail_usage("msz_spacing_values: null argument");
    *values = spacing->value.values.data();
    *count = spacing->value.values.size();
    return MSZ_OK;
}

msz_status msz_spacing_bounds(const msz_spacing* spacing, double* delta_min, double* delta_max) {
    if (!spacing || !delta_min || !delta_max)
        return fail_usage("msz_spacing_bounds: null argument");
    *delta_min = spacing->value.delta_min;
    *delta_max = spacing->value.delta_max;
    return MSZ_OK;
}

msz_status msz_compute_spacing(const msz_mesh* mesh, const msz_field* pressure,
                               const msz_field* mach, const char* config_json, msz_spacing** out) {
    if (!mesh || !pressure || !mach || !out)
        return fail_usage("msz_compute_spacing: null argument");
    return guarded([&] {
        const SpacingConfig cfg = spacing_config_from_json(parse_config(config_json));
        *out = new msz_spacing{
            compute_target_spacing(mesh->value, pressure->value, mach->value, cfg)};
    });
}

msz_status msz_transfer_spacing(const msz_mesh* comp_mesh, const msz_spacing* comp_spacing,
                                const msz_mesh* background, msz_spacing** out) {
    if (!comp_mesh || !comp_spacing || !background || !out)
        return fail_usage("msz_transfer_spacing: null argument");
    return guarded([&] {
        *out = new msz_spacing{
            transfer_spacing(comp_mesh->value, comp_spacing->value, background->value).spacing};
    });
}

msz_status msz_query_spacing(const msz_mesh* background, const msz_spacing* spacing, double x,
                             double y, double* out) {
    if (!background || !spacing || !out) return fail_usage("msz_query_spacing: null argument");
    return guarded([&] {
        const BackgroundMesh bg{background->value, spacing->value};
        *out = query_spacing(bg, Vec2{x, y});
    });
}

/* --- geometry ----------------------------------------------------------- */

msz_status msz_geometry_load(const char* path, msz_geometry** out) {
    if (!path || !out) return fail_usage("msz_geometry_load: null argument");
    return guarded([&] { *out = new msz_geometry{load_geometry(path)}; });
}

msz_status msz_geometry_save(const msz_geometry* geometry, const char* path) {
    if (!geometry || !path) return fail_usage("msz_geometry_save: null argument");
    return guarded([&] { save_geometry(geometry->value, path); });
}

void msz_geometry_free(msz_geometry* geometry) { delete geometry; }

msz_status msz_geometry_build(const double* offsets, size_t offset_count, double theta,
                              msz_geometry** out) {
    if (!offsets || !out) return fail_usage("msz_geometry_build: null argument");
    return guarded([&] {
        *out = new msz_geometry{
            build_aerofoil(std::span<const double>(offsets, offset_count), theta)};
    });
}

msz_status msz_geometry_eval(const msz_geometry* geometry, int curve, double lambda, int order,
                             double* x, double* y) {
    if (!geometry || !x || !y) return fail_usage("msz_geometry_eval: null argument");
    if (curve != 0 && curve != 1) return fail_usage("msz_geometry_eval: curve must be 0 or 1");
    return guarded([&] {
        const NurbsCurve& c = curve == 0 ? geometry->value.upper : geometry->value.lower;
        const Vec2 p = eval_curve(c, lambda, order);
        *x = p.x;
        *y = p.y;
    });
}

msz_status msz_mesh_morph(const msz_mesh* background, const msz_geometry* reference,
                          const msz_geometry* target, msz_mesh** out) {
    if (!background || !reference || !target || !out)
        return fail_usage("msz_mesh_morph: null argument");
    return guarded([&] {
        const WallParametrization wall =
            recover_wall_params(background->value, reference->value);
        *out = new msz_mesh{
            morph_background(background->value, wall, target->value, ElasticityConfig{})};
    });
}

/* --- neural model ------------------------------------------------------- */

msz_status msz_model_load(const char* path, msz_model** out) {
    if (!path || !out) return fail_usage("msz_model_load: null argument");
    return guarded([&] { *out = new msz_model{load_model(path)}; });
}

msz_status msz_model_save(const msz_model* model, const char* path) {
    if (!model || !path) return fail_usage("msz_model_save: null argument");
    return guarded([&] { save_model(model->value, path); });
}

void msz_model_free(msz_model* model) { delete model; }

long msz_model_input_count(const msz_model* model) {
    return model ? model->value.input_count() : -1;
}

long msz_model_output_count(const msz_model* model) {
    return model ? model->value.output_count() : -1;
}

msz_status msz_model_predict(const msz_model* model, const double* params, size_t param_count,
                             const msz_mesh* background, msz_spacing** out) {
    if (!model || !params || !background || !out)
        return fail_usage("msz_model_predict: null argument");
    return guarded([&] {
        const BackgroundMesh bg = predict_spacing(
            model->value, std::span<const double>(params, param_count), background->value);
        *out = new msz_spacing{bg.spacing};
    });
}

/* --- pipeline commands --------------------------------------------------- */

msz_status msz_run_command(const char* command, const char* config_json) {
    if (!command) return fail_usage("msz_run_command: null command");
    return guarded([&] { run_command(command, parse_config(config_json)); });
}

} /* extern "C" */
