/* meshsizer C API: near-optimal mesh-spacing prediction for viscous-flow
 * meshes. All functions return msz_status; on failure msz_last_error()
 * holds a thread-local message. Handles are opaque and freed with their
 * msz_*_free function. */

#ifndef MESHSIZER_H
#define MESHSIZER_H

#include <stddef.h>

#if defined(_WIN32)
#define MSZ_API __declspec(dllexport)
#else
#define MSZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    MSZ_OK = 0,
    MSZ_ERR_USAGE = 1,   /* bad arguments or configuration */
    MSZ_ERR_IO = 2,      /* file access, parse, or validation failure */
    MSZ_ERR_NUMERIC = 3, /* numerical failure */
} msz_status;

typedef struct msz_mesh msz_mesh;
typedef struct msz_field msz_field;
typedef struct msz_spacing msz_spacing;
typedef struct msz_geometry msz_geometry;
typedef struct msz_model msz_model;

MSZ_API const char* msz_version(void);
/* Message of the last failing call on this thread; empty string if none. */
MSZ_API const char* msz_last_error(void);

/* --- meshes ------------------------------------------------------------ */
MSZ_API msz_status msz_mesh_load(const char* path, msz_mesh** out);
MSZ_API msz_status msz_mesh_save(const msz_mesh* mesh, const char* path);
MSZ_API void msz_mesh_free(msz_mesh* mesh);
MSZ_API long msz_mesh_node_count(const msz_mesh* mesh);
MSZ_API long msz_mesh_triangle_count(const msz_mesh* mesh);
MSZ_API long msz_mesh_quad_count(const msz_mesh* mesh);
/* delta_min/delta_max = shortest/longest element edge. */
MSZ_API msz_status msz_mesh_spacing_bounds(const msz_mesh* mesh, double* delta_min,
                                           double* delta_max);

/* Synthetic case from a JSON descriptor; any output pointer may be NULL. */
MSZ_API msz_status msz_synthesize(const char* descriptor_json, msz_mesh** mesh,
                                  msz_field** pressure, msz_field** mach);

/* --- nodal fields ------------------------------------------------------ */
MSZ_API msz_status msz_field_load(const char* path, msz_field** out);
MSZ_API msz_status msz_field_save(const msz_field* field, const char* path);
MSZ_API void msz_field_free(msz_field* field);
MSZ_API long msz_field_size(const msz_field* field);
MSZ_API msz_status msz_field_values(const msz_field* field, const double** values, size_t* count);

/* --- spacing fields ----------------------------------------------------- */
MSZ_API msz_status msz_spacing_load(const char* path, msz_spacing** out);
MSZ_API msz_status msz_spacing_save(const msz_spacing* spacing, const char* path);
MSZ_API void msz_spacing_free(msz_spacing* spacing);
MSZ_API long msz_spacing_size(const msz_spacing* spacing);
MSZ_API msz_status msz_spacing_values(const msz_spacing* spacing, const double** values,
                                      size_t* count);
MSZ_API msz_status msz_spacing_bounds(const msz_spacing* spacing, double* delta_min,
                                      double* delta_max);

/* Target spacing from nodal pressure and Mach fields. config_json may be
 * NULL or "{}" for the defaults (S = 0.2, fe_split recovery, smoothed
 * pressure + Mach key variables). */
MSZ_API msz_status msz_compute_spacing(const msz_mesh* mesh, const msz_field* pressure,
                                       const msz_field* mach, const char* config_json,
                                       msz_spacing** out);

/* Conservative transfer onto a background mesh. */
MSZ_API msz_status msz_transfer_spacing(const msz_mesh* comp_mesh, const msz_spacing* comp_spacing,
                                        const msz_mesh* background, msz_spacing** out);

/* Interpolated spacing at a point of the background mesh. */
MSZ_API msz_status msz_query_spacing(const msz_mesh* background, const msz_spacing* spacing,
                                     double x, double y, double* out);

/* --- geometry ----------------------------------------------------------- */
MSZ_API msz_status msz_geometry_load(const char* path, msz_geometry** out);
MSZ_API msz_status msz_geometry_save(const msz_geometry* geometry, const char* path);
MSZ_API void msz_geometry_free(msz_geometry* geometry);
/* offsets: 22 values in the canonical order; theta in [0.5, 1.5]. */
MSZ_API msz_status msz_geometry_build(const double* offsets, size_t offset_count, double theta,
                                      msz_geometry** out);
/* curve: 0 = upper, 1 = lower; order: 0 = point, 1 = first derivative. */
MSZ_API msz_status msz_geometry_eval(const msz_geometry* geometry, int curve, double lambda,
                                     int order, double* x, double* y);

/* Elastic morph of a background mesh from its reference geometry to a
 * target geometry. */
MSZ_API msz_status msz_mesh_morph(const msz_mesh* background, const msz_geometry* reference,
                                  const msz_geometry* target, msz_mesh** out);

/* --- neural model ------------------------------------------------------- */
MSZ_API msz_status msz_model_load(const char* path, msz_model** out);
MSZ_API msz_status msz_model_save(const msz_model* model, const char* path);
MSZ_API void msz_model_free(msz_model* model);
MSZ_API long msz_model_input_count(const msz_model* model);
MSZ_API long msz_model_output_count(const msz_model* model);
/* Denormalized nodal spacing prediction clamped to the training bounds. */
MSZ_API msz_status msz_model_predict(const msz_model* model, const double* params,
                                     size_t param_count, const msz_mesh* background,
                                     msz_spacing** out);

/* --- pipeline commands --------------------------------------------------
 * Each runs one CLI subcommand from a configuration JSON document and
 * returns the status that becomes the process exit code. */
MSZ_API msz_status msz_run_command(const char* command, const char* config_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MESHSIZER_H */
