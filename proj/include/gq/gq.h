#ifndef GQ_GQ_H
#define GQ_GQ_H

/*
 * C interface to the Gersho quantizer library. All objects are opaque
 * handles owned by the caller and released with the matching *_free call.
 * Every fallible call returns a gq_status; on failure gq_last_error()
 * describes the problem for the calling thread. Strings returned through
 * char** out-parameters are released with gq_string_free.
 */

#include <stddef.h>

#if defined(_WIN32)
#if defined(GQ_BUILDING_LIBRARY)
#define GQ_API __declspec(dllexport)
#else
#define GQ_API __declspec(dllimport)
#endif
#else
#define GQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gq_status {
    GQ_OK = 0,
    GQ_ERR_INVALID_ARGUMENT = 1,
    GQ_ERR_INVALID_INTERVAL = 2,
    GQ_ERR_QUADRATURE = 3,
    GQ_ERR_EMPTY_CELL = 4,
    GQ_ERR_TARGET_TOO_LARGE = 5,
    GQ_ERR_INVALID_TARGET = 6,
    GQ_ERR_CONSTRUCTION = 7,
    GQ_ERR_DEGENERATE_CELL = 8,
    GQ_ERR_INFINITE_ZADOR = 9,
    GQ_ERR_PARSE = 10,
    GQ_ERR_IO = 11,
    GQ_ERR_INTERNAL = 12
} gq_status;

typedef enum gq_method {
    GQ_METHOD_GERSHO = 0,   /* outer bisection on the per-cell moment */
    GQ_METHOD_DOUBLING = 1, /* n must be a power of two */
    GQ_METHOD_LLOYD = 2
} gq_method;

typedef struct gq_model gq_model;
typedef struct gq_config gq_config;
typedef struct gq_quantizer gq_quantizer;
typedef struct gq_report gq_report;
typedef struct gq_table gq_table;

typedef struct gq_verification {
    int g1, g2, g3, g4;
    int voronoi;
    double distortion;
    double per_cell_spread;
    double max_center_offset;
} gq_verification;

typedef struct gq_convergence_row {
    int n;
    double distortion;
    double scaled;
    double ratio;
    double rate;
    int failed;
    double seconds;
} gq_convergence_row;

GQ_API const char* gq_version(void);
GQ_API const char* gq_status_string(gq_status status);
/* Message of the last failed call on this thread; empty when none. */
GQ_API const char* gq_last_error(void);
GQ_API void gq_string_free(char* s);

/* Models: "uniform:lo,hi", "gauss:mean,sd", "laplace:loc,scale", "exp:rate",
 * "powertail:exponent,cutoff", "tabulated:<csv path>". */
GQ_API gq_status gq_model_parse(const char* spec, gq_model** out);
GQ_API void gq_model_free(gq_model* model);
GQ_API gq_status gq_model_pdf(const gq_model* model, double x, double* out);
GQ_API gq_status gq_model_mass(const gq_model* model, double a, double b, double* out);
GQ_API gq_status gq_model_support(const gq_model* model, double* lo, double* hi);
GQ_API int gq_model_interval_support(const gq_model* model);

GQ_API gq_status gq_config_new(gq_config** out);
GQ_API void gq_config_free(gq_config* cfg);
GQ_API gq_status gq_config_set(gq_config* cfg, const char* key, double value);
/* JSON object of key/value overrides. */
GQ_API gq_status gq_config_load_file(gq_config* cfg, const char* path);

/* cfg may be NULL for defaults. report may be NULL. */
GQ_API gq_status gq_build(const gq_model* model, int n, double r, gq_method method, const gq_config* cfg,
                          gq_quantizer** quantizer, gq_report** report);
/* Uniform(0,1) fixture with an eps/n first cell and n - 1 equal cells. */
GQ_API gq_status gq_counterexample(int n, double eps, double r, gq_quantizer** out);

GQ_API void gq_quantizer_free(gq_quantizer* q);
GQ_API int gq_quantizer_level(const gq_quantizer* q);
GQ_API double gq_quantizer_order(const gq_quantizer* q);
GQ_API double gq_quantizer_distortion(const gq_quantizer* q);
/* Copy up to `capacity` values; returns the full count. */
GQ_API size_t gq_quantizer_boundaries(const gq_quantizer* q, double* buf, size_t capacity);
GQ_API size_t gq_quantizer_codepoints(const gq_quantizer* q, double* buf, size_t capacity);
GQ_API size_t gq_quantizer_cell_moments(const gq_quantizer* q, double* buf, size_t capacity);
GQ_API gq_status gq_quantizer_to_json(const gq_quantizer* q, char** out);
/* model may be NULL; when given, outer cells are clipped to its support. */
GQ_API gq_status gq_quantizer_from_json(const char* json, const gq_model* model, gq_quantizer** out);

GQ_API void gq_report_free(gq_report* report);
GQ_API double gq_report_spread(const gq_report* report);
GQ_API gq_status gq_report_to_json(const gq_report* report, char** out);

/* moments_buf may be NULL; receives up to `capacity` per-cell moments. */
GQ_API gq_status gq_verify(const gq_model* model, const gq_quantizer* q, double tol, const gq_config* cfg,
                           gq_verification* out, double* moments_buf, size_t capacity);

GQ_API gq_status gq_zador_constant(const gq_model* model, double r, const gq_config* cfg, double* out);

/* Only GQ_METHOD_GERSHO and GQ_METHOD_LLOYD are accepted. */
GQ_API gq_status gq_convergence(const gq_model* model, double r, const int* levels, size_t count, gq_method method,
                                const gq_config* cfg, int jobs, gq_table** out);
GQ_API void gq_table_free(gq_table* table);
GQ_API size_t gq_table_size(const gq_table* table);
GQ_API gq_status gq_table_row(const gq_table* table, size_t index, gq_convergence_row* out);
/* Returns 1 and writes C0 when finite, 0 otherwise. */
GQ_API int gq_table_zador(const gq_table* table, double* out);
GQ_API gq_status gq_table_csv(const gq_table* table, int with_rate, char** out);
/* Diagnostics CSV over the table's levels for the compact interval [lo, hi]. */
GQ_API gq_status gq_table_diagnostics_csv(const gq_table* table, const gq_model* model, double lo, double hi,
                                          const gq_config* cfg, char** out);

#ifdef __cplusplus
}
#endif

#endif /* GQ_GQ_H */
