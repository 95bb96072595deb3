/* C interface to the delone library. All functions return a status code;
 * results come back through out-parameters. Strings returned through
 * char** are owned by the caller and released with delone_free_string. */
#ifndef DELONE_DELONE_H
#define DELONE_DELONE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DELONE_API __declspec(dllexport)
#else
#define DELONE_API __attribute__((visibility("default")))
#endif

enum delone_status {
  DELONE_OK = 0,
  DELONE_EDOMAIN = 1, /* input well formed but the computation cannot proceed */
  DELONE_EUSAGE = 2   /* bad argument */
};

typedef struct delone_pointset delone_pointset;
typedef struct delone_rule delone_rule;
typedef struct delone_tiles delone_tiles;

/* Message of the last failure on this thread, "" if none. */
DELONE_API const char* delone_last_error(void);
DELONE_API const char* delone_version(void);
DELONE_API void delone_free_string(char* s);

/* ---- point sets ---- */

/* generator: {"kind": "integer-lattice"|"two-adic"|"two-adic-punctured"|"bohr"|
 *             "decorated-tiling"|"half-line-defect", "dim", "rule", "level", "exact", "trig"}
 * window: {"dim", "lo": [...], "hi": [...]} */
DELONE_API int delone_pointset_generate(const char* generator_json, const char* window_json, delone_pointset** out);
DELONE_API int delone_pointset_from_json(const char* json, delone_pointset** out);
DELONE_API int delone_pointset_to_json(const delone_pointset* p, char** out);
DELONE_API int delone_pointset_size(const delone_pointset* p, size_t* n);
DELONE_API int delone_pointset_dim(const delone_pointset* p, int* dim);
/* P + (x, y), and the rotation by theta about the origin. */
DELONE_API int delone_pointset_translate(const delone_pointset* p, double x, double y, delone_pointset** out);
DELONE_API int delone_pointset_rotate(const delone_pointset* p, double theta, delone_pointset** out);
DELONE_API void delone_pointset_free(delone_pointset* p);

/* ---- metrics ---- */

DELONE_API int delone_metric_lr(const delone_pointset* a, const delone_pointset* b, double* value,
                                int* window_limited);
DELONE_API int delone_metric_lm(const delone_pointset* a, const delone_pointset* b, double* lower, double* upper,
                                int* certified);
/* Pattern deviation on the closed ball of the given center and radius. */
DELONE_API int delone_metric_v(const delone_pointset* a, const delone_pointset* b, double cx, double cy,
                               double radius, double* value);
DELONE_API int delone_metric_wiggle(const delone_pointset* a, const delone_pointset* b, double cx, double cy,
                                    double radius, double step, double* upper, double* lower, double* theta,
                                    double* theta_prime);

/* ---- substitution rules and tile packings ---- */

DELONE_API int delone_rule_builtin(const char* name, delone_rule** out);
DELONE_API int delone_rule_from_json(const char* json, delone_rule** out);
DELONE_API int delone_rule_to_json(const delone_rule* r, char** out);
/* Verification, matrix, primitivity, expansion and an orientation witness. */
DELONE_API int delone_rule_report(const delone_rule* r, int max_order, char** out_json);
DELONE_API void delone_rule_free(delone_rule* r);

/* sigma^level of the prototile of the given type. */
DELONE_API int delone_tiles_supertile(const delone_rule* r, int type, int level, delone_tiles** out);
DELONE_API int delone_tiles_substitute(const delone_rule* r, const delone_tiles* t, int times, delone_tiles** out);
DELONE_API int delone_tiles_from_json(const char* json, delone_tiles** out);
DELONE_API int delone_tiles_to_json(const delone_rule* r, const delone_tiles* t, char** out);
DELONE_API int delone_tiles_count(const delone_tiles* t, size_t* n);
DELONE_API void delone_tiles_free(delone_tiles* t);

/* ---- decoration ---- */

DELONE_API int delone_decorate(const delone_rule* r, const delone_tiles* t, delone_pointset** out);
DELONE_API int delone_undecorate(const delone_rule* r, const delone_pointset* p, delone_tiles** out);

/* ---- repetitivity ----
 * options: {"r_centers", "big_centers", "seed", "wiggle",
 *           "sample_region": box, "r_center_list": [[x,y]...], "big_center_list"} */

/* config: {"eps", "mode": "LR"|"V", "ball": {"center": [x,y], "radius"},
 *          "grid": {"lo", "hi", "step"} integer range times step, "region": box} */
DELONE_API int delone_repet_period(const delone_pointset* p, const char* config_json, char** out_json);
DELONE_API int delone_repet_radius(const delone_pointset* p, double r, double eps, const char* options_json,
                                   char** out_json);
DELONE_API int delone_repet_curve(const delone_pointset* p, const double* rs, size_t nr, const double* epss,
                                  size_t ne, const char* options_json, char** out_json, char** out_csv);

/* ---- ergodic averages ----
 * weight: {"kind": "smoothed-count"|"constant", "window", "bump", "constant"} */

DELONE_API int delone_ergodic_density(const delone_pointset* p, const char* weight_json, const double* us, size_t nu,
                                      size_t samples, uint64_t seed, char** out_json, char** out_csv);
DELONE_API int delone_ergodic_birkhoff(const delone_pointset* p, const char* weight_json, double n,
                                       const double* angles, size_t na, double* value);
/* box: {"dim", "lo": [exact...], "hi": [exact...]}, u and w exact scalars. */
DELONE_API int delone_ergodic_decompose(const char* box_json, const char* u_json, const char* w_json,
                                        char** out_json);

/* ---- output ---- */

/* style: {"width", "stroke", "point_radius", "view": box, "orientation_buckets"} */
DELONE_API int delone_render_pointset_svg(const delone_pointset* p, const char* style_json, char** out);
DELONE_API int delone_render_tiles_svg(const delone_rule* r, const delone_tiles* t, const char* style_json,
                                       char** out);

/* Git blob id (SHA-1 hex) of the bytes. */
DELONE_API int delone_content_hash(const char* data, size_t len, char** out);
/* Temp file in the same directory, then rename. */
DELONE_API int delone_write_file(const char* path, const char* data, size_t len);

#ifdef __cplusplus
}
#endif

#endif
