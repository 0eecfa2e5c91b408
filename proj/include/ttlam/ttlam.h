/* C interface to the train-track lamination toolkit. */
#ifndef TTLAM_H
#define TTLAM_H

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define TTL_API __attribute__((visibility("default")))
#else
#define TTL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ttl_status {
  TTL_OK = 0,
  TTL_ERR_PARSE = 1,
  TTL_ERR_STRUCTURAL = 2,
  TTL_ERR_CONTRACT = 3,
  TTL_ERR_DEPTH_LIMIT = 4,
  TTL_ERR_ENUMERATION_LIMIT = 5,
  TTL_ERR_INVALID_TRACK = 6,
  TTL_ERR_INVALID_ARGUMENT = 7,
  TTL_ERR_INTERNAL = 8
} ttl_status;

typedef struct ttl_track ttl_track;
typedef struct ttl_lamination ttl_lamination;

TTL_API const char* ttl_version(void);

/* Details of the last failure on the calling thread. */
TTL_API const char* ttl_last_error(void);
TTL_API const char* ttl_last_error_code(void);
/* Lower bound carried by the last TTL_ERR_ENUMERATION_LIMIT. */
TTL_API uint64_t ttl_last_partial_count(void);

/* Every char* handed out by this library is released with ttl_string_free. */
TTL_API void ttl_string_free(char* s);

/* Bundled asset name or path to a .track file. */
TTL_API ttl_status ttl_track_load(const char* name_or_path, ttl_track** out);
TTL_API ttl_status ttl_track_parse(const char* text, const char* name, ttl_track** out);
TTL_API void ttl_track_free(ttl_track* t);
/* Newline-separated names of the bundled assets. */
TTL_API ttl_status ttl_bundled_tracks(char** out);
TTL_API ttl_status ttl_track_name(const ttl_track* t, char** out);
TTL_API ttl_status ttl_track_serialize(const ttl_track* t, char** out);
TTL_API ttl_status ttl_track_euler(const ttl_track* t, int* chi);
TTL_API ttl_status ttl_track_num_edges(const ttl_track* t, int* n);
TTL_API ttl_status ttl_track_num_cusps(const ttl_track* t, int* n);
TTL_API ttl_status ttl_track_weight_dimension(const ttl_track* t, int* dim);
/* One diagnostic per line; *valid is 1 when there are none. */
TTL_API ttl_status ttl_track_validate(const ttl_track* t, int* valid, char** report);
/* weights -> loops -> measured weights; *same is 1 on the identity. */
TTL_API ttl_status ttl_multicurve_roundtrip(const ttl_track* t, const int64_t* w, size_t n, int* same, size_t* loops);

/* Slope text such as "2/5" or "cf:[0;periodic:1]" on a torus-like track. */
TTL_API ttl_status ttl_lamination_from_slope(const ttl_track* t, const char* slope, ttl_lamination** out);
TTL_API ttl_status ttl_lamination_from_weights(const ttl_track* t, const int64_t* w, size_t n, ttl_lamination** out);
/* "w:3,2,..." for weights, anything else is read as a slope. */
TTL_API ttl_status ttl_lamination_parse(const ttl_track* t, const char* spec, ttl_lamination** out);
TTL_API void ttl_lamination_free(ttl_lamination* l);
/* One path per line, sorted. */
TTL_API ttl_status ttl_realized_paths(const ttl_lamination* l, int r, char** out);

typedef struct ttl_dtheta_result {
  int64_t num;
  int64_t den;
  int divergence_depth;
  int capped;
  int witness_side; /* 0 lhs, 1 rhs, -1 none */
  char* witness;    /* NULL when there is none */
} ttl_dtheta_result;

TTL_API ttl_status ttl_dtheta(const ttl_lamination* lhs, const ttl_lamination* rhs, int rmax, ttl_dtheta_result* out);
TTL_API double ttl_dlog_transform(double d);

typedef struct ttl_zipper_options {
  int r_max;
  uint64_t cap;
  int jobs;
  const ttl_lamination* const* census; /* may be NULL */
  size_t census_count;
} ttl_zipper_options;

/* CSV: r,zipper_families,bound_Z_rBounded,bound_Z_rBetter,census_size. On
   TTL_ERR_ENUMERATION_LIMIT the rows computed so far plus a flagged partial row are
   still returned. */
TTL_API ttl_status ttl_zipper_report(const ttl_track* t, const ttl_zipper_options* opt, char** out);

typedef enum ttl_schedule { TTL_SCHEDULE_EXP = 0, TTL_SCHEDULE_RECIP = 1 } ttl_schedule;

typedef struct ttl_dimension_options {
  int farey_order; /* <= 0: saturating order for r_max */
  int r_min;
  int r_max;
  ttl_schedule schedule;
  double a;
  double b;
  int fit_lo; /* 0: top half of the scales */
  int fit_hi;
  int jobs;
} ttl_dimension_options;

/* CSV r,eps,N,running_estimate, then a separate block with the fitted estimate. */
TTL_API ttl_status ttl_dimension_report(const ttl_track* t, const ttl_dimension_options* opt, char** out);

typedef struct ttl_metric_options {
  int farey_order;
  int r_max;
  int grid_steps;
  int jobs;
} ttl_metric_options;

/* CSV check,items,violations,worst_margin,passed. */
TTL_API ttl_status ttl_metriccheck_report(const ttl_track* t, const ttl_metric_options* opt, int* passed, char** out);

#ifdef __cplusplus
}
#endif

#endif
