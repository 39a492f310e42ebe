/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface of the morrey-embed toolkit. All handles are opaque; every
 * call returns a status and leaves a message in morrey_last_error() on
 * failure. Strings returned through char** are owned by the caller and
 * released with morrey_string_free.
 */
#ifndef MORREY_MORREY_H
#define MORREY_MORREY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MORREY_API __declspec(dllexport)
#else
#define MORREY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum morrey_status {
  MORREY_OK = 0,
  MORREY_E_PARSE = 1,       /* config or weight grammar error */
  MORREY_E_DOMAIN = 2,      /* argument outside the mathematical domain */
  MORREY_E_UNSUPPORTED = 3, /* exponent region not covered */
  MORREY_E_DEGENERATE = 4,  /* space reduces to the zero function */
  MORREY_E_ARGUMENT = 5,    /* null pointer, bad index */
  MORREY_E_INTERNAL = 6
} morrey_status;

typedef enum morrey_task {
  MORREY_TASK_DEFAULT = -1, /* keep the scenario's own task */
  MORREY_TASK_CLASSIFY = 0,
  MORREY_TASK_EVALUATE = 1,
  MORREY_TASK_ORACLE = 2,
  MORREY_TASK_VERIFY = 3,
  MORREY_TASK_COMPLEMENTARY = 4
} morrey_task;

typedef struct morrey_config morrey_config;
typedef struct morrey_report morrey_report;
typedef struct morrey_batch morrey_batch;
typedef struct morrey_weight morrey_weight;

typedef struct morrey_run_options {
  int task;          /* morrey_task */
  int has_seed;
  uint64_t seed;
  double slack;      /* <= 0 keeps the scenario value */
  unsigned workers;  /* 0 = hardware concurrency */
} morrey_run_options;

MORREY_API const char* morrey_version(void);
/* Message of the last failed call on this thread, "" if none. */
MORREY_API const char* morrey_last_error(void);
MORREY_API void morrey_string_free(char* s);
MORREY_API morrey_run_options morrey_default_options(void);

/* Case tag of an exponent quadruple, e.g. "B_ii" or "Unsupported(p2>p1)". */
MORREY_API morrey_status morrey_classify(double p1, double p2, double q1, double q2, char** tag);

/* Weight grammar. */
MORREY_API morrey_status morrey_weight_parse(const char* text, morrey_weight** out);
MORREY_API morrey_status morrey_weight_eval(const morrey_weight* w, double t, double* out);
/* int_a^b w^r dt, b may be INFINITY; out is INFINITY when certified divergent. */
MORREY_API morrey_status morrey_weight_integrate(const morrey_weight* w, double r, double a, double b, double* out,
                                                 double* abs_error);
MORREY_API void morrey_weight_free(morrey_weight* w);

/* Scenario configs. */
MORREY_API morrey_status morrey_config_parse(const char* text, morrey_config** out);
MORREY_API morrey_status morrey_config_load(const char* path, morrey_config** out);
MORREY_API size_t morrey_config_count(const morrey_config* c);
MORREY_API morrey_status morrey_config_name(const morrey_config* c, size_t index, char** name);
MORREY_API void morrey_config_free(morrey_config* c);

/* Single scenario. */
MORREY_API morrey_status morrey_run(const morrey_config* c, size_t index, const morrey_run_options* opts,
                                    morrey_report** out);
/* Every scenario on a worker pool. */
MORREY_API morrey_status morrey_run_all(const morrey_config* c, const morrey_run_options* opts, morrey_batch** out);
MORREY_API size_t morrey_batch_count(const morrey_batch* b);
/* Borrowed pointer, valid until morrey_batch_free. */
MORREY_API const morrey_report* morrey_batch_report(const morrey_batch* b, size_t index);
/* Compares against the scenarios' stored baselines; text lists deviations. */
MORREY_API morrey_status morrey_batch_golden(const morrey_batch* b, int* passed, char** text);
MORREY_API void morrey_batch_free(morrey_batch* b);

/* Report accessors. */
MORREY_API int morrey_report_exit_code(const morrey_report* r);
MORREY_API morrey_status morrey_report_tag(const morrey_report* r, char** tag);
MORREY_API morrey_status morrey_report_name(const morrey_report* r, char** name);
/* NAN for quantities the task did not produce. */
MORREY_API morrey_status morrey_report_values(const morrey_report* r, double* i_total, double* oracle_l,
                                              double* ratio);
MORREY_API morrey_status morrey_report_json(const morrey_report* r, char** json);
MORREY_API morrey_status morrey_report_summary_row(const morrey_report* r, int omit_timing, char** row);
MORREY_API const char* morrey_summary_header(void);
MORREY_API void morrey_report_free(morrey_report* r);

#ifdef __cplusplus
}
#endif

#endif /* MORREY_MORREY_H */
