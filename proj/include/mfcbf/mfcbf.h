/* C interface to the mean-field CBF library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call that can fail returns an mfcbf_status; on failure a description
 * is available from mfcbf_last_error() on the same thread until the next call.
 */
#ifndef MFCBF_MFCBF_H
#define MFCBF_MFCBF_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(MFCBF_BUILDING_LIBRARY)
#    define MFCBF_API __declspec(dllexport)
#  else
#    define MFCBF_API __declspec(dllimport)
#  endif
#else
#  define MFCBF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfcbf_status {
    MFCBF_OK = 0,
    MFCBF_ERR_INVALID_ARGUMENT = 1, /* null handle, bad size, out-of-domain parameter */
    MFCBF_ERR_VALIDATION = 2,       /* scenario document rejected */
    MFCBF_ERR_RUNTIME = 3,          /* numerical failure, aborted run */
    MFCBF_ERR_IO = 4
} mfcbf_status;

typedef struct mfcbf_scenario mfcbf_scenario;
typedef struct mfcbf_log mfcbf_log;
typedef struct mfcbf_bench mfcbf_bench;

MFCBF_API const char* mfcbf_last_error(void);
MFCBF_API const char* mfcbf_version(void);

/* Scenarios ------------------------------------------------------------- */

MFCBF_API mfcbf_status mfcbf_scenario_parse(const char* text, size_t length, mfcbf_scenario** out);
MFCBF_API mfcbf_status mfcbf_scenario_load(const char* path, mfcbf_scenario** out);
MFCBF_API void mfcbf_scenario_free(mfcbf_scenario* scenario);

/* Config echo as JSON. Release with mfcbf_string_free. */
MFCBF_API mfcbf_status mfcbf_scenario_to_json(const mfcbf_scenario* scenario, char** out);
MFCBF_API const char* mfcbf_scenario_output_dir(const mfcbf_scenario* scenario);
MFCBF_API void mfcbf_string_free(char* s);

/* Runs ------------------------------------------------------------------ */

/* A run that aborts still yields a log (with the steps completed so far) and
 * returns MFCBF_ERR_RUNTIME. */
MFCBF_API mfcbf_status mfcbf_run(const mfcbf_scenario* scenario, mfcbf_log** out);
MFCBF_API void mfcbf_log_free(mfcbf_log* log);

MFCBF_API mfcbf_status mfcbf_log_write(const mfcbf_log* log, const char* dir);
MFCBF_API size_t mfcbf_log_step_count(const mfcbf_log* log);
MFCBF_API int mfcbf_log_aborted(const mfcbf_log* log);
/* Smallest barrier value over the logged steps and the final state. */
MFCBF_API double mfcbf_log_min_h(const mfcbf_log* log);
MFCBF_API size_t mfcbf_log_count_status(const mfcbf_log* log, const char* status);

/* Benchmark ------------------------------------------------------------- */

MFCBF_API mfcbf_status mfcbf_bench_run(const mfcbf_scenario* scenario, const int* sizes,
                                       size_t count, mfcbf_bench** out);
MFCBF_API mfcbf_status mfcbf_bench_write_csv(const mfcbf_bench* bench, const char* path);
MFCBF_API size_t mfcbf_bench_row_count(const mfcbf_bench* bench);
MFCBF_API void mfcbf_bench_free(mfcbf_bench* bench);

/* Numerics -------------------------------------------------------------- */

/* Half squared MMD between two uniform-weight particle sets stored row-major
 * (count x dim). family: 0 gaussian, 1 inverse multiquadric. */
MFCBF_API mfcbf_status mfcbf_mmd_sq_half(int family, double bandwidth, size_t dim,
                                         const double* points, size_t count,
                                         const double* targets, size_t target_count,
                                         double* out);

#ifdef __cplusplus
}
#endif

#endif /* MFCBF_MFCBF_H */
