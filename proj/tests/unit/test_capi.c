/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "mfcbf/mfcbf.h"

static int failures = 0;

#define EXPECT(cond)                                                      \
    do {                                                                  \
        if (!(cond)) {                                                    \
            fprintf(stderr, "%s:%d: EXPECT(%s) failed: %s\n", __FILE__,   \
                    __LINE__, #cond, mfcbf_last_error());                 \
            ++failures;                                                   \
        }                                                                 \
    } while (0)

static const char* kDoc =
    "{\"mode\": \"avoidance\", \"seed\": 1,"
    " \"dynamics\": {\"model\": \"single_integrator\", \"spatial_dim\": 2},"
    " \"horizon\": 0.2, \"dt\": 0.01,"
    " \"kernel\": {\"family\": \"gaussian\", \"bandwidth\": 1.0}, \"epsilon\": 0.3,"
    " \"swarm\": {\"count\": 5, \"placement\": {\"kind\": \"box\", \"lower\": [-1, -1], \"upper\": [1, 1]}},"
    " \"adversary\": {\"placement\": {\"kind\": \"explicit\", \"states\": [[-2, 0]]},"
    "   \"field\": {\"kind\": \"constant_velocity\", \"velocity\": [5, 0]}},"
    " \"pairwise\": {\"safe_distance\": 0.05},"
    " \"bench\": {\"steps\": 3},"
    " \"output\": {\"dir\": \"capi_out\", \"record_timing\": false}}";

int main(void) {
    mfcbf_scenario* sc = NULL;
    mfcbf_log* log = NULL;
    mfcbf_bench* bench = NULL;
    char* echo = NULL;

    EXPECT(strlen(mfcbf_version()) > 0);
    EXPECT(mfcbf_scenario_parse(NULL, 0, &sc) == MFCBF_ERR_INVALID_ARGUMENT);
    EXPECT(mfcbf_scenario_parse("{", 1, &sc) == MFCBF_ERR_VALIDATION);
    EXPECT(sc == NULL);
    EXPECT(strstr(mfcbf_last_error(), "line") != NULL);
    EXPECT(mfcbf_scenario_load("/nonexistent/x.json", &sc) == MFCBF_ERR_IO);

    EXPECT(mfcbf_scenario_parse(kDoc, strlen(kDoc), &sc) == MFCBF_OK);
    EXPECT(strcmp(mfcbf_scenario_output_dir(sc), "capi_out") == 0);
    EXPECT(mfcbf_scenario_to_json(sc, &echo) == MFCBF_OK);
    EXPECT(echo && strstr(echo, "\"avoidance\"") != NULL);
    mfcbf_string_free(echo);

    EXPECT(mfcbf_run(sc, &log) == MFCBF_OK);
    EXPECT(mfcbf_log_step_count(log) == 20);
    EXPECT(mfcbf_log_aborted(log) == 0);
    EXPECT(mfcbf_log_count_status(log, "nominal_safe") + mfcbf_log_count_status(log, "projected") +
               mfcbf_log_count_status(log, "infeasible") ==
           20);
    EXPECT(isfinite(mfcbf_log_min_h(log)));
    EXPECT(mfcbf_log_write(log, "capi_out") == MFCBF_OK);
    EXPECT(mfcbf_log_write(NULL, "capi_out") == MFCBF_ERR_INVALID_ARGUMENT);
    mfcbf_log_free(log);

    {
        const int sizes[] = {2, 4};
        const int unsorted[] = {4, 2};
        EXPECT(mfcbf_bench_run(sc, unsorted, 2, &bench) == MFCBF_ERR_VALIDATION);
        EXPECT(mfcbf_bench_run(sc, sizes, 2, &bench) == MFCBF_OK);
        EXPECT(mfcbf_bench_row_count(bench) == 2);
        EXPECT(mfcbf_bench_write_csv(bench, "capi_out/bench.csv") == MFCBF_OK);
        mfcbf_bench_free(bench);
    }
    mfcbf_scenario_free(sc);

    {
        const double x[] = {0.0, 0.0};
        const double y[] = {1.0, 1.0};
        double v = -1.0;
        EXPECT(mfcbf_mmd_sq_half(0, 1.0, 2, x, 1, y, 1, &v) == MFCBF_OK);
        EXPECT(fabs(v - (1.0 - exp(-1.0))) < 1e-15);
        EXPECT(mfcbf_mmd_sq_half(0, -1.0, 2, x, 1, y, 1, &v) == MFCBF_ERR_INVALID_ARGUMENT);
        EXPECT(mfcbf_mmd_sq_half(7, 1.0, 2, x, 1, y, 1, &v) == MFCBF_ERR_INVALID_ARGUMENT);
    }

    mfcbf_scenario_free(NULL);
    mfcbf_log_free(NULL);
    mfcbf_bench_free(NULL);

    if (failures) fprintf(stderr, "%d expectation(s) failed\n", failures);
    else printf("capi: all expectations passed\n");
    return failures ? 1 : 0;
}
