#include "mfcbf/mfcbf.h"

#include <cstring>
#include <limits>
#include <memory>
#include <string>

#include "mfcbf/bench.hpp"
#include "mfcbf/error.hpp"
#include "mfcbf/log_io.hpp"
#include "mfcbf/measure.hpp"
#include "mfcbf/scenario.hpp"
#include "mfcbf/sim.hpp"

struct mfcbf_scenario {
    mfcbf::ScenarioConfig config;
};

struct mfcbf_log {
    mfcbf::TrajectoryLog log;
};

struct mfcbf_bench {
    std::vector<mfcbf::BenchRow> rows;
};

namespace {

thread_local std::string g_last_error;

mfcbf_status fail(mfcbf_status code, std::string msg) {
    g_last_error = std::move(msg);
    return code;
}

template <typename F>
mfcbf_status guarded(F&& body) {
    g_last_error.clear();
    try {
        return body();
    } catch (const mfcbf::ValidationError& e) {
        return fail(MFCBF_ERR_VALIDATION, e.what());
    } catch (const mfcbf::IoError& e) {
        return fail(MFCBF_ERR_IO, e.what());
    } catch (const mfcbf::InvalidArgument& e) {
        return fail(MFCBF_ERR_INVALID_ARGUMENT, e.what());
    } catch (const mfcbf::DimensionError& e) {
        return fail(MFCBF_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MFCBF_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(MFCBF_ERR_RUNTIME, e.what());
    }
}

}  // namespace

extern "C" {

const char* mfcbf_last_error(void) { return g_last_error.c_str(); }

const char* mfcbf_version(void) { return "1.0.0"; }

mfcbf_status mfcbf_scenario_parse(const char* text, size_t length, mfcbf_scenario** out) {
    if (!text || !out) return fail(MFCBF_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<mfcbf_scenario>();
        h->config = mfcbf::parse_scenario(std::string_view(text, length));
        *out = h.release();
        return MFCBF_OK;
    });
}

mfcbf_status mfcbf_scenario_load(const char* path, mfcbf_scenario** out) {
    if (!path || !out) return fail(MFCBF_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<mfcbf_scenario>();
        h->config = mfcbf::load_scenario(path);
        *out = h.release();
        return MFCBF_OK;
    });
}

void mfcbf_scenario_free(mfcbf_scenario* scenario) { delete scenario; }

mfcbf_status mfcbf_scenario_to_json(const mfcbf_scenario* scenario, char** out) {
    if (!scenario || !out) return fail(MFCBF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const std::string s = mfcbf::scenario_to_json(scenario->config);
        char* buf = new char[s.size() + 1];
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *out = buf;
        return MFCBF_OK;
    });
}

const char* mfcbf_scenario_output_dir(const mfcbf_scenario* scenario) {
    return scenario ? scenario->config.output.dir.c_str() : nullptr;
}

void mfcbf_string_free(char* s) { delete[] s; }

mfcbf_status mfcbf_run(const mfcbf_scenario* scenario, mfcbf_log** out) {
    if (!scenario || !out) return fail(MFCBF_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<mfcbf_log>();
        h->log = mfcbf::run_scenario(scenario->config);
        const bool aborted = h->log.aborted.has_value();
        std::string reason = aborted ? *h->log.aborted : std::string();
        *out = h.release();
        return aborted ? fail(MFCBF_ERR_RUNTIME, "run aborted at " + reason) : MFCBF_OK;
    });
}

void mfcbf_log_free(mfcbf_log* log) { delete log; }

mfcbf_status mfcbf_log_write(const mfcbf_log* log, const char* dir) {
    if (!log || !dir) return fail(MFCBF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        mfcbf::write_log(log->log, dir);
        return MFCBF_OK;
    });
}

size_t mfcbf_log_step_count(const mfcbf_log* log) { return log ? log->log.records.size() : 0; }

int mfcbf_log_aborted(const mfcbf_log* log) { return log && log->log.aborted ? 1 : 0; }

double mfcbf_log_min_h(const mfcbf_log* log) {
    if (!log) return std::numeric_limits<double>::quiet_NaN();
    double h = log->log.aborted ? std::numeric_limits<double>::infinity() : log->log.final_h;
    for (const auto& r : log->log.records) h = std::min(h, r.h_value);
    return h;
}

size_t mfcbf_log_count_status(const mfcbf_log* log, const char* status) {
    if (!log || !status) return 0;
    size_t count = 0;
    for (const auto& r : log->log.records)
        if (std::strcmp(mfcbf::to_string(r.report.status), status) == 0) ++count;
    return count;
}

mfcbf_status mfcbf_bench_run(const mfcbf_scenario* scenario, const int* sizes, size_t count,
                             mfcbf_bench** out) {
    if (!scenario || !out || (!sizes && count > 0))
        return fail(MFCBF_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<mfcbf_bench>();
        h->rows = mfcbf::benchmark(scenario->config, std::vector<int>(sizes, sizes + count));
        *out = h.release();
        return MFCBF_OK;
    });
}

mfcbf_status mfcbf_bench_write_csv(const mfcbf_bench* bench, const char* path) {
    if (!bench || !path) return fail(MFCBF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        mfcbf::write_bench_csv(bench->rows, path);
        return MFCBF_OK;
    });
}

size_t mfcbf_bench_row_count(const mfcbf_bench* bench) { return bench ? bench->rows.size() : 0; }

void mfcbf_bench_free(mfcbf_bench* bench) { delete bench; }

mfcbf_status mfcbf_mmd_sq_half(int family, double bandwidth, size_t dim, const double* points,
                               size_t count, const double* targets, size_t target_count,
                               double* out) {
    if (!points || !targets || !out) return fail(MFCBF_ERR_INVALID_ARGUMENT, "null argument");
    if (family != 0 && family != 1) return fail(MFCBF_ERR_INVALID_ARGUMENT, "unknown kernel family");
    return guarded([&] {
        using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
        const auto d = static_cast<Eigen::Index>(dim);
        // Row-major (count x dim) is column-major (dim x count).
        const Mat x = Eigen::Map<const Mat>(points, d, static_cast<Eigen::Index>(count));
        const Mat y = Eigen::Map<const Mat>(targets, d, static_cast<Eigen::Index>(target_count));
        const mfcbf::KernelSpec k(family == 0 ? mfcbf::KernelFamily::gaussian
                                              : mfcbf::KernelFamily::inverse_multiquadric,
                                  bandwidth);
        *out = mfcbf::mmd_sq_half(k, mfcbf::EmpiricalMeasure(x), mfcbf::EmpiricalMeasure(y));
        return MFCBF_OK;
    });
}

}  // extern "C"
