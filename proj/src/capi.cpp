#include "algdiff/algdiff.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "core/kernel.hpp"
#include "core/streaming.hpp"
#include "io/config.hpp"
#include "sim/ode.hpp"

namespace {

thread_local std::string g_last_error;

ad_status fail(ad_status code, const std::string& what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
ad_status guarded(Fn&& fn) {
  try {
    fn();
    return AD_OK;
  } catch (const std::invalid_argument& e) {
    return fail(AD_EINVAL, e.what());
  } catch (const std::out_of_range& e) {
    return fail(AD_EINVAL, e.what());
  } catch (const algdiff::SimulationAbort& e) {
    return fail(AD_ERUNTIME, e.what());
  } catch (const std::exception& e) {
    return fail(AD_ERUNTIME, e.what());
  }
}

}  // namespace

struct ad_kernel {
  std::shared_ptr<const algdiff::EstimatorKernel> impl;
};

struct ad_stream {
  algdiff::StreamingDifferentiator impl;
};

extern "C" {

const char* ad_last_error(void) { return g_last_error.c_str(); }

ad_status ad_kernel_create(int taylor_order, int integral_order,
                           double window_length, double sample_step,
                           ad_kernel** out) {
  if (!out) return fail(AD_EINVAL, "out pointer is null");
  *out = nullptr;
  return guarded([&] {
    auto impl = std::make_shared<const algdiff::EstimatorKernel>(algdiff::EstimatorConfig{
        taylor_order, integral_order, window_length, sample_step});
    *out = new ad_kernel{std::move(impl)};
  });
}

void ad_kernel_destroy(ad_kernel* kernel) { delete kernel; }

int ad_kernel_sample_count(const ad_kernel* kernel) {
  return kernel ? kernel->impl->sample_count() : 0;
}

ad_status ad_kernel_estimate(const ad_kernel* kernel, const double* samples,
                             size_t count, double* derivatives) {
  if (!kernel || !samples || !derivatives)
    return fail(AD_EINVAL, "null argument");
  return guarded([&] {
    std::vector<double> buf(samples, samples + count);
    const auto est = kernel->impl->estimate(buf);
    std::memcpy(derivatives, est.values.data(), est.values.size() * sizeof(double));
  });
}

ad_status ad_stream_create(const ad_kernel* kernel, int time_reversed,
                           ad_stream** out) {
  if (!kernel || !out) return fail(AD_EINVAL, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new ad_stream{algdiff::StreamingDifferentiator(
        kernel->impl, time_reversed ? algdiff::StreamMode::time_reversed
                                    : algdiff::StreamMode::forward)};
  });
}

void ad_stream_destroy(ad_stream* stream) { delete stream; }

ad_status ad_stream_push(ad_stream* stream, double t, double value,
                         double* derivatives, double* anchor_time, int* ready) {
  if (!stream || !derivatives || !anchor_time || !ready)
    return fail(AD_EINVAL, "null argument");
  return guarded([&] {
    *ready = 0;
    if (auto est = stream->impl.push_sample(t, value)) {
      std::memcpy(derivatives, est->values.data(), est->values.size() * sizeof(double));
      *anchor_time = est->anchor_time;
      *ready = 1;
    }
  });
}

ad_status ad_diff_csv(const char* in_path, const char* column, int taylor_order,
                      int integral_order, double window, int time_reversed,
                      int fd_baseline, const char* out_path) {
  if (!in_path || !column || !out_path) return fail(AD_EINVAL, "null argument");
  return guarded([&] {
    algdiff::diff_csv(in_path, column, taylor_order, integral_order, window,
                      time_reversed != 0, fd_baseline != 0, out_path);
  });
}

ad_status ad_simulate(const char* scenario, const char* config_json,
                      int64_t seed, int accommodation, int compensation,
                      const char* out_dir, char** metrics_json) {
  if (!scenario || !out_dir) return fail(AD_EINVAL, "null argument");
  return guarded([&] {
    algdiff::SimulateOverrides ov;
    if (seed >= 0) ov.seed = static_cast<std::uint64_t>(seed);
    if (accommodation >= 0) ov.accommodation = accommodation != 0;
    if (compensation >= 0) ov.compensation = compensation != 0;
    const std::string metrics = algdiff::simulate_to_dir(
        scenario, config_json ? config_json : "", ov, out_dir);
    if (metrics_json) {
      *metrics_json = new char[metrics.size() + 1];
      std::memcpy(*metrics_json, metrics.c_str(), metrics.size() + 1);
    }
  });
}

void ad_string_free(char* s) { delete[] s; }

}  // extern "C"
