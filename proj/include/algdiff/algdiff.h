/* algdiff: annihilator-based numerical differentiation of noisy signals
 * and the closed-loop estimation case studies built on it.
 *
 * C interface of the shared library. Handles are opaque; every function
 * that can fail returns an ad_status and leaves a human-readable message
 * in ad_last_error() (thread-local). */

#ifndef ALGDIFF_H
#define ALGDIFF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ad_status {
  AD_OK = 0,
  AD_EINVAL = 2,  /* invalid argument, configuration or input file */
  AD_ERUNTIME = 3 /* runtime failure (simulation abort, I/O error) */
} ad_status;

/* Message describing the most recent failure on this thread. */
const char* ad_last_error(void);

/* ---- window estimator ------------------------------------------------ */

typedef struct ad_kernel ad_kernel;

/* Builds the quadrature kernel estimating derivatives 0..taylor_order at
 * the start of a window of window_length seconds sampled every sample_step
 * seconds. integral_order <= 0 selects the default taylor_order + 2. */
ad_status ad_kernel_create(int taylor_order, int integral_order,
                           double window_length, double sample_step,
                           ad_kernel** out);
void ad_kernel_destroy(ad_kernel* kernel);

/* Number of samples one window holds (M + 1). */
int ad_kernel_sample_count(const ad_kernel* kernel);

/* Estimates derivatives 0..taylor_order at the window start from
 * sample_count values (oldest first). derivatives must hold
 * taylor_order + 1 doubles. */
ad_status ad_kernel_estimate(const ad_kernel* kernel, const double* samples,
                             size_t count, double* derivatives);

/* ---- streaming differentiator ---------------------------------------- */

typedef struct ad_stream ad_stream;

/* time_reversed nonzero: derivatives refer to the newest sample (zero
 * delay); zero: to the oldest sample of the window (delay = window). */
ad_status ad_stream_create(const ad_kernel* kernel, int time_reversed,
                           ad_stream** out);
void ad_stream_destroy(ad_stream* stream);

/* Feeds one sample. After warm-up *ready is set to 1 and derivatives
 * (taylor_order + 1 doubles) and *anchor_time are filled; during warm-up
 * *ready is 0 and outputs are untouched. */
ad_status ad_stream_push(ad_stream* stream, double t, double value,
                         double* derivatives, double* anchor_time, int* ready);

/* ---- file-level operations ------------------------------------------- */

/* Differentiates one column of a uniform-grid CSV file and writes the
 * anchor-aligned derivative channels d0..dN to out_path. Nonzero
 * fd_baseline adds a central-difference fd_d1 column. */
ad_status ad_diff_csv(const char* in_path, const char* column, int taylor_order,
                      int integral_order, double window, int time_reversed,
                      int fd_baseline, const char* out_path);

/* Runs a named scenario (manipulator, rigidbody, twotank, pertlin, pertnl)
 * and writes trace.csv, metrics.json and the figure SVGs to out_dir.
 *
 * config_json: optional JSON document (NULL for all defaults).
 * seed:        >= 0 overrides the config seed.
 * accommodation / compensation: 0 or 1 override the config toggle,
 *              -1 keeps it (they apply to twotank and pertlin/pertnl).
 * metrics_json: when non-NULL receives the metrics document; release it
 *              with ad_string_free. */
ad_status ad_simulate(const char* scenario, const char* config_json,
                      int64_t seed, int accommodation, int compensation,
                      const char* out_dir, char** metrics_json);

void ad_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ALGDIFF_H */
