#ifndef BOUNDOPT_BOUNDOPT_H
#define BOUNDOPT_BOUNDOPT_H

/* C interface to the boundopt optimization library. All entry points are
 * thread-safe; error messages are thread-local and refer to the most recent
 * failing call on the same thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BND_API __declspec(dllexport)
#else
#define BND_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bnd_status {
  BND_OK = 0,
  BND_ERR_CONFIG = 1,  /* bad config file, key, value, or sweep grid */
  BND_ERR_INVALID = 2, /* bad argument to the call itself */
  BND_ERR_RUNTIME = 3, /* failure while running (non-finite loss, ...) */
  BND_ERR_IO = 4       /* file could not be read or written */
} bnd_status;

/* Message for the most recent failure on this thread; never NULL. */
BND_API const char* bnd_last_error(void);

BND_API const char* bnd_version(void);

/* ---- configuration ------------------------------------------------- */

/* Flat dotted-key configuration with built-in defaults. Precedence is
 * defaults < loaded file < bnd_config_set calls, in call order. */
typedef struct bnd_config bnd_config;

BND_API bnd_config* bnd_config_create(void);
BND_API void bnd_config_destroy(bnd_config* cfg);

BND_API bnd_status bnd_config_load_file(bnd_config* cfg, const char* path);
BND_API bnd_status bnd_config_set(bnd_config* cfg, const char* key, const char* value);

/* Copies the stored value for key into buf (NUL-terminated). */
BND_API bnd_status bnd_config_get(const bnd_config* cfg, const char* key, char* buf, size_t cap);

/* 16 lowercase hex digits identifying the full canonical config text. */
BND_API bnd_status bnd_config_hash(const bnd_config* cfg, char* buf, size_t cap);

/* ---- experiments ---------------------------------------------------- */

typedef struct bnd_run_stats {
  int64_t steps;
  double final_loss;
  double final_regret;
  double final_avg_regret;
  double final_x_norm;
} bnd_run_stats;

/* Runs one experiment per cfg. trace_path NULL or empty skips the trace
 * file; stats may be NULL. */
BND_API bnd_status bnd_run(const bnd_config* cfg, const char* trace_path, bnd_run_stats* stats);

/* Runs the cartesian sweep described by cfg's sweep.grid. Per-point traces
 * land in out_dir; the summary CSV is written to summary_path. Failures of
 * individual points are recorded in the summary, not fatal. */
BND_API bnd_status bnd_sweep(const bnd_config* cfg, const char* out_dir, const char* summary_path);

/* ---- acceptance checks ---------------------------------------------- */

/* Called once per elementary check. passed is 0 or 1. */
typedef void (*bnd_check_cb)(void* user, int criterion, const char* suite, const char* name,
                             int passed, const char* detail);

/* Runs one named acceptance suite, or all of them when suite is NULL or
 * empty. *failures (may be NULL) receives the number of failed checks. */
BND_API bnd_status bnd_verify(const char* suite, bnd_check_cb cb, void* user, int64_t* failures);

/* ---- derivations and trace utilities -------------------------------- */

/* Smallest adversarial cycle length for the given betas. theorem is 1 or 2;
 * beta1 is ignored for theorem 1. */
BND_API bnd_status bnd_derive_cycle(int theorem, double beta1, double beta2, int64_t* cycle);

/* Re-emits the t,lr_min,lr_median,lr_max columns of a stored trace CSV. */
BND_API bnd_status bnd_export_lr(const char* trace_path, const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BOUNDOPT_BOUNDOPT_H */
