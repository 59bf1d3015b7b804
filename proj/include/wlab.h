/* wlab — semiclassical spectral laboratory, C ABI.
 *
 * Opaque handles + status codes over the C++ core. All strings returned
 * by accessor functions are owned by the handle they came from and stay
 * valid until that handle is freed. Errors set a thread-local message
 * retrievable via wlab_last_error().
 */
#ifndef WLAB_H
#define WLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct wlab_config wlab_config;
typedef struct wlab_result wlab_result;

/* Status codes mirror the CLI exit codes. */
typedef enum wlab_status {
  WLAB_OK = 0,
  WLAB_ERR_CONFIG = 2,  /* malformed or rejected configuration */
  WLAB_ERR_GATE = 3,    /* a numerical gate failed hard */
  WLAB_ERR_ASSERT = 4,  /* command ran but its acceptance check failed */
  WLAB_ERR_RUNTIME = 5  /* everything else */
} wlab_status;

const char* wlab_version(void);
/* last error message on this thread; empty string if none */
const char* wlab_last_error(void);

wlab_status wlab_config_parse(const char* json_text, wlab_config** out);
wlab_status wlab_config_load(const char* path, wlab_config** out);
void wlab_config_free(wlab_config* cfg);
/* canonical-form hash (stable under JSON key reordering) */
wlab_status wlab_config_hash(const wlab_config* cfg, uint64_t* out);
/* command-line overrides */
wlab_status wlab_config_set_threads(wlab_config* cfg, int threads);
wlab_status wlab_config_set_seed(wlab_config* cfg, uint64_t seed);

/* Runs one command against a config. Commands: "sweep", "weyl-term",
 * "mollify-rates", "quantize-check", "spectrum", "partition",
 * "tauberian-check", "report".
 * On WLAB_OK the result handle carries the artifacts; a result is also
 * returned when only the embedded acceptance check failed (status
 * WLAB_ERR_ASSERT) so the artifacts can still be inspected. */
wlab_status wlab_run(const wlab_config* cfg, const char* command,
                     wlab_result** out);

/* sweep records as CSV (exact column set, deterministic bytes) */
const char* wlab_result_csv(const wlab_result* res);
/* command-specific JSON report */
const char* wlab_result_json(const wlab_result* res);
/* run manifest: canonical config, hash, version, seed */
const char* wlab_result_manifest(const wlab_result* res);
/* 1 if the command's acceptance check passed, else 0 */
int wlab_result_passed(const wlab_result* res);
void wlab_result_free(wlab_result* res);

#ifdef __cplusplus
}
#endif

#endif /* WLAB_H */
