#ifndef ADRCWAVE_H
#define ADRCWAVE_H

#include <stddef.h>

#if defined(ADRCWAVE_BUILDING_LIBRARY)
#define ADRCWAVE_API __attribute__((visibility("default")))
#else
#define ADRCWAVE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Outcome classes. The numeric values of the first three double as CLI exit codes. */
typedef enum awc_status {
    AWC_OK = 0,
    AWC_ERR_CONFIG = 1,
    AWC_ERR_DIVERGED = 2,
    AWC_ERR_IO = 3,
    AWC_ERR_INVALID_ARGUMENT = 4,
    AWC_ERR_VERIFY_FAILED = 5,
    AWC_ERR_INTERNAL = 6
} awc_status;

typedef struct awc_config awc_config;
typedef struct awc_run awc_run;

ADRCWAVE_API const char* awc_status_string(awc_status status);

/* Message of the most recent failure on the calling thread ("" if none). */
ADRCWAVE_API const char* awc_last_error(void);

/* ---- scenario configuration ---- */

ADRCWAVE_API awc_status awc_config_create(awc_config** out);
ADRCWAVE_API awc_config* awc_config_clone(const awc_config* cfg);
ADRCWAVE_API void awc_config_destroy(awc_config* cfg);

/* Reads a `[section]` / `key = value` document from disk or from memory. */
ADRCWAVE_API awc_status awc_config_load(awc_config* cfg, const char* path);
ADRCWAVE_API awc_status awc_config_parse(awc_config* cfg, const char* text);

/* Sets one option, e.g. key "controller.c3", value "2". */
ADRCWAVE_API awc_status awc_config_set(awc_config* cfg, const char* key, const char* value);

/* String getters copy at most `cap` bytes (NUL-terminated) and report the full
 * length, excluding the terminator, through `needed` when it is non-NULL. */
ADRCWAVE_API awc_status awc_config_get(const awc_config* cfg, const char* key, char* buf, size_t cap,
                                       size_t* needed);
ADRCWAVE_API awc_status awc_config_echo(const awc_config* cfg, char* buf, size_t cap, size_t* needed);

/* Checks every parameter constraint; AWC_ERR_CONFIG names the offending one. */
ADRCWAVE_API awc_status awc_config_validate(const awc_config* cfg);

/* Sweep grid read from the document's [sweep] section. */
ADRCWAVE_API size_t awc_config_sweep_count(const awc_config* cfg);
ADRCWAVE_API awc_status awc_config_sweep_entry(const awc_config* cfg, size_t index, char* key, size_t key_cap,
                                               char* values, size_t values_cap);

/* ---- runs ---- */

/* Runs a scenario. On AWC_OK or AWC_ERR_DIVERGED a run handle is returned;
 * a diverged run holds every row produced before the failure. */
ADRCWAVE_API awc_status awc_run_execute(const awc_config* cfg, awc_run** out);
ADRCWAVE_API void awc_run_destroy(awc_run* run);

ADRCWAVE_API int awc_run_diverged(const awc_run* run);
ADRCWAVE_API size_t awc_run_row_count(const awc_run* run);
ADRCWAVE_API size_t awc_run_column_count(void);
ADRCWAVE_API const char* awc_run_column_name(size_t column);
ADRCWAVE_API awc_status awc_run_row(const awc_run* run, size_t row, double* out, size_t cap);

/* Fitted slope of log(column) over [t0, t1]; negative means decay. */
ADRCWAVE_API awc_status awc_run_fit_slope(const awc_run* run, const char* column, double t0, double t1,
                                          double* slope);

ADRCWAVE_API awc_status awc_run_summary(const awc_run* run, char* buf, size_t cap, size_t* needed);
ADRCWAVE_API awc_status awc_run_write_bundle(const awc_run* run, const char* dir);

/* ---- stored bundles ---- */

/* AWC_OK when every check passes, AWC_ERR_VERIFY_FAILED otherwise; the
 * pass/fail ledger is copied into `report`. */
ADRCWAVE_API awc_status awc_verify_bundle(const char* dir, char* report, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
