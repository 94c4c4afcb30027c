/* C API for the RENT feature-selection engine.
 *
 * All engine functionality is reachable through opaque handles and status
 * codes, so the library can be consumed from C, via FFI, or by tools that
 * must not depend on the C++ ABI. Functions return RENT_OK on success; on
 * failure they return a status code and leave a message retrievable with
 * rent_last_error() (thread-local).
 *
 * Every handle returned by a *_create / *_load / rent_run_* call must be
 * released with the matching *_destroy.
 */
#ifndef RENT_C_H
#define RENT_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rent_status {
  RENT_OK = 0,
  RENT_ERR_INVALID_ARGUMENT = 1, /* bad input or contract violation */
  RENT_ERR_IO = 2,               /* missing or unwritable file */
  RENT_ERR_RUNTIME = 3,          /* pipeline failure (see rent_last_error) */
  RENT_ERR_NULL_HANDLE = 4
} rent_status;

typedef struct rent_config rent_config;
typedef struct rent_dataset rent_dataset;
typedef struct rent_report rent_report;

const char* rent_version(void);

/* Message of the most recent failure on this thread; empty string if none. */
const char* rent_last_error(void);

/* ---- configuration ---- */

rent_config* rent_config_create(void);

/* Merges a key/value config file (see README for the grammar). */
rent_status rent_config_load(rent_config* cfg, const char* path);

/* Sets one key, same names and value syntax as the config file. */
rent_status rent_config_set(rent_config* cfg, const char* key, const char* value);

void rent_config_destroy(rent_config* cfg);

/* ---- datasets ---- */

/* task is "classification" or "regression". */
rent_status rent_dataset_load_csv(const char* path, const char* target_column,
                                  const char* task, rent_dataset** out);

rent_status rent_dataset_synthesize(const char* task, int n_objects, int n_features,
                                    int n_informative, double noise, uint64_t seed,
                                    rent_dataset** out);

rent_status rent_dataset_dims(const rent_dataset* data, int* n_objects, int* n_features);

rent_status rent_dataset_save_csv(const rent_dataset* data, const char* path);

void rent_dataset_destroy(rent_dataset* data);

/* ---- pipeline runs ----
 * Each run writes its artifact files into the configured out_dir and yields
 * a report handle whose content is the run report as a JSON document.
 */

rent_status rent_run_select(const rent_config* cfg, rent_report** out);
rent_status rent_run_stability(const rent_config* cfg, rent_report** out);
rent_status rent_run_validate(const rent_config* cfg, rent_report** out);
rent_status rent_run_posthoc(const rent_config* cfg, rent_report** out);
rent_status rent_run_synth(const rent_config* cfg, rent_report** out);

/* JSON text owned by the report handle; valid until the handle is destroyed. */
const char* rent_report_json(const rent_report* report);

void rent_report_destroy(rent_report* report);

#ifdef __cplusplus
}
#endif

#endif /* RENT_C_H */
