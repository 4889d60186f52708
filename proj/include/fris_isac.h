/* SPDX-License-Identifier: Apache-2.0 */
#ifndef FRIS_ISAC_H
#define FRIS_ISAC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque configuration handle (system parameters + experiment spec). */
typedef struct fris_config fris_config;

/* Error codes. FRIS_ERR_CONFIG and FRIS_ERR_SOLVER double as process exit
 * codes 1 and 2 of the CLI. */
enum {
    FRIS_OK = 0,
    FRIS_ERR_CONFIG = 1,  /* parse/validation failure */
    FRIS_ERR_SOLVER = 2,  /* numerical solver failure at run time */
    FRIS_ERR_INVALID_ARG = 3
};

const char* fris_version(void);
const char* fris_strerror(int code);

/* Every fallible call fills errbuf (NUL-terminated, truncated to errbuf_len)
 * with a human-readable message on failure; errbuf may be NULL. */

int fris_config_load(const char* path, fris_config** out,
                     char* errbuf, size_t errbuf_len);
int fris_config_parse(const char* json_text, fris_config** out,
                      char* errbuf, size_t errbuf_len);
void fris_config_free(fris_config* cfg);

/* Optional overrides applied after load/parse. */
int fris_config_set_experiment(fris_config* cfg, const char* kind,
                               char* errbuf, size_t errbuf_len);
int fris_config_set_schemes(fris_config* cfg, const char* comma_list,
                            char* errbuf, size_t errbuf_len);
int fris_config_set_trials(fris_config* cfg, int trials,
                           char* errbuf, size_t errbuf_len);
int fris_config_set_seed(fris_config* cfg, uint64_t seed);
int fris_config_set_out_dir(fris_config* cfg, const char* dir,
                            char* errbuf, size_t errbuf_len);

int fris_config_validate(const fris_config* cfg, char* errbuf, size_t errbuf_len);
uint64_t fris_config_hash(const fris_config* cfg);

/* Runs the configured experiment; writes <experiment>.csv and manifest.json
 * into the configured output directory. threads <= 0 means one thread. */
int fris_run(const fris_config* cfg, int threads, char* errbuf, size_t errbuf_len);

#ifdef __cplusplus
}
#endif

#endif /* FRIS_ISAC_H */
