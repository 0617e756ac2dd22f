#ifndef RVM_RVM_H
#define RVM_RVM_H

/* C interface to the 1.5D relativistic Vlasov-Maxwell solver.  All entry
 * points return rvm_status; on any failure rvm_last_error() carries a
 * thread-local description.  Strings returned through out-parameters are
 * heap-allocated and must be released with rvm_string_free(). */

#ifdef _WIN32
#define RVM_API __declspec(dllexport)
#else
#define RVM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rvm_status {
  RVM_OK = 0,
  RVM_CHECK_FAILURE = 1,     /* stored artifacts inconsistent with recompute */
  RVM_INVALID_CONFIG = 2,    /* configuration violates a hypothesis */
  RVM_RUNTIME_VIOLATION = 3, /* a certified bound failed during a run */
  RVM_IO_ERROR = 4           /* missing or corrupt artifact */
} rvm_status;

typedef struct rvm_config rvm_config;

RVM_API const char* rvm_version(void);

/* Last failure description for the calling thread ("" when none). */
RVM_API const char* rvm_last_error(void);

/* Caps worker parallelism; 0 restores automatic selection. */
RVM_API void rvm_set_threads(int n);

RVM_API rvm_status rvm_config_load(const char* path, rvm_config** out);
RVM_API rvm_status rvm_config_from_json(const char* text, rvm_config** out);
/* Applies one "dotted.path=value" override. */
RVM_API rvm_status rvm_config_override(rvm_config* cfg, const char* assignment);
RVM_API rvm_status rvm_config_set_output_dir(rvm_config* cfg, const char* dir);
RVM_API rvm_status rvm_config_validate(const rvm_config* cfg);
RVM_API rvm_status rvm_config_serialize(const rvm_config* cfg, char** json_out);
RVM_API void rvm_config_free(rvm_config* cfg);

/* A-priori constants for the configuration as JSON (validates first). */
RVM_API rvm_status rvm_constants_json(const rvm_config* cfg, char** json_out);

/* Runs the configured solver and writes the artifact set into the config's
 * output directory.  On success *summary_out (optional) receives a one-line
 * JSON summary.  A diagnostic violation aborts the run, writes a failure
 * manifest, and returns RVM_RUNTIME_VIOLATION. */
RVM_API rvm_status rvm_run(const rvm_config* cfg, char** summary_out);

/* Offline re-verification of a run directory; *report_out (optional)
 * receives the verdict detail. */
RVM_API rvm_status rvm_check_directory(const char* dir, char** report_out);

RVM_API void rvm_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RVM_RVM_H */
