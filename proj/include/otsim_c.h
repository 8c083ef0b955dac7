/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright 2026 The otsim Authors */

/* C interface to the otsim simulator. Objects are opaque handles created
 * and destroyed through this API. Every fallible call returns an
 * ots_status; on failure ots_last_error() describes the problem (the
 * message is per thread and valid until the next failing call). Strings
 * returned through char** out-parameters are released with
 * ots_string_free(). */

#ifndef OTSIM_C_H
#define OTSIM_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(OTSIM_BUILDING_LIBRARY)
#define OTS_API __attribute__((visibility("default")))
#else
#define OTS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ots_status {
    OTS_OK = 0,
    OTS_ERR_INVALID_ARGUMENT = 1,
    OTS_ERR_PARSE = 2,
    OTS_ERR_IO = 3,
    OTS_ERR_IMAGE_HEADER = 4,
    OTS_ERR_IMAGE_TRUNCATED = 5,
    OTS_ERR_IMAGE_MAXVAL = 6,
    OTS_ERR_CONVERGENCE = 7,
    OTS_ERR_SINGULAR = 8,
    OTS_ERR_NON_FINITE = 9,
    OTS_ERR_CHECK_FAILED = 10,
    OTS_ERR_INTERNAL = 11
} ots_status;

typedef struct ots_config ots_config;
typedef struct ots_circuit ots_circuit;
typedef struct ots_trace ots_trace;

OTS_API const char* ots_version(void);
OTS_API const char* ots_last_error(void);
OTS_API const char* ots_status_name(ots_status s);
OTS_API void ots_string_free(char* s);

/* Number with an optional SI suffix (f p n u m k M G). */
OTS_API ots_status ots_parse_si(const char* text, double* value);

/* Run configuration: device, solver, encoding and pipeline settings. */
OTS_API ots_status ots_config_create(ots_config** out);
OTS_API void ots_config_destroy(ots_config* cfg);
OTS_API ots_status ots_config_set(ots_config* cfg, const char* key, const char* value);
OTS_API ots_status ots_config_load(ots_config* cfg, const char* path);

/* Circuits. Unspecified OTS parameters come from the config. */
OTS_API ots_status ots_circuit_load(const ots_config* cfg, const char* path, ots_circuit** out);
OTS_API ots_status ots_circuit_parse(const ots_config* cfg, const char* text, ots_circuit** out);
OTS_API ots_status ots_circuit_gate(const ots_config* cfg, const char* kind, ots_circuit** out);
OTS_API ots_status ots_circuit_oscillator(const ots_config* cfg, double vin, ots_circuit** out);
OTS_API void ots_circuit_destroy(ots_circuit* c);
OTS_API size_t ots_circuit_node_count(const ots_circuit* c);
OTS_API size_t ots_circuit_element_count(const ots_circuit* c);
OTS_API ots_status ots_circuit_format(const ots_config* cfg, const ots_circuit* c, char** text);

/* Transient simulation at the config's device timestep. */
OTS_API ots_status ots_transient(const ots_config* cfg, const ots_circuit* c, double t_stop, ots_trace** out);
OTS_API void ots_trace_destroy(ots_trace* t);
OTS_API size_t ots_trace_samples(const ots_trace* t);
OTS_API double ots_trace_dt(const ots_trace* t);
OTS_API double ots_trace_max_residual(const ots_trace* t);
OTS_API ots_status ots_trace_voltage(const ots_trace* t, const char* node, const double** data, size_t* n);
OTS_API ots_status ots_trace_write_csv(const ots_trace* t, const char* path);

/* Commands. Each writes its documented output file(s) and reports a
 * summary through out-parameters; NULL out-parameters are ignored. */

/* Triangle-ramp I-V sweep of the single OTS in `netlist_path` (NULL uses
 * the oscillator circuit). Writes `v,i` CSV. */
OTS_API ots_status ots_cmd_iv(const ots_config* cfg, const char* netlist_path, double peak, double rise,
                              const char* out_csv, int* snapback);

/* Oscillator at a DC bias; writes the trace CSV when out_csv is non-NULL. */
OTS_API ots_status ots_cmd_oscillate(const ots_config* cfg, double vin, double duration, const char* out_csv,
                                     size_t* spikes, double* rate_hz);

/* Rates over `steps` evenly spaced biases in [v0, v1]; writes
 * `v_in,rate_hz` CSV. */
OTS_API ots_status ots_cmd_oscillate_sweep(const ots_config* cfg, double v0, double v1, size_t steps,
                                           double duration, const char* out_csv, int* strictly_increasing);

/* Full truth table as JSON. */
OTS_API ots_status ots_cmd_gate_table(const ots_config* cfg, const char* kind, char** json, int* all_match);

/* Single row; optional waveform CSV of every node. */
OTS_API ots_status ots_cmd_gate_eval(const ots_config* cfg, const char* kind, const int* inputs, size_t n_inputs,
                                     const char* waveform_csv, char** json, int* match);

/* Edge map of a P5/P6 image written as P5. With oracle_check the software
 * reference is compared and, when report_json is given, a mismatch report
 * is written. */
OTS_API ots_status ots_cmd_edge(const ots_config* cfg, const char* in_path, const char* out_pgm, int oracle_check,
                                const char* report_json, size_t* mismatches, size_t* pixels);

/* Rate for each contrast difference; writes `delta_c,rate_hz` CSV and, when
 * fit is nonzero, appends the fit as comment lines. */
OTS_API ots_status ots_cmd_gradient(const ots_config* cfg, const int* delta_c, size_t n, const char* out_csv,
                                    int fit, double* slope, double* floor_c, double* r2);

/* Energy comparison for a width x height image with the OTS row projected
 * to `node_m`. Either output may be NULL. */
OTS_API ots_status ots_cmd_energy(const ots_config* cfg, uint64_t width, uint64_t height, double node_m,
                                  char** text, char** json);

/* Writes every built-in template as <dir>/<name>.net. */
OTS_API ots_status ots_seed_circuits(const ots_config* cfg, const char* dir);

#ifdef __cplusplus
}
#endif

#endif /* OTSIM_C_H */
