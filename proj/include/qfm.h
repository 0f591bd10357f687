/* C API of the qfm shared library: genetic design of quantum feature map
 * circuits for kernel SVM classification.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Functions return QFM_OK (0) on success; on failure they return a nonzero
 * status and qfm_last_error() describes what went wrong (the message is
 * thread-local and valid until the next qfm_* call on the same thread).
 */
#ifndef QFM_H
#define QFM_H

#include <stddef.h>

#if defined(_WIN32) || defined(_WIN64)
#define QFM_API __declspec(dllexport)
#else
#define QFM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qfm_status {
  QFM_OK = 0,
  QFM_ERR_INVALID_ARGUMENT = 1,
  QFM_ERR_CONFIG = 2,
  QFM_ERR_RUNTIME = 3,
  QFM_ERR_BUFFER_TOO_SMALL = 4
} qfm_status;

typedef struct qfm_experiment qfm_experiment;
typedef struct qfm_circuit qfm_circuit;

QFM_API const char* qfm_version(void);

/* Message for the most recent failure on this thread; never NULL. */
QFM_API const char* qfm_last_error(void);

/* --- experiments ------------------------------------------------------- */

QFM_API qfm_status qfm_experiment_create(qfm_experiment** out);
QFM_API void qfm_experiment_destroy(qfm_experiment* experiment);

/* Loads a flat key=value config file, replacing the current configuration
 * (apply qfm_experiment_set overrides afterwards). */
QFM_API qfm_status qfm_experiment_load_config(qfm_experiment* experiment, const char* path);

/* Overrides a single config key, e.g. ("seed", "7") or ("approaches", "2.1"). */
QFM_API qfm_status qfm_experiment_set(qfm_experiment* experiment, const char* key,
                                      const char* value);

/* Runs every configured approach and writes the report files into out_dir
 * (falls back to the configured out_dir when NULL). */
QFM_API qfm_status qfm_experiment_run(qfm_experiment* experiment, const char* out_dir);

/* --- circuits ---------------------------------------------------------- */

/* Decodes a '0'/'1' chromosome string for the given budgets. feature_count
 * may be 0 to bind rotation features modulo the layer budget. */
QFM_API qfm_status qfm_circuit_decode(const char* bits, unsigned qubit_budget,
                                      unsigned layer_budget, unsigned feature_count,
                                      qfm_circuit** out);
QFM_API void qfm_circuit_destroy(qfm_circuit* circuit);

/* Unweighted size metric SM = (N_local + 2 N_CNOT) / M. */
QFM_API qfm_status qfm_circuit_size_metric(const qfm_circuit* circuit, double* out);

/* Text rendering (diagram or gate list). Writes at most capacity bytes
 * including the terminator and stores the required size (terminator
 * included) in *required when non-NULL; returns QFM_ERR_BUFFER_TOO_SMALL if
 * the buffer cannot hold the full text. */
QFM_API qfm_status qfm_circuit_render(const qfm_circuit* circuit, char* buffer,
                                      size_t capacity, size_t* required);
QFM_API qfm_status qfm_circuit_gate_list(const qfm_circuit* circuit, char* buffer,
                                         size_t capacity, size_t* required);

/* Quantum kernel value of two feature vectors under the circuit. */
QFM_API qfm_status qfm_circuit_kernel(const qfm_circuit* circuit, const double* x,
                                      size_t x_len, const double* y, size_t y_len,
                                      double* out);

#ifdef __cplusplus
}
#endif

#endif /* QFM_H */
