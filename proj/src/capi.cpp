#include "qfm.h"

#include <cstring>
#include <string>

#include "qfm/config.hpp"
#include "qfm/encoding.hpp"
#include "qfm/error.hpp"
#include "qfm/harness.hpp"
#include "qfm/kernel.hpp"

namespace {

thread_local std::string g_last_error;

qfm_status status_from(const qfm::Error& e) {
  switch (e.code()) {
    case qfm::ErrorCode::Config:
      return QFM_ERR_CONFIG;
    case qfm::ErrorCode::InvalidArgument:
    case qfm::ErrorCode::MalformedGene:
    case qfm::ErrorCode::MalformedChromosome:
      return QFM_ERR_INVALID_ARGUMENT;
    default:
      return QFM_ERR_RUNTIME;
  }
}

template <typename Fn>
qfm_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const qfm::Error& e) {
    g_last_error = e.what();
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QFM_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return QFM_ERR_RUNTIME;
  }
}

qfm_status fail(qfm_status status, const char* message) {
  g_last_error = message;
  return status;
}

qfm_status copy_text(const std::string& text, char* buffer, size_t capacity,
                     size_t* required) {
  if (required != nullptr) *required = text.size() + 1;
  if (buffer == nullptr || capacity == 0) {
    return fail(QFM_ERR_BUFFER_TOO_SMALL, "output buffer is empty");
  }
  if (capacity < text.size() + 1) {
    return fail(QFM_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return QFM_OK;
}

}  // namespace

struct qfm_experiment {
  qfm::ExperimentConfig config;
};

struct qfm_circuit {
  qfm::FeatureMapCircuit circuit;
};

extern "C" {

const char* qfm_version(void) { return "0.1.0"; }

const char* qfm_last_error(void) { return g_last_error.c_str(); }

qfm_status qfm_experiment_create(qfm_experiment** out) {
  if (out == nullptr) return fail(QFM_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    *out = new qfm_experiment();
    return QFM_OK;
  });
}

void qfm_experiment_destroy(qfm_experiment* experiment) { delete experiment; }

qfm_status qfm_experiment_load_config(qfm_experiment* experiment, const char* path) {
  if (experiment == nullptr || path == nullptr) {
    return fail(QFM_ERR_INVALID_ARGUMENT, "experiment or path is NULL");
  }
  return guarded([&] {
    experiment->config = qfm::parse_config_file(path);
    return QFM_OK;
  });
}

qfm_status qfm_experiment_set(qfm_experiment* experiment, const char* key,
                              const char* value) {
  if (experiment == nullptr || key == nullptr || value == nullptr) {
    return fail(QFM_ERR_INVALID_ARGUMENT, "experiment, key or value is NULL");
  }
  return guarded([&] {
    qfm::set_config_value(experiment->config, key, value);
    return QFM_OK;
  });
}

qfm_status qfm_experiment_run(qfm_experiment* experiment, const char* out_dir) {
  if (experiment == nullptr) return fail(QFM_ERR_INVALID_ARGUMENT, "experiment is NULL");
  return guarded([&] {
    if (out_dir != nullptr) experiment->config.out_dir = out_dir;
    const qfm::ExperimentReport report = qfm::run_experiment(experiment->config);
    qfm::emit_report(report, experiment->config.out_dir);
    return QFM_OK;
  });
}

qfm_status qfm_circuit_decode(const char* bits, unsigned qubit_budget, unsigned layer_budget,
                              unsigned feature_count, qfm_circuit** out) {
  if (bits == nullptr || out == nullptr) {
    return fail(QFM_ERR_INVALID_ARGUMENT, "bits or out is NULL");
  }
  return guarded([&] {
    qfm::Chromosome chromosome;
    chromosome.bits = bits;
    chromosome.qubit_budget = qubit_budget;
    chromosome.layer_budget = layer_budget;
    auto* handle = new qfm_circuit();
    try {
      handle->circuit = qfm::decode_chromosome(chromosome, feature_count);
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
    return QFM_OK;
  });
}

void qfm_circuit_destroy(qfm_circuit* circuit) { delete circuit; }

qfm_status qfm_circuit_size_metric(const qfm_circuit* circuit, double* out) {
  if (circuit == nullptr || out == nullptr) {
    return fail(QFM_ERR_INVALID_ARGUMENT, "circuit or out is NULL");
  }
  return guarded([&] {
    *out = qfm::size_metric(circuit->circuit).sm;
    return QFM_OK;
  });
}

qfm_status qfm_circuit_render(const qfm_circuit* circuit, char* buffer, size_t capacity,
                              size_t* required) {
  if (circuit == nullptr) return fail(QFM_ERR_INVALID_ARGUMENT, "circuit is NULL");
  return guarded([&] {
    return copy_text(qfm::render_circuit(circuit->circuit), buffer, capacity, required);
  });
}

qfm_status qfm_circuit_gate_list(const qfm_circuit* circuit, char* buffer, size_t capacity,
                                 size_t* required) {
  if (circuit == nullptr) return fail(QFM_ERR_INVALID_ARGUMENT, "circuit is NULL");
  return guarded([&] {
    return copy_text(qfm::gate_list(circuit->circuit), buffer, capacity, required);
  });
}

qfm_status qfm_circuit_kernel(const qfm_circuit* circuit, const double* x, size_t x_len,
                              const double* y, size_t y_len, double* out) {
  if (circuit == nullptr || x == nullptr || y == nullptr || out == nullptr) {
    return fail(QFM_ERR_INVALID_ARGUMENT, "circuit, x, y or out is NULL");
  }
  return guarded([&] {
    *out = qfm::kernel(circuit->circuit, std::span<const double>(x, x_len),
                       std::span<const double>(y, y_len));
    return QFM_OK;
  });
}

}  // extern "C"
