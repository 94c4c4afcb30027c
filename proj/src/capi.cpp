#include "rent/rent_c.h"

#include <memory>
#include <stdexcept>
#include <string>

#include "rent/config.hpp"
#include "rent/dataset.hpp"
#include "rent/pipeline.hpp"

struct rent_config {
  rent::RunConfig cfg;
};

struct rent_dataset {
  rent::Dataset data;
};

struct rent_report {
  std::string json_text;
};

namespace {

thread_local std::string g_last_error;

rent_status fail(rent_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
rent_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RENT_OK;
  } catch (const std::invalid_argument& e) {
    return fail(RENT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(RENT_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    const bool io = what.find("cannot open") != std::string::npos ||
                    what.find("cannot write") != std::string::npos ||
                    what.find("write failed") != std::string::npos;
    return fail(io ? RENT_ERR_IO : RENT_ERR_RUNTIME, what);
  } catch (const std::exception& e) {
    return fail(RENT_ERR_RUNTIME, e.what());
  }
}

rent_status run_command(const rent_config* cfg, rent_report** out,
                        nlohmann::json (*command)(const rent::RunConfig&)) {
  if (cfg == nullptr || out == nullptr) return fail(RENT_ERR_NULL_HANDLE, "null handle");
  *out = nullptr;
  return guarded([&] {
    auto report = std::make_unique<rent_report>();
    report->json_text = command(cfg->cfg).dump(2);
    *out = report.release();
  });
}

}  // namespace

extern "C" {

const char* rent_version(void) { return "0.1.0"; }

const char* rent_last_error(void) { return g_last_error.c_str(); }

rent_config* rent_config_create(void) { return new rent_config{}; }

rent_status rent_config_load(rent_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr) return fail(RENT_ERR_NULL_HANDLE, "null handle");
  return guarded([&] {
    // Merge: file values overwrite the current handle state key by key, so
    // rent_config_set calls made afterwards still take precedence.
    cfg->cfg = rent::parse_config_file(path);
  });
}

rent_status rent_config_set(rent_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr)
    return fail(RENT_ERR_NULL_HANDLE, "null handle");
  return guarded([&] { rent::apply_config_value(cfg->cfg, key, value); });
}

void rent_config_destroy(rent_config* cfg) { delete cfg; }

rent_status rent_dataset_load_csv(const char* path, const char* target_column,
                                  const char* task, rent_dataset** out) {
  if (path == nullptr || target_column == nullptr || task == nullptr || out == nullptr)
    return fail(RENT_ERR_NULL_HANDLE, "null handle");
  *out = nullptr;
  return guarded([&] {
    auto data = std::make_unique<rent_dataset>();
    data->data = rent::load_csv(path, target_column, rent::task_from_name(task));
    *out = data.release();
  });
}

rent_status rent_dataset_synthesize(const char* task, int n_objects, int n_features,
                                    int n_informative, double noise, uint64_t seed,
                                    rent_dataset** out) {
  if (task == nullptr || out == nullptr) return fail(RENT_ERR_NULL_HANDLE, "null handle");
  *out = nullptr;
  return guarded([&] {
    auto data = std::make_unique<rent_dataset>();
    data->data = rent::make_synthetic(rent::task_from_name(task), n_objects, n_features,
                                      n_informative, noise, seed)
                     .data;
    *out = data.release();
  });
}

rent_status rent_dataset_dims(const rent_dataset* data, int* n_objects, int* n_features) {
  if (data == nullptr) return fail(RENT_ERR_NULL_HANDLE, "null handle");
  if (n_objects != nullptr) *n_objects = data->data.n_objects();
  if (n_features != nullptr) *n_features = data->data.n_features();
  return RENT_OK;
}

rent_status rent_dataset_save_csv(const rent_dataset* data, const char* path) {
  if (data == nullptr || path == nullptr) return fail(RENT_ERR_NULL_HANDLE, "null handle");
  return guarded([&] { rent::save_csv(data->data, path); });
}

void rent_dataset_destroy(rent_dataset* data) { delete data; }

rent_status rent_run_select(const rent_config* cfg, rent_report** out) {
  return run_command(cfg, out, &rent::run_select);
}

rent_status rent_run_stability(const rent_config* cfg, rent_report** out) {
  return run_command(cfg, out, &rent::run_stability);
}

rent_status rent_run_validate(const rent_config* cfg, rent_report** out) {
  return run_command(cfg, out, &rent::run_validate);
}

rent_status rent_run_posthoc(const rent_config* cfg, rent_report** out) {
  return run_command(cfg, out, &rent::run_posthoc);
}

rent_status rent_run_synth(const rent_config* cfg, rent_report** out) {
  return run_command(cfg, out, &rent::run_synth);
}

const char* rent_report_json(const rent_report* report) {
  return report == nullptr ? "" : report->json_text.c_str();
}

void rent_report_destroy(rent_report* report) { delete report; }

}  // extern "C"
