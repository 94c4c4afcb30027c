#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rent/rent_c.h"

namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and error state") {
  CHECK(std::strlen(rent_version()) > 0);
  CHECK(rent_last_error() != nullptr);
}

TEST_CASE("null handles are rejected") {
  CHECK(rent_config_load(nullptr, "x") == RENT_ERR_NULL_HANDLE);
  CHECK(rent_config_set(nullptr, "k", "v") == RENT_ERR_NULL_HANDLE);
  CHECK(rent_run_select(nullptr, nullptr) == RENT_ERR_NULL_HANDLE);
  CHECK(rent_dataset_dims(nullptr, nullptr, nullptr) == RENT_ERR_NULL_HANDLE);
  rent_report_destroy(nullptr);
  rent_dataset_destroy(nullptr);
  rent_config_destroy(nullptr);
}

TEST_CASE("config set validates keys and values") {
  rent_config* cfg = rent_config_create();
  REQUIRE(cfg != nullptr);
  CHECK(rent_config_set(cfg, "k_models", "25") == RENT_OK);
  CHECK(rent_config_set(cfg, "not_a_key", "1") == RENT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(rent_last_error()).find("unknown config key") != std::string::npos);
  CHECK(rent_config_set(cfg, "k_models", "wat") == RENT_ERR_INVALID_ARGUMENT);
  CHECK(rent_config_load(cfg, "/nonexistent/file.cfg") == RENT_ERR_IO);
  rent_config_destroy(cfg);
}

TEST_CASE("dataset synthesis, dims, and CSV round trip") {
  rent_dataset* data = nullptr;
  REQUIRE(rent_dataset_synthesize("classification", 40, 8, 3, 0.5, 7, &data) == RENT_OK);
  REQUIRE(data != nullptr);
  int n_objects = 0, n_features = 0;
  CHECK(rent_dataset_dims(data, &n_objects, &n_features) == RENT_OK);
  CHECK(n_objects == 40);
  CHECK(n_features == 8);

  const auto csv = (fs::temp_directory_path() / "rent_capi_data.csv").string();
  CHECK(rent_dataset_save_csv(data, csv.c_str()) == RENT_OK);
  rent_dataset_destroy(data);

  rent_dataset* loaded = nullptr;
  REQUIRE(rent_dataset_load_csv(csv.c_str(), "target", "classification", &loaded) == RENT_OK);
  CHECK(rent_dataset_dims(loaded, &n_objects, &n_features) == RENT_OK);
  CHECK(n_objects == 40);
  rent_dataset_destroy(loaded);

  rent_dataset* bad = nullptr;
  CHECK(rent_dataset_load_csv("/nonexistent.csv", "y", "classification", &bad) == RENT_ERR_IO);
  CHECK(bad == nullptr);
  CHECK(rent_dataset_synthesize("clustering", 10, 2, 1, 0.1, 1, &bad) ==
        RENT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("select runs end to end through the C surface") {
  rent_config* cfg = rent_config_create();
  const auto out = temp_dir("rent_capi_select");
  for (auto [k, v] : {std::pair<const char*, std::string>{"synth", "true"},
                      {"task", "classification"},
                      {"synth_n_train", "50"},
                      {"synth_n_test", "25"},
                      {"synth_n_features", "12"},
                      {"synth_n_informative", "3"},
                      {"synth_noise", "0.5"},
                      {"k_models", "10"},
                      {"ell", "10"},
                      {"master_seed", "21"},
                      {"out_dir", out}})
    REQUIRE(rent_config_set(cfg, k, v.c_str()) == RENT_OK);

  rent_report* report = nullptr;
  REQUIRE(rent_run_select(cfg, &report) == RENT_OK);
  REQUIRE(report != nullptr);
  const auto j = nlohmann::json::parse(rent_report_json(report));
  CHECK(j.at("command") == "select");
  CHECK(j.at("selection").at("delta").get<int>() >= 1);
  CHECK(fs::exists(fs::path(out) / "report.json"));
  rent_report_destroy(report);

  // Posthoc against the artifacts just written.
  rent_report* ph = nullptr;
  REQUIRE(rent_run_posthoc(cfg, &ph) == RENT_OK);
  rent_report_destroy(ph);
  rent_config_destroy(cfg);
}

TEST_CASE("missing seed and missing artifacts surface as errors") {
  rent_config* cfg = rent_config_create();
  rent_report* report = nullptr;
  CHECK(rent_run_select(cfg, &report) == RENT_ERR_INVALID_ARGUMENT);
  CHECK(report == nullptr);
  CHECK(std::string(rent_last_error()).find("master_seed") != std::string::npos);

  REQUIRE(rent_config_set(cfg, "master_seed", "1") == RENT_OK);
  REQUIRE(rent_config_set(cfg, "out_dir", temp_dir("rent_capi_missing").c_str()) == RENT_OK);
  CHECK(rent_run_posthoc(cfg, &report) == RENT_ERR_RUNTIME);
  CHECK(std::string(rent_last_error()).find("no ensemble artifact found") != std::string::npos);
  rent_config_destroy(cfg);
}

}  // TEST_SUITE
