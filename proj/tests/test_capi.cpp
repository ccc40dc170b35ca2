#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "frlab.h"

namespace fs = std::filesystem;

namespace {

std::string write_config(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "frlab_capi_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << body;
  return p.string();
}

const char* kDeterministic = R"({
  "experiment": "deterministic",
  "output_dir": "%OUT%",
  "seed": 1,
  "solver": {"alpha": 1.5, "T": 0.5, "dt": 0.05, "grid_n": 32},
  "data": {"u0_mode": 2, "u0_amp": 1.0}
})";

std::string deterministic_config(const std::string& out_dir) {
  std::string body = kDeterministic;
  const auto pos = body.find("%OUT%");
  body.replace(pos, 5, out_dir);
  return write_config("det.json", body);
}

}  // namespace

TEST_CASE("session lifecycle and experiment listing") {
  frlab_session* s = frlab_session_create();
  REQUIRE(s != nullptr);
  const std::string names = frlab_list_experiments(s);
  CHECK(names.find("deterministic") != std::string::npos);
  CHECK(names.find("verify_suite") != std::string::npos);
  CHECK(names.find("nonlinear_picard") != std::string::npos);
  frlab_session_destroy(s);
}

TEST_CASE("run reports config errors through the exit code contract") {
  frlab_session* s = frlab_session_create();
  REQUIRE(s != nullptr);
  CHECK(frlab_run(s, "/nonexistent/config.json") == 2);
  CHECK(std::string(frlab_last_error(s)).size() > 0);

  const std::string bad = write_config(
      "bad.json", R"({"experiment": "deterministic",
                      "solver": {"p": 4, "eps1": 0.0, "alpha": 1.5,
                                 "T": 0.5, "dt": 0.05, "grid_n": 32}})");
  CHECK(frlab_run(s, bad.c_str()) == 2);
  CHECK(std::string(frlab_last_error(s)).find("eps1") != std::string::npos);

  CHECK(frlab_run(s, nullptr) == -1);
  CHECK(frlab_run(nullptr, "x") == -1);
  frlab_session_destroy(s);
}

TEST_CASE("run writes artifacts and a manifest") {
  frlab_session* s = frlab_session_create();
  REQUIRE(s != nullptr);
  const fs::path out = fs::temp_directory_path() / "frlab_capi_out";
  fs::remove_all(out);
  const std::string cfg = deterministic_config(out.string());
  CHECK(frlab_run(s, cfg.c_str()) == 0);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "solution.csv"));
  CHECK(fs::exists(out / "final_state.csv"));
  frlab_session_destroy(s);
}

TEST_CASE("sweep aggregates levels under the output dir") {
  frlab_session* s = frlab_session_create();
  REQUIRE(s != nullptr);
  const fs::path out = fs::temp_directory_path() / "frlab_capi_sweep";
  fs::remove_all(out);
  const std::string cfg = deterministic_config(out.string());
  const double factors[] = {1.0, 0.5};
  CHECK(frlab_sweep(s, cfg.c_str(), "dt", factors, 2) == 0);
  CHECK(fs::exists(out / "sweep_report.json"));
  CHECK(fs::exists(out / "level_0" / "manifest.json"));
  CHECK(fs::exists(out / "level_1" / "manifest.json"));

  CHECK(frlab_sweep(s, cfg.c_str(), "bogus", factors, 2) == 2);
  CHECK(frlab_sweep(s, cfg.c_str(), "dt", nullptr, 2) == -1);
  frlab_session_destroy(s);
}
