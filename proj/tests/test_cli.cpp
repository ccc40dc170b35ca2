#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("FRLAB_CLI");
  REQUIRE_MESSAGE(env != nullptr, "FRLAB_CLI must point at the CLI binary");
  return env;
}

int run_cli(const std::string& args) {
  const std::string cmd = "\"" + cli_path() + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string write_config(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "frlab_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << body;
  return p.string();
}

}  // namespace

TEST_CASE("list-experiments exits cleanly") {
  CHECK(run_cli("list-experiments") == 0);
}

TEST_CASE("run: missing config is a config error (exit 2)") {
  CHECK(run_cli("run /does/not/exist.json") == 2);
}

TEST_CASE("run: eps1 guard is enforced from the config file") {
  const std::string accepted = write_config("ok.json", R"({
    "experiment": "deterministic",
    "output_dir": ")" + (fs::temp_directory_path() / "frlab_cli_ok").string() +
                                                           R"(",
    "solver": {"p": 2, "eps1": 0.0, "alpha": 1.5, "T": 0.5, "dt": 0.05,
               "grid_n": 32}})");
  CHECK(run_cli("run " + accepted) == 0);

  const std::string rejected = write_config("bad.json", R"({
    "experiment": "deterministic",
    "solver": {"p": 4, "eps1": 0.0, "alpha": 1.5, "T": 0.5, "dt": 0.05,
               "grid_n": 32}})");
  CHECK(run_cli("run " + rejected) == 2);
}

TEST_CASE("run: deterministic eigenmode artifacts and verify suite") {
  const fs::path out = fs::temp_directory_path() / "frlab_cli_det";
  fs::remove_all(out);
  const std::string cfg = write_config("det.json", R"({
    "experiment": "deterministic",
    "output_dir": ")" + out.string() + R"(",
    "solver": {"alpha": 1.5, "T": 0.5, "dt": 0.05, "grid_n": 32},
    "data": {"u0_mode": 1}})");
  CHECK(run_cli("run " + cfg) == 0);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "solution.csv"));

  const fs::path vout = fs::temp_directory_path() / "frlab_cli_suite";
  fs::remove_all(vout);
  const std::string vcfg = write_config("suite.json", R"({
    "experiment": "verify_suite",
    "output_dir": ")" + vout.string() + R"(",
    "seed": 2,
    "mc_paths": 200,
    "solver": {"alpha": 1.5, "T": 0.4, "dt": 0.05, "grid_n": 32, "K": 2},
    "data": {"h_amp": 0.3}})");
  CHECK(run_cli("run " + vcfg) == 0);
  CHECK(fs::exists(vout / "suite.csv"));
  // At least 8 reports written.
  int reports = 0;
  for (const auto& e : fs::directory_iterator(vout))
    if (e.path().filename().string().rfind("report_", 0) == 0) ++reports;
  CHECK(reports >= 8);
}

TEST_CASE("sweep: dt refinement on the time-change cross-check") {
  const fs::path out = fs::temp_directory_path() / "frlab_cli_sweep";
  fs::remove_all(out);
  const std::string cfg = write_config("tc.json", R"({
    "experiment": "deterministic",
    "output_dir": ")" + out.string() + R"(",
    "solver": {"alpha": 1.5, "T": 1.0, "dt": 0.02, "grid_n": 32,
               "a_kind": "sin"},
    "data": {"u0_mode": 2}})");
  CHECK(run_cli("sweep " + cfg + " --axis dt --factors 1.0 0.5 0.25") == 0);
  CHECK(fs::exists(out / "sweep_report.json"));

  std::ifstream in(out / "sweep_report.json");
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(body.find("fitted_slope") != std::string::npos);
}
