#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "vpa/geo.hpp"
#include "vpa/io.hpp"

using namespace vpa;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& workdir) {
  const fs::path log = workdir / "cli_output.log";
  const std::string cmd = "cd '" + workdir.string() + "' && '" + VPA_CLI_PATH +
                          "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  if (fs::exists(log)) r.output = read_text_file(log);
  return r;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / name;
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void run_pipeline(const fs::path& dir) {
  REQUIRE(run_cli("synth --seed 77 --users 2 --sessions 5 --out corpus", dir)
              .exit_code == 0);
  REQUIRE(run_cli("extract --traj corpus --out stays", dir).exit_code == 0);
  REQUIRE(run_cli("train --traj corpus --annotations corpus "
                  "--pois corpus/pois.json --out model",
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("assign --traj corpus --pois corpus/pois.json "
                  "--bank model/bank.json --method je --out assigned",
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("evaluate --traj corpus --annotations corpus "
                  "--pois corpus/pois.json --popularity corpus/popularity.json "
                  "--mode cv --folds 5 --seed 3 --methods je --methods nn "
                  "--out eval",
                  dir)
              .exit_code == 0);
}

}  // namespace

TEST_CASE("the full pipeline runs end to end") {
  TempDir tmp("vpa_cli_pipeline");
  run_pipeline(tmp.path);

  CHECK(fs::exists(tmp.path / "corpus/manifest.json"));
  CHECK(fs::exists(tmp.path / "stays/u01_2024-03-04.stays.json"));
  CHECK(fs::exists(tmp.path / "model/bank.json"));
  CHECK(fs::exists(tmp.path / "assigned/u02_2024-03-08.assign.json"));
  CHECK(fs::exists(tmp.path / "eval/report.json"));

  // Assignments reference real POIs.
  const PoiDatabase db = load_poi_database(tmp.path / "corpus/pois.json");
  const json a =
      json::parse(read_text_file(tmp.path / "assigned/u01_2024-03-04.assign.json"));
  CHECK(a.at("method") == "je");
  CHECK(a.at("selected").size() >= 1);
  for (const auto& sel : a.at("selected")) {
    CHECK(db.find(sel.at("poi_id").get<std::string>()) != nullptr);
  }

  const std::string csv = read_text_file(tmp.path / "eval/report.csv");
  CHECK(csv.find("u01,je,f1,") != std::string::npos);
  CHECK(csv.find("u01,nn,f1,") != std::string::npos);
  CHECK(csv.find("u02,je,f1,") != std::string::npos);
  CHECK(csv.find("u02,nn,f1,") != std::string::npos);

  const json report = json::parse(read_text_file(tmp.path / "eval/report.json"));
  CHECK(report.at("aggregate").contains("je"));
  CHECK(report.at("users").at("u01").at("je").at("sessions").size() == 5);
}

TEST_CASE("the pipeline is byte-reproducible under a fixed seed") {
  TempDir a("vpa_cli_det_a");
  TempDir b("vpa_cli_det_b");
  run_pipeline(a.path);
  run_pipeline(b.path);

  for (const char* rel :
       {"corpus/manifest.json", "corpus/pois.json", "corpus/u01_2024-03-04.jsonl",
        "corpus/u02_annotations.json", "stays/u01_2024-03-05.stays.json",
        "model/bank.json", "assigned/u01_2024-03-06.assign.json",
        "eval/report.json", "eval/report.csv"}) {
    CHECK(read_text_file(a.path / rel) == read_text_file(b.path / rel));
  }
}

TEST_CASE("method dispatch matches the library baselines") {
  TempDir tmp("vpa_cli_dispatch");
  REQUIRE(run_cli("synth --seed 9 --users 1 --sessions 4 --out corpus", tmp.path)
              .exit_code == 0);
  REQUIRE(run_cli("assign --traj corpus --pois corpus/pois.json --method nn "
                  "--out nn_out",
                  tmp.path)
              .exit_code == 0);
  const json a =
      json::parse(read_text_file(tmp.path / "nn_out/u01_2024-03-04.assign.json"));
  CHECK(a.at("method") == "nn");
  CHECK(!a.contains("objective"));  // point-wise methods have none
}

TEST_CASE("config file values apply and flags win") {
  TempDir tmp("vpa_cli_config");
  REQUIRE(run_cli("synth --seed 9 --users 1 --sessions 4 --out corpus", tmp.path)
              .exit_code == 0);
  write_text_file(tmp.path / "config.json",
                  R"({"method": "nn", "pois": "corpus/pois.json",
                      "trajectories": "corpus", "out": "cfg_out"})");
  REQUIRE(run_cli("assign --config config.json", tmp.path).exit_code == 0);
  const json a = json::parse(
      read_text_file(tmp.path / "cfg_out/u01_2024-03-04.assign.json"));
  CHECK(a.at("method") == "nn");

  REQUIRE(run_cli("assign --config config.json --method nci "
                  "--popularity corpus/popularity.json --out flag_out",
                  tmp.path)
              .exit_code == 0);
  const json b = json::parse(
      read_text_file(tmp.path / "flag_out/u01_2024-03-04.assign.json"));
  CHECK(b.at("method") == "nci");
}

TEST_CASE("error surfaces map to documented exit codes") {
  TempDir tmp("vpa_cli_errors");
  // Missing trajectory path: I/O error.
  CHECK(run_cli("extract --traj nowhere --out stays", tmp.path).exit_code == 3);

  // Empty trajectory directory: warning, success.
  fs::create_directories(tmp.path / "empty");
  const RunResult r = run_cli("extract --traj empty --out stays", tmp.path);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("warning") != std::string::npos);

  // Malformed trajectory line: parse error naming the line.
  fs::create_directories(tmp.path / "bad");
  write_text_file(tmp.path / "bad/u01_2024-01-15.jsonl",
                  "{\"lat\": 1.0, \"lng\": 2.0, \"ts\": 100}\n{oops\n");
  const RunResult p = run_cli("extract --traj bad --out stays", tmp.path);
  CHECK(p.exit_code == 4);
  CHECK(p.output.find(":2:") != std::string::npos);

  // Unknown method: usage error.
  REQUIRE(run_cli("synth --seed 9 --users 1 --sessions 4 --out corpus", tmp.path)
              .exit_code == 0);
  CHECK(run_cli("assign --traj corpus --pois corpus/pois.json --method svm "
                "--out x",
                tmp.path)
            .exit_code == 2);
}

TEST_CASE("the exhaustive guard surfaces as a solver error") {
  TempDir tmp("vpa_cli_guard");
  // 25 separated dwells at one POI: the outcome space is 2^25 > 10^7.
  const std::int64_t day0 = days_from_civil({2024, 1, 15}) * 86400;
  const double lat0 = 35.68, lng0 = 139.70;
  const double step = 600.0 / (kEarthRadiusMeters * 3.14159265358979323846 / 180.0);
  std::vector<TrackPoint> pts;
  std::int64_t ts = day0 + 8 * 3600;
  for (int d = 0; d < 25; ++d) {
    for (int k = 0; k < 80; ++k) {  // 240 s dwell
      pts.push_back({lng0, lat0, ts});
      ts += 3;
    }
    for (int k = 0; k < 20; ++k) {  // hop out ...
      pts.push_back({lng0 + step * (k + 1) / 20.0, lat0, ts});
      ts += 3;
    }
    for (int k = 0; k < 20; ++k) {  // ... and back, too briefly to dwell
      pts.push_back({lng0 + step * (19 - k) / 20.0, lat0, ts});
      ts += 3;
    }
  }
  fs::create_directories(tmp.path / "traj");
  save_trajectory(tmp.path / "traj/u09_2024-01-15.jsonl",
                  Session{"u09_2024-01-15", pts});
  write_text_file(tmp.path / "pois.json",
                  R"([{"id":"a","name":"A","cat":"cafe","lat":35.68,"lng":139.70,
                       "source":"common"}])");
  write_text_file(tmp.path / "u09_annotations.json",
                  "{\"u09_2024-01-15\": [{\"bt\": " +
                      std::to_string(day0 + 8 * 3600) +
                      ", \"et\": " + std::to_string(day0 + 8 * 3600 + 239) +
                      ", \"poi_id\": \"a\"}]}");
  REQUIRE(run_cli("train --traj traj --annotations u09_annotations.json "
                  "--pois pois.json --out model",
                  tmp.path)
              .exit_code == 0);
  const RunResult r = run_cli(
      "assign --traj traj --pois pois.json --bank model/bank.json "
      "--method je --backend exhaustive --out x",
      tmp.path);
  CHECK(r.exit_code == 5);
  CHECK(run_cli("assign --traj traj --pois pois.json --bank model/bank.json "
                "--method je --backend bnb --out x",
                tmp.path)
            .exit_code == 0);
}
