// vpa: stay-point extraction and visited-POI assignment pipeline.
//
// Subcommands: synth, extract, train, assign, evaluate. A JSON config file
// (--config) supplies defaults; explicit flags win over the config file.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vpa/baselines.hpp"
#include "vpa/errors.hpp"
#include "vpa/evaluation.hpp"
#include "vpa/features.hpp"
#include "vpa/geo.hpp"
#include "vpa/io.hpp"
#include "vpa/solver.hpp"
#include "vpa/staypoint.hpp"
#include "vpa/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes, also documented in the README.
enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIoError = 3,
  kParseError = 4,
  kSolverGuard = 5,
};

struct RunConfig {
  std::string config_path;
  std::string pois;
  std::string trajectories;
  std::string annotations;
  std::string popularity;
  std::string out = ".";
  std::string bank;

  std::vector<std::string> param_sets;  // "dist,time" strings
  vpa::FeatureParams features;
  std::string backend = "bnb";
  std::string method = "je";
  std::vector<std::string> methods = {"je", "chain", "nn", "nci"};
  std::string weight_source = "fixed";  // fixed|grid|file
  std::string weights_path;
  std::vector<double> grid = {0.1, 1.0};
  std::string eval_mode = "cv";
  int folds = 10;
  std::uint64_t seed = 17;
  std::string timezone_offset = "+00:00";
  std::string overlap_policy = "earliest";
  bool timing = false;
  bool dump_problem = false;
  bool dump_solution = false;

  json synth_overrides = json::object();
  int synth_users = 3;
  int synth_sessions = -1;  // -1: keep the generator default
};

int parse_tz_offset(const std::string& text) {
  if (text.empty()) return 0;
  if (text.find(':') != std::string::npos) {
    // +HH:MM or -HH:MM
    if (text.size() != 6 || (text[0] != '+' && text[0] != '-')) {
      throw vpa::InvalidConfigError("timezone offset must look like +09:00");
    }
    const int sign = text[0] == '-' ? -1 : 1;
    const int hours = std::stoi(text.substr(1, 2));
    const int minutes = std::stoi(text.substr(4, 2));
    return sign * (hours * 3600 + minutes * 60);
  }
  return std::stoi(text);
}

std::vector<vpa::ExtractionParams> parse_param_sets(
    const std::vector<std::string>& texts, double theta_dist, double theta_time) {
  std::vector<vpa::ExtractionParams> out;
  for (const std::string& t : texts) {
    const auto comma = t.find(',');
    if (comma == std::string::npos) {
      throw vpa::InvalidConfigError("--param-set expects \"dist,time\", got '" +
                                    t + "'");
    }
    out.push_back({std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1))});
  }
  if (out.empty()) out.push_back({theta_dist, theta_time});
  return out;
}

void apply_config_file(RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  const json j = json::parse(vpa::read_text_file(cfg.config_path));

  auto get_str = [&](const char* key, std::string& target) {
    if (j.contains(key)) target = j.at(key).get<std::string>();
  };
  get_str("pois", cfg.pois);
  get_str("trajectories", cfg.trajectories);
  get_str("annotations", cfg.annotations);
  get_str("popularity", cfg.popularity);
  get_str("out", cfg.out);
  get_str("bank", cfg.bank);
  get_str("backend", cfg.backend);
  get_str("method", cfg.method);
  get_str("overlap_policy", cfg.overlap_policy);
  if (j.contains("methods")) {
    cfg.methods = j.at("methods").get<std::vector<std::string>>();
  }
  if (j.contains("extraction")) {
    cfg.param_sets.clear();
    for (const auto& e : j.at("extraction")) {
      cfg.param_sets.push_back(std::to_string(e.at("theta_dist").get<double>()) +
                               "," +
                               std::to_string(e.at("theta_time").get<double>()));
    }
  }
  if (j.contains("features")) {
    const auto& f = j.at("features");
    auto get = [&](const char* key, auto& target) {
      if (f.contains(key)) target = f.at(key).get<std::decay_t<decltype(target)>>();
    };
    get("gamma", cfg.features.gamma);
    get("lambda", cfg.features.lambda);
    get("alpha1", cfg.features.alpha1);
    get("alpha2", cfg.features.alpha2);
    get("beta", cfg.features.beta);
    get("candidate_radius", cfg.features.candidate_radius);
    get("max_candidates", cfg.features.max_candidates);
    get("lognorm_tau_floor", cfg.features.lognorm_tau_floor);
    get("jaccard_union_denominator", cfg.features.jaccard_union_denominator);
  }
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    if (w.contains("source")) cfg.weight_source = w.at("source").get<std::string>();
    if (w.contains("path")) cfg.weights_path = w.at("path").get<std::string>();
    if (w.contains("grid")) cfg.grid = w.at("grid").get<std::vector<double>>();
  }
  if (j.contains("evaluation")) {
    const auto& e = j.at("evaluation");
    if (e.contains("mode")) cfg.eval_mode = e.at("mode").get<std::string>();
    if (e.contains("folds")) cfg.folds = e.at("folds").get<int>();
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("timezone_offset")) {
    if (j.at("timezone_offset").is_number_integer()) {
      cfg.timezone_offset = std::to_string(j.at("timezone_offset").get<int>());
    } else {
      cfg.timezone_offset = j.at("timezone_offset").get<std::string>();
    }
  }
  if (j.contains("synth")) {
    cfg.synth_overrides = j.at("synth");
    if (cfg.synth_overrides.contains("users")) {
      cfg.synth_users = cfg.synth_overrides.at("users").get<int>();
      cfg.synth_overrides.erase("users");
    }
  }
}

std::vector<vpa::Session> load_sessions(const std::string& path, int tz_offset) {
  std::vector<vpa::Session> sessions;
  const fs::path p(path);
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p)) {
      if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      sessions.push_back(vpa::load_trajectory(f, tz_offset));
    }
  } else if (fs::exists(p)) {
    sessions.push_back(vpa::load_trajectory(p, tz_offset));
  } else {
    throw vpa::IoError("trajectory path '" + path + "' does not exist");
  }
  return sessions;
}

std::map<std::string, std::vector<vpa::VisitRecord>> load_all_annotations(
    const std::string& path) {
  std::map<std::string, std::vector<vpa::VisitRecord>> merged;
  const fs::path p(path);
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > 17 &&
          name.substr(name.size() - 17) == "_annotations.json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      for (auto& [id, visits] : vpa::load_annotations(f)) {
        merged[id] = std::move(visits);
      }
    }
  } else if (fs::exists(p)) {
    merged = vpa::load_annotations(p);
  } else {
    throw vpa::IoError("annotation path '" + path + "' does not exist");
  }
  return merged;
}

vpa::SolverBackend backend_from(const std::string& name) {
  if (name == "bnb") return vpa::SolverBackend::bnb;
  if (name == "exhaustive") return vpa::SolverBackend::exhaustive;
  if (name == "chain") return vpa::SolverBackend::chain;
  throw vpa::InvalidConfigError("unknown backend '" + name + "'");
}

vpa::OverlapPolicy overlap_policy_from(const std::string& name) {
  if (name == "earliest") return vpa::OverlapPolicy::earliest;
  if (name == "longest") return vpa::OverlapPolicy::longest;
  throw vpa::InvalidConfigError("unknown overlap policy '" + name + "'");
}

vpa::WeightVector resolve_weights(const RunConfig& cfg) {
  if (cfg.weight_source == "file") {
    if (cfg.weights_path.empty()) {
      throw vpa::InvalidConfigError("weight source 'file' needs weights.path");
    }
    return vpa::load_weights(cfg.weights_path);
  }
  return vpa::WeightVector::ones();
}

int cmd_synth(const RunConfig& cfg, bool seed_flag_given) {
  vpa::WorldConfig wc =
      vpa::world_config_from_json(cfg.synth_overrides.dump(), vpa::WorldConfig{});
  if (seed_flag_given || !cfg.synth_overrides.contains("seed")) wc.seed = cfg.seed;
  if (cfg.synth_sessions > 0) wc.n_sessions = cfg.synth_sessions;
  wc.utc_offset_seconds = parse_tz_offset(cfg.timezone_offset);

  const vpa::World world = vpa::generate_world(wc);
  std::vector<std::pair<vpa::SyntheticUser, std::vector<vpa::AnnotatedSession>>>
      users;
  for (int u = 0; u < cfg.synth_users; ++u) {
    const vpa::SyntheticUser user = vpa::make_user(world, wc, u);
    users.emplace_back(user, vpa::generate_user_days(world, user, wc));
  }
  const vpa::CorpusManifest manifest =
      vpa::export_corpus(world, users, cfg.out, wc);
  std::cout << "wrote " << manifest.files.size() << " files to " << cfg.out
            << "\n";
  return kOk;
}

int cmd_extract(const RunConfig& cfg) {
  const int tz = parse_tz_offset(cfg.timezone_offset);
  const auto params = parse_param_sets(cfg.param_sets, 100.0, 180.0);
  const auto sessions = load_sessions(cfg.trajectories, tz);
  if (sessions.empty()) {
    std::cerr << "warning: no trajectory files under '" << cfg.trajectories
              << "'\n";
    return kOk;
  }
  fs::create_directories(cfg.out);
  for (const vpa::Session& s : sessions) {
    const vpa::CandidateSet cs = vpa::extract_candidates(s, params);
    vpa::save_candidates(fs::path(cfg.out) / (s.id + ".stays.json"), s.id, cs);
  }
  std::cout << "extracted candidates for " << sessions.size() << " sessions\n";
  return kOk;
}

std::vector<vpa::AnnotatedSession> pair_annotations(
    const std::vector<vpa::Session>& sessions,
    const std::map<std::string, std::vector<vpa::VisitRecord>>& annots) {
  std::vector<vpa::AnnotatedSession> out;
  for (const vpa::Session& s : sessions) {
    auto it = annots.find(s.id);
    if (it == annots.end()) {
      std::cerr << "warning: session '" << s.id << "' has no annotations\n";
      continue;
    }
    out.emplace_back(s, it->second);
  }
  return out;
}

int cmd_train(const RunConfig& cfg) {
  const int tz = parse_tz_offset(cfg.timezone_offset);
  vpa::FeatureParams features = cfg.features;
  features.utc_offset_seconds = tz;

  const vpa::PoiDatabase db = vpa::load_poi_database(cfg.pois);
  const auto sessions = load_sessions(cfg.trajectories, tz);
  const auto annots = load_all_annotations(cfg.annotations);
  const auto data = pair_annotations(sessions, annots);

  const vpa::FeatureBank bank = vpa::train_feature_bank(data, db, features);
  fs::create_directories(cfg.out);
  const fs::path bank_path =
      cfg.bank.empty() ? fs::path(cfg.out) / "bank.json" : fs::path(cfg.bank);
  vpa::save_feature_bank(bank_path, bank);
  std::cout << "trained bank on " << data.size() << " sessions -> "
            << bank_path.string() << "\n";

  if (cfg.weight_source == "grid") {
    const auto params = parse_param_sets(cfg.param_sets, 100.0, 180.0);
    const vpa::GridSearchResult r = vpa::grid_search_weights(
        data, cfg.grid, backend_from(cfg.backend), db, features, params);
    const fs::path wpath = fs::path(cfg.out) / "weights.json";
    vpa::save_weights(wpath, r.weights);
    std::cout << "grid search: " << r.evaluations
              << " evaluations, best training F1 " << r.best_f1 << " -> "
              << wpath.string() << "\n";
  }
  return kOk;
}

int cmd_assign(const RunConfig& cfg) {
  const int tz = parse_tz_offset(cfg.timezone_offset);
  vpa::FeatureParams features = cfg.features;
  features.utc_offset_seconds = tz;
  const auto params = parse_param_sets(cfg.param_sets, 100.0, 180.0);

  const vpa::PoiDatabase db = vpa::load_poi_database(cfg.pois);
  vpa::PopularityTable pop;
  if (!cfg.popularity.empty()) pop = vpa::load_popularity(cfg.popularity);
  vpa::FeatureBank bank;
  if (cfg.method == "je" || cfg.method == "chain") {
    if (cfg.bank.empty()) {
      throw vpa::InvalidConfigError("method '" + cfg.method +
                                    "' needs --bank from a train run");
    }
    bank = vpa::load_feature_bank(cfg.bank);
  }
  const vpa::WeightVector weights = resolve_weights(cfg);
  const vpa::OverlapPolicy policy = overlap_policy_from(cfg.overlap_policy);

  const auto sessions = load_sessions(cfg.trajectories, tz);
  fs::create_directories(cfg.out);

  for (const vpa::Session& s : sessions) {
    const vpa::CandidateSet cs = vpa::extract_candidates(s, params);
    vpa::Solution sol;
    double seconds = 0.0;
    bool has_objective = false;

    if (cfg.method == "je" || cfg.method == "chain") {
      const vpa::AssignmentProblem p =
          vpa::build_problem(cs, bank, features, weights, db);
      const vpa::SolverBackend backend = cfg.method == "chain"
                                             ? vpa::SolverBackend::chain
                                             : backend_from(cfg.backend);
      const auto t0 = std::chrono::steady_clock::now();
      sol = vpa::solve(p, backend);
      seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
      has_objective = true;
      if (cfg.dump_problem) {
        vpa::write_text_file(fs::path(cfg.out) / (s.id + ".problem.json"),
                             vpa::dump_problem_json(p));
      }
      if (cfg.dump_solution) {
        vpa::write_text_file(fs::path(cfg.out) / (s.id + ".solution.json"),
                             vpa::dump_solution_json(p, sol));
      }
    } else if (cfg.method == "nn") {
      sol = vpa::assign_nn(cs, db, features, policy);
    } else if (cfg.method == "nci") {
      sol = vpa::assign_nci(cs, db, pop, features, policy);
    } else {
      throw vpa::InvalidConfigError("unknown method '" + cfg.method + "'");
    }

    json out;
    out["session"] = s.id;
    out["method"] = cfg.method;
    if (has_objective) out["objective"] = sol.objective;
    if (cfg.timing) out["solve_seconds"] = seconds;
    json selected = json::array();
    for (const vpa::Selected& sel : sol.selected) {
      const vpa::StayPoint& sp = cs.stay_points[sel.sp];
      selected.push_back({{"sp_index", sel.sp},
                          {"begin", sp.begin},
                          {"end", sp.end},
                          {"bt", sp.bt},
                          {"et", sp.et},
                          {"lng", sp.lng},
                          {"lat", sp.lat},
                          {"poi_id", sel.poi_id}});
    }
    out["selected"] = std::move(selected);
    vpa::write_text_file(fs::path(cfg.out) / (s.id + ".assign.json"),
                         out.dump(2) + "\n");
  }
  std::cout << "assigned " << sessions.size() << " sessions with method "
            << cfg.method << "\n";
  return kOk;
}

int cmd_evaluate(const RunConfig& cfg) {
  const int tz = parse_tz_offset(cfg.timezone_offset);
  vpa::FeatureParams features = cfg.features;
  features.utc_offset_seconds = tz;

  const vpa::PoiDatabase db = vpa::load_poi_database(cfg.pois);
  vpa::PopularityTable pop;
  if (!cfg.popularity.empty()) pop = vpa::load_popularity(cfg.popularity);

  vpa::MethodConfig mc;
  mc.backend = backend_from(cfg.backend);
  mc.extraction = parse_param_sets(cfg.param_sets, 100.0, 180.0);
  mc.features = features;
  mc.overlap_policy = overlap_policy_from(cfg.overlap_policy);
  mc.grid_search = cfg.weight_source == "grid";
  mc.grid_values = cfg.grid;
  mc.fixed_weights = resolve_weights(cfg);

  const auto sessions = load_sessions(cfg.trajectories, tz);
  const auto annots = load_all_annotations(cfg.annotations);

  std::map<std::string, std::vector<vpa::AnnotatedSession>> per_user;
  for (const vpa::Session& s : sessions) {
    auto it = annots.find(s.id);
    if (it == annots.end()) {
      std::cerr << "warning: session '" << s.id << "' has no annotations\n";
      continue;
    }
    per_user[vpa::user_of_session(s.id)].emplace_back(s, it->second);
  }

  std::vector<std::pair<std::string, std::map<std::string, vpa::EvalReport>>>
      all_reports;
  json report_json;
  report_json["mode"] = cfg.eval_mode;
  report_json["seed"] = cfg.seed;
  if (cfg.eval_mode == "cv") report_json["folds"] = cfg.folds;
  json users_json = json::object();

  for (const auto& [user, data] : per_user) {
    std::map<std::string, vpa::EvalReport> method_reports;
    json user_json = json::object();
    for (const std::string& name : cfg.methods) {
      auto method = vpa::make_method(name, db, pop, mc);
      vpa::EvalReport report;
      try {
        if (cfg.eval_mode == "cv") {
          report = vpa::run_cross_validation(data, cfg.folds, cfg.seed, *method);
        } else if (cfg.eval_mode == "seq") {
          report = vpa::run_sequential(data, *method);
        } else {
          throw vpa::InvalidConfigError("unknown evaluation mode '" +
                                        cfg.eval_mode + "'");
        }
      } catch (const vpa::TooFewSessionsError& e) {
        std::cerr << "skipping " << user << "/" << name << ": " << e.what()
                  << "\n";
        user_json[name] = {{"skipped", e.what()}};
        continue;
      }
      json m;
      m["precision"] = report.micro_precision();
      m["recall"] = report.micro_recall();
      m["f1"] = report.micro_f1();
      m["macro_f1"] = report.macro_f1;
      if (cfg.timing) m["mean_assign_seconds"] = report.mean_assign_seconds;
      json sess = json::array();
      for (const vpa::SessionScore& s : report.sessions) {
        sess.push_back({{"id", s.session_id},
                        {"tp", s.conf.tp},
                        {"fp", s.conf.fp},
                        {"fn", s.conf.fn}});
      }
      m["sessions"] = std::move(sess);
      for (const std::string& skip : report.skipped) m["notes"].push_back(skip);
      user_json[name] = std::move(m);
      method_reports[name] = std::move(report);
    }
    users_json[user] = std::move(user_json);
    all_reports.emplace_back(user, std::move(method_reports));
  }
  report_json["users"] = std::move(users_json);

  // Corpus aggregate: micro pools every session, macro averages the
  // per-user pooled F1.
  json aggregate = json::object();
  for (const std::string& name : cfg.methods) {
    vpa::Confusion pooled;
    double f1_sum = 0.0;
    int users_counted = 0;
    for (const auto& [user, reports] : all_reports) {
      auto it = reports.find(name);
      if (it == reports.end()) continue;
      pooled += it->second.micro;
      f1_sum += it->second.micro_f1();
      ++users_counted;
    }
    if (users_counted == 0) continue;
    aggregate[name] = {{"micro_precision", vpa::precision(pooled)},
                       {"micro_recall", vpa::recall(pooled)},
                       {"micro_f1", vpa::f1(pooled)},
                       {"macro_f1", f1_sum / users_counted},
                       {"users", users_counted}};
  }
  report_json["aggregate"] = std::move(aggregate);

  fs::create_directories(cfg.out);
  vpa::write_text_file(fs::path(cfg.out) / "report.json",
                       report_json.dump(2) + "\n");
  vpa::write_text_file(fs::path(cfg.out) / "report.csv",
                       vpa::report_csv(all_reports, cfg.timing));
  std::cout << "evaluated " << all_reports.size() << " users, reports in "
            << cfg.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // First pass: only --config, so file values become defaults under flags.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") cfg.config_path = argv[i + 1];
  }
  try {
    apply_config_file(cfg);
  } catch (const vpa::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Stay-point extraction and visited-POI assignment"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON config file");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--out", cfg.out, "Output directory");
  app.add_option("--timezone-offset", cfg.timezone_offset,
                 "Session-day UTC offset (+HH:MM or seconds)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--users", cfg.synth_users, "Number of synthetic users");
  synth->add_option("--sessions", cfg.synth_sessions, "Sessions per user");

  auto* extract = app.add_subcommand("extract", "Extract candidate stay-points");
  double theta_dist = 100.0, theta_time = 180.0;
  extract->add_option("--traj", cfg.trajectories, "Trajectory file or directory");
  extract->add_option("--theta-dist", theta_dist, "Radius threshold in meters");
  extract->add_option("--theta-time", theta_time, "Duration threshold in seconds");
  extract->add_option("--param-set", cfg.param_sets,
                      "Repeatable \"dist,time\" parameter set");

  auto* train = app.add_subcommand("train", "Train the per-user feature bank");
  train->add_option("--traj", cfg.trajectories, "Trajectory directory");
  train->add_option("--annotations", cfg.annotations, "Annotation file or dir");
  train->add_option("--pois", cfg.pois, "POI database file");
  train->add_option("--bank", cfg.bank, "Output bank path");
  train->add_option("--weight-source", cfg.weight_source,
                    "fixed|grid (grid also writes weights.json)");
  train->add_option("--grid", cfg.grid, "Grid values for the weight search");
  train->add_option("--backend", cfg.backend, "Solver for the grid search");
  train->add_option("--param-set", cfg.param_sets, "Extraction parameter sets");

  auto* assign = app.add_subcommand("assign", "Assign visited POIs");
  assign->add_option("--traj", cfg.trajectories, "Trajectory file or directory");
  assign->add_option("--pois", cfg.pois, "POI database file");
  assign->add_option("--bank", cfg.bank, "Feature bank from a train run");
  assign->add_option("--method", cfg.method, "je|chain|nn|nci");
  assign->add_option("--backend", cfg.backend, "exhaustive|bnb (je only)");
  assign->add_option("--weights", cfg.weights_path, "Weights file");
  assign->add_option("--weight-source", cfg.weight_source, "fixed|file");
  assign->add_option("--popularity", cfg.popularity, "Check-in counts (nci)");
  assign->add_option("--overlap-policy", cfg.overlap_policy, "earliest|longest");
  assign->add_option("--param-set", cfg.param_sets, "Extraction parameter sets");
  assign->add_flag("--timing", cfg.timing, "Record solve seconds in outputs");
  assign->add_flag("--dump-problem", cfg.dump_problem, "Write problem dumps");
  assign->add_flag("--dump-solution", cfg.dump_solution, "Write solution dumps");

  auto* evaluate = app.add_subcommand("evaluate", "Run evaluation protocols");
  evaluate->add_option("--traj", cfg.trajectories, "Trajectory directory");
  evaluate->add_option("--annotations", cfg.annotations, "Annotation file or dir");
  evaluate->add_option("--pois", cfg.pois, "POI database file");
  evaluate->add_option("--popularity", cfg.popularity, "Check-in counts (nci)");
  evaluate->add_option("--mode", cfg.eval_mode, "cv|seq");
  evaluate->add_option("--folds", cfg.folds, "Cross-validation folds");
  evaluate->add_option("--methods", cfg.methods, "Methods to evaluate");
  evaluate->add_option("--weight-source", cfg.weight_source, "fixed|grid|file");
  evaluate->add_option("--weights", cfg.weights_path, "Weights file");
  evaluate->add_option("--grid", cfg.grid, "Grid values for the weight search");
  evaluate->add_option("--backend", cfg.backend, "Solver backend for je");
  evaluate->add_option("--overlap-policy", cfg.overlap_policy, "earliest|longest");
  evaluate->add_option("--param-set", cfg.param_sets, "Extraction parameter sets");
  evaluate->add_flag("--timing", cfg.timing, "Include timing rows in reports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      return cmd_synth(cfg, app.count("--seed") > 0);
    }
    if (extract->parsed()) {
      if (cfg.param_sets.empty() && (extract->count("--theta-dist") ||
                                     extract->count("--theta-time") || true)) {
        cfg.param_sets.push_back(std::to_string(theta_dist) + "," +
                                 std::to_string(theta_time));
      }
      return cmd_extract(cfg);
    }
    if (train->parsed()) return cmd_train(cfg);
    if (assign->parsed()) return cmd_assign(cfg);
    if (evaluate->parsed()) return cmd_evaluate(cfg);
  } catch (const vpa::TooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverGuard;
  } catch (const vpa::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const vpa::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const vpa::InvalidConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const vpa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
