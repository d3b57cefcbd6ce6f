#include "vpa/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "vpa/errors.hpp"

namespace vpa {

double precision(const Confusion& c) {
  const double denom = static_cast<double>(c.tp + c.fp);
  return denom > 0.0 ? static_cast<double>(c.tp) / denom : 0.0;
}

double recall(const Confusion& c) {
  const double denom = static_cast<double>(c.tp + c.fn);
  return denom > 0.0 ? static_cast<double>(c.tp) / denom : 0.0;
}

double f1(const Confusion& c) {
  const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
  return denom > 0.0 ? 2.0 * static_cast<double>(c.tp) / denom : 0.0;
}

std::vector<PredictedVisit> to_predictions(const CandidateSet& cs,
                                           const Solution& sol) {
  std::vector<PredictedVisit> out;
  out.reserve(sol.selected.size());
  for (const Selected& s : sol.selected) {
    out.push_back({cs.stay_points[s.sp], s.poi_id});
  }
  return out;
}

namespace {

// Index of the truth interval containing ts, or -1. Truth intervals are
// pairwise disjoint, so at most one matches.
int containing_truth(const std::vector<VisitRecord>& truth, double ts) {
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (ts >= static_cast<double>(truth[i].bt) &&
        ts <= static_cast<double>(truth[i].et)) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

Confusion match_and_score(std::vector<PredictedVisit> predicted,
                          const std::vector<VisitRecord>& truth) {
  std::sort(predicted.begin(), predicted.end(),
            [](const PredictedVisit& a, const PredictedVisit& b) {
              if (a.sp.bt != b.sp.bt) return a.sp.bt < b.sp.bt;
              if (a.sp.et != b.sp.et) return a.sp.et < b.sp.et;
              return a.poi_id < b.poi_id;
            });

  Confusion c;
  std::vector<char> claimed(truth.size(), 0);
  for (const PredictedVisit& pred : predicted) {
    const double mid =
        (static_cast<double>(pred.sp.bt) + static_cast<double>(pred.sp.et)) / 2.0;
    const int t = containing_truth(truth, mid);
    if (t < 0 || claimed[t]) {
      ++c.fp;
      continue;
    }
    claimed[t] = 1;
    if (truth[t].poi_id == pred.poi_id) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (!claimed[t]) ++c.fn;
  }
  return c;
}

Confusion score_extraction(const std::vector<StayPoint>& stay_points,
                           const std::vector<VisitRecord>& truth,
                           const std::vector<GeoPoint>& truth_centers,
                           double match_distance_m) {
  std::vector<StayPoint> sps = stay_points;
  std::sort(sps.begin(), sps.end(), [](const StayPoint& a, const StayPoint& b) {
    if (a.bt != b.bt) return a.bt < b.bt;
    return a.et < b.et;
  });

  Confusion c;
  std::vector<char> claimed(truth.size(), 0);
  for (const StayPoint& sp : sps) {
    int hit = -1;
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const double mid =
          (static_cast<double>(truth[t].bt) + static_cast<double>(truth[t].et)) / 2.0;
      if (static_cast<double>(sp.bt) <= mid && mid <= static_cast<double>(sp.et) &&
          geo_distance(sp.center(), truth_centers[t]) < match_distance_m) {
        hit = static_cast<int>(t);
        break;
      }
    }
    if (hit < 0 || claimed[hit]) {
      ++c.fp;
    } else {
      claimed[hit] = 1;
      ++c.tp;
    }
  }
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (!claimed[t]) ++c.fn;
  }
  return c;
}

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return h;
}

class JointMethod : public Method {
 public:
  JointMethod(std::string name, const PoiDatabase& db, const MethodConfig& cfg)
      : name_(std::move(name)), db_(db), cfg_(cfg) {}

  void train(const std::vector<AnnotatedSession>& data) override {
    bank_ = train_feature_bank(data, db_, cfg_.features);
    if (cfg_.grid_search) {
      weights_ = grid_search_weights(data, cfg_.grid_values, backend(), db_,
                                     cfg_.features, cfg_.extraction)
                     .weights;
    } else {
      weights_ = cfg_.fixed_weights;
    }
  }

  std::vector<PredictedVisit> assign(const Session& s) override {
    const CandidateSet cs = extract_candidates(s, cfg_.extraction);
    const AssignmentProblem p =
        build_problem(cs, bank_, cfg_.features, weights_, db_);
    return to_predictions(cs, solve(p, backend()));
  }

  std::string name() const override { return name_; }

 private:
  SolverBackend backend() const {
    return name_ == "chain" ? SolverBackend::chain : cfg_.backend;
  }

  std::string name_;
  const PoiDatabase& db_;
  MethodConfig cfg_;
  FeatureBank bank_;
  WeightVector weights_;
};

class PointwiseMethod : public Method {
 public:
  PointwiseMethod(std::string name, const PoiDatabase& db,
                  const PopularityTable& pop, const MethodConfig& cfg)
      : name_(std::move(name)), db_(db), pop_(pop), cfg_(cfg) {}

  void train(const std::vector<AnnotatedSession>&) override {}

  std::vector<PredictedVisit> assign(const Session& s) override {
    const CandidateSet cs = extract_candidates(s, cfg_.extraction);
    const Solution sol =
        name_ == "nn"
            ? assign_nn(cs, db_, cfg_.features, cfg_.overlap_policy)
            : assign_nci(cs, db_, pop_, cfg_.features, cfg_.overlap_policy);
    return to_predictions(cs, sol);
  }

  std::string name() const override { return name_; }

 private:
  std::string name_;
  const PoiDatabase& db_;
  const PopularityTable& pop_;
  MethodConfig cfg_;
};

}  // namespace

std::unique_ptr<Method> make_method(const std::string& name,
                                    const PoiDatabase& db,
                                    const PopularityTable& pop,
                                    const MethodConfig& config) {
  if (name == "je" || name == "chain") {
    return std::make_unique<JointMethod>(name, db, config);
  }
  if (name == "nn" || name == "nci") {
    return std::make_unique<PointwiseMethod>(name, db, pop, config);
  }
  throw InvalidConfigError("unknown method '" + name + "'");
}

GridSearchResult grid_search_weights(const std::vector<AnnotatedSession>& train,
                                     const std::vector<double>& grid_values,
                                     SolverBackend backend,
                                     const PoiDatabase& db,
                                     const FeatureParams& params,
                                     const std::vector<ExtractionParams>& extraction) {
  if (train.empty()) throw EmptyTrainingError("grid search on empty training set");
  if (grid_values.empty()) {
    throw InvalidConfigError("grid search requires at least one value");
  }

  std::vector<double> values = grid_values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const FeatureBank bank = train_feature_bank(train, db, params);
  std::vector<CandidateSet> candidate_sets;
  std::vector<ProblemFeatures> features;
  candidate_sets.reserve(train.size());
  features.reserve(train.size());
  for (const auto& [session, visits] : train) {
    candidate_sets.push_back(extract_candidates(session, extraction));
    features.push_back(featurize_problem(candidate_sets.back(), bank, params, db));
  }

  GridSearchResult result;
  result.best_f1 = -1.0;

  const int dim = WeightVector::kDim;
  std::vector<int> idx(dim, 0);
  while (true) {
    WeightVector w;
    for (int d = 0; d < dim; ++d) w.set_flat(d, values[idx[d]]);

    Confusion pooled;
    for (std::size_t s = 0; s < train.size(); ++s) {
      const AssignmentProblem p = apply_weights(features[s], w);
      const Solution sol = solve(p, backend);
      pooled += match_and_score(to_predictions(candidate_sets[s], sol),
                                train[s].second);
    }
    const double score = f1(pooled);
    ++result.evaluations;
    // Enumeration is lexicographic over the flat vector with ascending
    // values, so strict improvement keeps the lexicographically smallest.
    if (score > result.best_f1) {
      result.best_f1 = score;
      result.weights = w;
    }

    int d = dim - 1;
    while (d >= 0 && idx[d] + 1 == static_cast<int>(values.size())) {
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
    ++idx[d];
  }
  return result;
}

namespace {

EvalReport finish_report(EvalReport report) {
  double f1_sum = 0.0;
  double time_sum = 0.0;
  for (const SessionScore& s : report.sessions) {
    report.micro += s.conf;
    f1_sum += f1(s.conf);
    time_sum += s.assign_seconds;
  }
  if (!report.sessions.empty()) {
    report.macro_f1 = f1_sum / static_cast<double>(report.sessions.size());
    report.mean_assign_seconds =
        time_sum / static_cast<double>(report.sessions.size());
  }
  return report;
}

SessionScore evaluate_session(Method& method, const AnnotatedSession& data) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<PredictedVisit> preds = method.assign(data.first);
  const auto t1 = std::chrono::steady_clock::now();
  SessionScore score;
  score.session_id = data.first.id;
  score.conf = match_and_score(preds, data.second);
  score.assign_seconds = std::chrono::duration<double>(t1 - t0).count();
  return score;
}

}  // namespace

EvalReport run_cross_validation(const std::vector<AnnotatedSession>& data,
                                int folds, std::uint64_t seed, Method& method) {
  if (folds < 2) throw InvalidConfigError("cross-validation needs folds >= 2");
  if (static_cast<int>(data.size()) < folds) {
    throw TooFewSessionsError("cross-validation needs at least " +
                              std::to_string(folds) + " sessions, got " +
                              std::to_string(data.size()));
  }

  // Deterministic fold assignment: order sessions by seeded hash, then deal
  // round-robin. folds == #sessions degenerates to leave-one-session-out.
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const std::string seed_tag = ":" + std::to_string(seed);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::uint64_t ha = fnv1a64(data[a].first.id + seed_tag);
    const std::uint64_t hb = fnv1a64(data[b].first.id + seed_tag);
    if (ha != hb) return ha < hb;
    return data[a].first.id < data[b].first.id;
  });
  std::vector<int> fold_of(data.size(), 0);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    fold_of[order[rank]] = static_cast<int>(rank % folds);
  }

  EvalReport report;
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<AnnotatedSession> train;
    std::vector<const AnnotatedSession*> test;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] == fold) {
        test.push_back(&data[i]);
      } else {
        train.push_back(data[i]);
      }
    }
    if (test.empty()) continue;
    if (train.empty()) {
      report.skipped.push_back("fold " + std::to_string(fold) +
                               ": empty training split");
      continue;
    }
    method.train(train);
    for (const AnnotatedSession* t : test) {
      report.sessions.push_back(evaluate_session(method, *t));
    }
  }
  std::sort(report.sessions.begin(), report.sessions.end(),
            [](const SessionScore& a, const SessionScore& b) {
              return a.session_id < b.session_id;
            });
  return finish_report(std::move(report));
}

EvalReport run_sequential(const std::vector<AnnotatedSession>& data,
                          Method& method) {
  constexpr std::size_t kInitialTraining = 3;
  if (data.size() < kInitialTraining + 1) {
    throw TooFewSessionsError("sequential evaluation needs at least 4 sessions");
  }

  std::vector<AnnotatedSession> train(data.begin(),
                                      data.begin() + kInitialTraining);
  EvalReport report;
  for (std::size_t i = kInitialTraining; i < data.size(); ++i) {
    method.train(train);
    report.sessions.push_back(evaluate_session(method, data[i]));
    train.push_back(data[i]);
  }
  return finish_report(std::move(report));
}

std::map<int, double> time_solver(const std::vector<Session>& sessions,
                                  SolverBackend backend,
                                  const FeatureBank& bank,
                                  const WeightVector& weights,
                                  const PoiDatabase& db,
                                  const FeatureParams& params,
                                  const std::vector<ExtractionParams>& extraction) {
  std::map<int, std::pair<double, int>> buckets;  // n_sp -> (sum, count)
  for (const Session& s : sessions) {
    const CandidateSet cs = extract_candidates(s, extraction);
    const AssignmentProblem p = build_problem(cs, bank, params, weights, db);
    solve(p, backend);  // warm-up, excluded
    const auto t0 = std::chrono::steady_clock::now();
    solve(p, backend);
    const auto t1 = std::chrono::steady_clock::now();
    auto& [sum, count] = buckets[p.n()];
    sum += std::chrono::duration<double>(t1 - t0).count();
    ++count;
  }
  std::map<int, double> means;
  for (const auto& [n, agg] : buckets) {
    means[n] = agg.first / static_cast<double>(agg.second);
  }
  return means;
}

std::string report_csv(
    const std::vector<std::pair<std::string, std::map<std::string, EvalReport>>>&
        per_user_method_reports,
    bool include_timing) {
  std::string out = "user,method,metric,value\n";
  char buf[64];
  auto row = [&](const std::string& user, const std::string& method,
                 const std::string& metric, double value) {
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    out += user + "," + method + "," + metric + "," + buf + "\n";
  };
  for (const auto& [user, methods] : per_user_method_reports) {
    for (const auto& [method, report] : methods) {
      row(user, method, "precision", report.micro_precision());
      row(user, method, "recall", report.micro_recall());
      row(user, method, "f1", report.micro_f1());
      row(user, method, "macro_f1", report.macro_f1);
      if (include_timing) {
        row(user, method, "mean_assign_seconds", report.mean_assign_seconds);
      }
    }
  }
  return out;
}

}  // namespace vpa
