#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vpa/baselines.hpp"
#include "vpa/features.hpp"
#include "vpa/geo.hpp"
#include "vpa/solver.hpp"
#include "vpa/staypoint.hpp"

namespace vpa {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

double precision(const Confusion& c);
double recall(const Confusion& c);
/// 2tp / (2tp + fp + fn); 0 when the denominator is 0.
double f1(const Confusion& c);

// One predicted visit, ready for scoring.
struct PredictedVisit {
  StayPoint sp;
  std::string poi_id;
};

/// Converts a solver/baseline solution into predicted visits.
std::vector<PredictedVisit> to_predictions(const CandidateSet& cs,
                                           const Solution& sol);

/// Middle-timestamp matching: a prediction matches the truth interval
/// containing (bt+et)/2; a matched prediction with the right POI is a TP,
/// anything else predicted is an FP, unmatched truths are FNs. When several
/// predictions match one truth, the earliest counts and the rest are FPs.
Confusion match_and_score(std::vector<PredictedVisit> predicted,
                          const std::vector<VisitRecord>& truth);

/// Extraction scoring: a stay-point whose span contains a truth interval's
/// midpoint and whose center lies within match_distance_m of that truth's
/// center is a TP; other extractions are FPs; uncovered truths are FNs.
Confusion score_extraction(const std::vector<StayPoint>& stay_points,
                           const std::vector<VisitRecord>& truth,
                           const std::vector<GeoPoint>& truth_centers,
                           double match_distance_m = 50.0);

struct SessionScore {
  std::string session_id;
  Confusion conf;
  double assign_seconds = 0.0;
};

struct EvalReport {
  std::vector<SessionScore> sessions;
  Confusion micro;  // pooled over evaluated sessions
  double macro_f1 = 0.0;  // mean of per-session F1
  double mean_assign_seconds = 0.0;
  std::vector<std::string> skipped;  // fold/session skip reasons

  double micro_precision() const { return precision(micro); }
  double micro_recall() const { return recall(micro); }
  double micro_f1() const { return f1(micro); }
};

// A trainable assignment method under evaluation.
class Method {
 public:
  virtual ~Method() = default;
  virtual void train(const std::vector<AnnotatedSession>& data) = 0;
  virtual std::vector<PredictedVisit> assign(const Session& s) = 0;
  virtual std::string name() const = 0;
};

struct MethodConfig {
  SolverBackend backend = SolverBackend::bnb;
  std::vector<ExtractionParams> extraction{{100.0, 180.0}};
  FeatureParams features;
  OverlapPolicy overlap_policy = OverlapPolicy::earliest;
  // Weight policy for the joint methods.
  bool grid_search = false;
  std::vector<double> grid_values{0.1, 1.0};
  WeightVector fixed_weights = WeightVector::ones();
};

/// name: "je" (full pairwise), "chain" (consecutive pairs only),
/// "nn", "nci".
std::unique_ptr<Method> make_method(const std::string& name,
                                    const PoiDatabase& db,
                                    const PopularityTable& pop,
                                    const MethodConfig& config);

struct GridSearchResult {
  WeightVector weights;
  int evaluations = 0;
  double best_f1 = 0.0;
};

/// Evaluates every weight vector in grid_values^10 on the training sessions
/// (features trained on the same data) and returns the best by pooled F1;
/// ties go to the lexicographically smaller flat vector.
GridSearchResult grid_search_weights(const std::vector<AnnotatedSession>& train,
                                     const std::vector<double>& grid_values,
                                     SolverBackend backend,
                                     const PoiDatabase& db,
                                     const FeatureParams& params,
                                     const std::vector<ExtractionParams>& extraction);

/// Session-level k-fold cross-validation; folds assigned by seeded hash rank
/// (fold = rank mod folds), so folds == sessions is leave-one-session-out.
EvalReport run_cross_validation(const std::vector<AnnotatedSession>& data,
                                int folds, std::uint64_t seed, Method& method);

/// Train on the first three sessions, then evaluate each later session in
/// order, folding it into the training set afterwards.
EvalReport run_sequential(const std::vector<AnnotatedSession>& data,
                          Method& method);

/// Mean wall-clock solve seconds bucketed by candidate stay-point count;
/// one warm-up solve per session is excluded from the timing.
std::map<int, double> time_solver(const std::vector<Session>& sessions,
                                  SolverBackend backend,
                                  const FeatureBank& bank,
                                  const WeightVector& weights,
                                  const PoiDatabase& db,
                                  const FeatureParams& params,
                                  const std::vector<ExtractionParams>& extraction);

/// Flat CSV: one row per user x method x metric. Timing rows are opt-in so
/// that default artifacts stay byte-reproducible across runs.
std::string report_csv(
    const std::vector<std::pair<std::string, std::map<std::string, EvalReport>>>&
        per_user_method_reports,
    bool include_timing = false);

}  // namespace vpa
