#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vpa/geo.hpp"

namespace vpa {

struct FeatureParams {
  double gamma = 0.1;          // Gaussian accuracy, 1/m^2
  double lambda = 1.0 / 30.0;  // exponential rate, per minute of stay time
  double alpha1 = 0.9;         // POI-frequency interpolation weight
  double alpha2 = 0.9;         // category-frequency interpolation weight
  double beta = 0.01;          // transition smoothing
  double candidate_radius = 500.0;  // meters
  int max_candidates = 50;
  double lognorm_tau_floor = 0.25;  // log-minutes^2, floor on fitted variance
  bool jaccard_union_denominator = false;  // standard form instead of printed sum
  int utc_offset_seconds = 0;  // six-hour windows computed in this offset
};

// Log stay-time statistics for one category; tau is the variance of
// ln(stay minutes), not the standard deviation.
struct LogNormalFit {
  double nu = 0.0;
  double tau = 0.0;
};

using AnnotatedSession = std::pair<Session, std::vector<VisitRecord>>;

// Everything trained from one user's annotated sessions.
struct FeatureBank {
  std::vector<GeoPoint> sig_centers;  // centroids of annotated visit spans
  std::map<std::string, double> f_poi;
  std::array<std::map<std::string, double>, 4> f_poi_time;
  std::map<std::string, double> f_cat;
  std::array<std::map<std::string, double>, 4> f_cat_time;
  std::map<std::string, LogNormalFit> lognorm;
  // trans_out[c] counts transitions leaving c, so the smoothed conditional
  // distribution normalizes exactly over the category universe.
  std::map<std::string, std::int64_t> trans_out;
  std::map<std::string, std::map<std::string, std::int64_t>> trans;
  std::vector<std::set<std::string>> session_cats;  // one set per session
  double mu_y = 0.0;      // mean visits per session
  double sigma2_y = 0.0;  // biased (1/n) variance of visits per session
  std::size_t n_categories = 0;  // |C|, from the POI database
};

/// Trains all per-user statistics. Throws EmptyTrainingError on an empty
/// corpus. Visit poi_ids must resolve in `db`.
FeatureBank train_feature_bank(const std::vector<AnnotatedSession>& sessions,
                               const PoiDatabase& db,
                               const FeatureParams& params);

struct StayPointFeatures {
  std::array<double, 2> x_s;
  std::array<double, 2> x_sbar;
};

StayPointFeatures stay_point_features(const FeatureBank& bank,
                                      const FeatureParams& params,
                                      const StayPoint& sp);

std::array<double, 3> stay_poi_features(const FeatureBank& bank,
                                        const FeatureParams& params,
                                        const StayPoint& sp, const Poi& poi);

std::array<double, 2> poi_pair_features(const FeatureBank& bank,
                                        const FeatureParams& params,
                                        const Poi& k, const Poi& l);

/// Gaussian prior over the number of selected visits; degenerate variance
/// collapses to an indicator on round(mu_y).
double length_feature(const FeatureBank& bank, int m);

/// POIs within candidate_radius of the stay-point center, nearest first,
/// truncated to max_candidates.
std::vector<const Poi*> candidate_pois(const PoiDatabase& db,
                                       const StayPoint& sp,
                                       const FeatureParams& params);

/// Log-normal pdf at x > 0 with log-mean nu and log-variance tau.
double log_normal_density(double x, double nu, double tau);

/// Normal pdf with variance sigma2.
double gaussian_density(double x, double mu, double sigma2);

inline double stay_minutes(const StayPoint& sp) {
  return static_cast<double>(sp.st) / 60.0;
}

}  // namespace vpa
