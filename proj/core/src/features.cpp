#include "vpa/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vpa/errors.hpp"

namespace vpa {

namespace {

void normalize(std::map<std::string, double>& counts) {
  double total = 0.0;
  for (const auto& [k, v] : counts) total += v;
  if (total <= 0.0) return;
  for (auto& [k, v] : counts) v /= total;
}

// Centroid of the track-points inside [bt, et]; falls back to the POI
// location when the trajectory has no samples there.
GeoPoint visit_center(const Session& s, const VisitRecord& v, const Poi& poi) {
  double sum_lng = 0.0, sum_lat = 0.0;
  std::int64_t n = 0;
  for (const TrackPoint& p : s.points) {
    if (p.ts >= v.bt && p.ts <= v.et) {
      sum_lng += p.lng;
      sum_lat += p.lat;
      ++n;
    }
  }
  if (n == 0) return poi.center();
  return {sum_lng / static_cast<double>(n), sum_lat / static_cast<double>(n)};
}

}  // namespace

double log_normal_density(double x, double nu, double tau) {
  if (x <= 0.0 || tau <= 0.0) return 0.0;
  const double lx = std::log(x);
  const double dev = lx - nu;
  return std::exp(-dev * dev / (2.0 * tau)) /
         (x * std::sqrt(2.0 * std::numbers::pi * tau));
}

double gaussian_density(double x, double mu, double sigma2) {
  if (sigma2 <= 0.0) return 0.0;
  const double dev = x - mu;
  return std::exp(-dev * dev / (2.0 * sigma2)) /
         std::sqrt(2.0 * std::numbers::pi * sigma2);
}

FeatureBank train_feature_bank(const std::vector<AnnotatedSession>& sessions,
                               const PoiDatabase& db,
                               const FeatureParams& params) {
  if (sessions.empty()) throw EmptyTrainingError("no annotated sessions");

  FeatureBank bank;
  bank.n_categories = db.category_count();

  std::map<std::string, double> poi_counts;
  std::array<std::map<std::string, double>, 4> poi_time_counts;
  std::map<std::string, double> cat_counts;
  std::array<std::map<std::string, double>, 4> cat_time_counts;
  std::map<std::string, std::vector<double>> log_minutes;

  double sum_m = 0.0, sum_m2 = 0.0;

  for (const auto& [session, visits] : sessions) {
    std::vector<VisitRecord> ordered = visits;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const VisitRecord& a, const VisitRecord& b) {
                       return a.bt < b.bt;
                     });

    std::set<std::string> cats_here;
    const std::string* prev_cat = nullptr;
    for (const VisitRecord& v : ordered) {
      const Poi* poi = db.find(v.poi_id);
      if (poi == nullptr) {
        throw InvalidConfigError("annotation references unknown POI '" +
                                 v.poi_id + "'");
      }
      bank.sig_centers.push_back(visit_center(session, v, *poi));

      const int w = time_window(v.bt, params.utc_offset_seconds);
      poi_counts[poi->id] += 1.0;
      poi_time_counts[w][poi->id] += 1.0;
      cat_counts[poi->cat] += 1.0;
      cat_time_counts[w][poi->cat] += 1.0;

      const double minutes = static_cast<double>(v.et - v.bt) / 60.0;
      if (minutes > 0.0) log_minutes[poi->cat].push_back(std::log(minutes));

      cats_here.insert(poi->cat);
      if (prev_cat != nullptr) {
        bank.trans[*prev_cat][poi->cat] += 1;
        bank.trans_out[*prev_cat] += 1;
      }
      prev_cat = &poi->cat;
    }
    bank.session_cats.push_back(std::move(cats_here));

    const double m = static_cast<double>(ordered.size());
    sum_m += m;
    sum_m2 += m * m;
  }

  normalize(poi_counts);
  normalize(cat_counts);
  for (int w = 0; w < 4; ++w) {
    normalize(poi_time_counts[w]);
    normalize(cat_time_counts[w]);
  }
  bank.f_poi = std::move(poi_counts);
  bank.f_cat = std::move(cat_counts);
  bank.f_poi_time = std::move(poi_time_counts);
  bank.f_cat_time = std::move(cat_time_counts);

  for (const auto& [cat, logs] : log_minutes) {
    LogNormalFit fit;
    const double n = static_cast<double>(logs.size());
    for (double v : logs) fit.nu += v;
    fit.nu /= n;
    for (double v : logs) fit.tau += (v - fit.nu) * (v - fit.nu);
    fit.tau /= n;
    bank.lognorm[cat] = fit;
  }

  const double n = static_cast<double>(sessions.size());
  bank.mu_y = sum_m / n;
  bank.sigma2_y = sum_m2 / n - bank.mu_y * bank.mu_y;
  if (bank.sigma2_y < 0.0) bank.sigma2_y = 0.0;  // fp guard
  return bank;
}

StayPointFeatures stay_point_features(const FeatureBank& bank,
                                      const FeatureParams& params,
                                      const StayPoint& sp) {
  double x1 = 0.0;
  if (!bank.sig_centers.empty()) {
    double best = std::numeric_limits<double>::infinity();
    for (const GeoPoint& c : bank.sig_centers) {
      best = std::min(best, geo_distance(sp.center(), c));
    }
    x1 = std::exp(-params.gamma * best * best);
  }
  const double x2 = 1.0 - std::exp(-params.lambda * stay_minutes(sp));
  return {{x1, x2}, {1.0 - x1, 1.0 - x2}};
}

std::array<double, 3> stay_poi_features(const FeatureBank& bank,
                                        const FeatureParams& params,
                                        const StayPoint& sp, const Poi& poi) {
  const int w = time_window(sp.bt, params.utc_offset_seconds);

  auto lookup = [](const std::map<std::string, double>& table,
                   const std::string& key) {
    auto it = table.find(key);
    return it == table.end() ? 0.0 : it->second;
  };

  const double fp = lookup(bank.f_poi, poi.id);
  const double fpt = lookup(bank.f_poi_time[w], poi.id);
  const double fc = lookup(bank.f_cat, poi.cat);
  const double fct = lookup(bank.f_cat_time[w], poi.cat);

  const double x1 = params.alpha1 * fpt + (1.0 - params.alpha1) * fp;
  const double x2 = params.alpha2 * fct + (1.0 - params.alpha2) * fc;

  double x3 = 0.0;
  auto it = bank.lognorm.find(poi.cat);
  if (it != bank.lognorm.end()) {
    const double tau = std::max(it->second.tau, params.lognorm_tau_floor);
    x3 = log_normal_density(stay_minutes(sp), it->second.nu, tau);
  }
  return {x1, x2, x3};
}

std::array<double, 2> poi_pair_features(const FeatureBank& bank,
                                        const FeatureParams& params,
                                        const Poi& k, const Poi& l) {
  std::int64_t pair_count = 0;
  if (auto row = bank.trans.find(k.cat); row != bank.trans.end()) {
    if (auto cell = row->second.find(l.cat); cell != row->second.end()) {
      pair_count = cell->second;
    }
  }
  std::int64_t out_count = 0;
  if (auto it = bank.trans_out.find(k.cat); it != bank.trans_out.end()) {
    out_count = it->second;
  }
  const double denom = static_cast<double>(out_count) +
                       params.beta * static_cast<double>(bank.n_categories);
  const double x1 =
      denom > 0.0 ? (static_cast<double>(pair_count) + params.beta) / denom : 0.0;

  std::int64_t with_k = 0, with_l = 0, with_both = 0, with_either = 0;
  for (const auto& cats : bank.session_cats) {
    const bool has_k = cats.count(k.cat) > 0;
    const bool has_l = cats.count(l.cat) > 0;
    with_k += has_k;
    with_l += has_l;
    with_both += has_k && has_l;
    with_either += has_k || has_l;
  }
  const double jd = params.jaccard_union_denominator
                        ? static_cast<double>(with_either)
                        : static_cast<double>(with_k + with_l);
  const double x2 = jd > 0.0 ? static_cast<double>(with_both) / jd : 0.0;
  return {x1, x2};
}

double length_feature(const FeatureBank& bank, int m) {
  if (bank.sigma2_y <= 0.0) {
    return m == static_cast<int>(std::llround(bank.mu_y)) ? 1.0 : 0.0;
  }
  return gaussian_density(static_cast<double>(m), bank.mu_y, bank.sigma2_y);
}

std::vector<const Poi*> candidate_pois(const PoiDatabase& db,
                                       const StayPoint& sp,
                                       const FeatureParams& params) {
  auto hits = db.radius_query(sp.center(), params.candidate_radius);
  if (params.max_candidates >= 0 &&
      hits.size() > static_cast<std::size_t>(params.max_candidates)) {
    hits.resize(static_cast<std::size_t>(params.max_candidates));
  }
  std::vector<const Poi*> out;
  out.reserve(hits.size());
  for (const auto& [poi, dist] : hits) out.push_back(poi);
  return out;
}

}  // namespace vpa
