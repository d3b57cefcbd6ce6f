#include "vpa/staypoint.hpp"

#include <algorithm>

#include "vpa/errors.hpp"

namespace vpa {

bool overlaps(const StayPoint& a, const StayPoint& b) {
  return a.begin <= b.end && b.begin <= a.end;
}

namespace {

void check_params(const ExtractionParams& p) {
  if (p.theta_dist <= 0.0 || p.theta_time <= 0.0) {
    throw InvalidConfigError("extraction thresholds must be positive");
  }
}

}  // namespace

std::vector<StayPoint> extract_stay_points(const Session& s,
                                           const ExtractionParams& params) {
  check_params(params);
  std::vector<StayPoint> out;
  const auto& pts = s.points;
  const int n = static_cast<int>(pts.size());

  int i = 0;
  while (i < n) {
    double sum_lng = pts[i].lng;
    double sum_lat = pts[i].lat;
    int j = i;
    while (j + 1 < n) {
      const double count = static_cast<double>(j - i + 1);
      const GeoPoint centroid{sum_lng / count, sum_lat / count};
      const GeoPoint next{pts[j + 1].lng, pts[j + 1].lat};
      if (geo_distance(centroid, next) > params.theta_dist) break;
      ++j;
      sum_lng += pts[j].lng;
      sum_lat += pts[j].lat;
    }
    if (static_cast<double>(pts[j].ts - pts[i].ts) >= params.theta_time) {
      out.push_back(make_stay_point(s, i, j));
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

CandidateSet extract_candidates(const Session& s,
                                const std::vector<ExtractionParams>& param_sets) {
  if (param_sets.empty()) {
    throw InvalidConfigError("at least one extraction parameter set required");
  }
  CandidateSet cs;
  for (const ExtractionParams& p : param_sets) {
    auto found = extract_stay_points(s, p);
    cs.stay_points.insert(cs.stay_points.end(), found.begin(), found.end());
  }
  std::sort(cs.stay_points.begin(), cs.stay_points.end(),
            [](const StayPoint& a, const StayPoint& b) {
              if (a.begin != b.begin) return a.begin < b.begin;
              return a.end < b.end;
            });
  cs.stay_points.erase(
      std::unique(cs.stay_points.begin(), cs.stay_points.end(),
                  [](const StayPoint& a, const StayPoint& b) {
                    return a.begin == b.begin && a.end == b.end;
                  }),
      cs.stay_points.end());

  const int m = static_cast<int>(cs.stay_points.size());
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (cs.stay_points[b].begin > cs.stay_points[a].end) break;  // sorted
      if (overlaps(cs.stay_points[a], cs.stay_points[b])) {
        cs.overlap_pairs.emplace_back(a, b);
      }
    }
  }
  return cs;
}

}  // namespace vpa
