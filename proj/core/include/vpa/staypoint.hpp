#pragma once

#include <utility>
#include <vector>

#include "vpa/geo.hpp"

namespace vpa {

struct ExtractionParams {
  double theta_dist = 100.0;  // meters
  double theta_time = 180.0;  // seconds
};

// Candidate stay-points from one or more parameter sets, plus the set L of
// index pairs whose spans share at least one track-point.
struct CandidateSet {
  std::vector<StayPoint> stay_points;             // sorted by (begin, end)
  std::vector<std::pair<int, int>> overlap_pairs;  // i < j into stay_points
};

/// True iff the index spans share at least one track-point.
bool overlaps(const StayPoint& a, const StayPoint& b);

/// One-pass scan: a point joins the growing cluster while it lies within
/// theta_dist of the running centroid; a maximal cluster of duration
/// >= theta_time is emitted and the scan resumes after it, otherwise the
/// anchor advances by one point.
std::vector<StayPoint> extract_stay_points(const Session& s,
                                           const ExtractionParams& params);

/// Union of extract_stay_points over all parameter sets, de-duplicated on
/// identical spans, with overlap pairs computed over the union.
CandidateSet extract_candidates(const Session& s,
                                const std::vector<ExtractionParams>& param_sets);

}  // namespace vpa
