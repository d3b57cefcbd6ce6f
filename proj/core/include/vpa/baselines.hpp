#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "vpa/features.hpp"
#include "vpa/solver.hpp"
#include "vpa/staypoint.hpp"

namespace vpa {

// Check-in counts per POI id; missing ids count as zero.
struct PopularityTable {
  std::map<std::string, std::int64_t> checkins;

  std::int64_t count(std::string_view id) const {
    auto it = checkins.find(std::string(id));
    return it == checkins.end() ? 0 : it->second;
  }
};

// How point-wise baselines resolve overlapping candidate stay-points.
enum class OverlapPolicy { earliest, longest };

/// Pairs every candidate stay-point with its nearest POI; stay-points with
/// no candidates are dropped, overlaps resolved per policy.
Solution assign_nn(const CandidateSet& cs, const PoiDatabase& db,
                   const FeatureParams& params,
                   OverlapPolicy policy = OverlapPolicy::earliest);

/// As assign_nn but picks the candidate with the most check-ins; ties go to
/// the nearer POI, then the smaller id.
Solution assign_nci(const CandidateSet& cs, const PoiDatabase& db,
                    const PopularityTable& pop, const FeatureParams& params,
                    OverlapPolicy policy = OverlapPolicy::earliest);

}  // namespace vpa
