#include "vpa/baselines.hpp"

#include <algorithm>
#include <functional>

namespace vpa {

namespace {

// Greedy overlap resolution: visit candidates in policy priority order and
// keep those compatible with everything kept so far.
std::vector<int> resolve_overlaps(const std::vector<StayPoint>& sps,
                                  const std::vector<int>& picked,
                                  OverlapPolicy policy) {
  std::vector<int> order;
  for (std::size_t i = 0; i < sps.size(); ++i) {
    if (picked[i] >= 0) order.push_back(static_cast<int>(i));
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (policy == OverlapPolicy::longest && sps[a].st != sps[b].st) {
      return sps[a].st > sps[b].st;
    }
    if (sps[a].bt != sps[b].bt) return sps[a].bt < sps[b].bt;
    return a < b;
  });

  std::vector<int> kept;
  for (int i : order) {
    bool ok = true;
    for (int j : kept) {
      if (overlaps(sps[i], sps[j])) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

Solution pick_and_resolve(const CandidateSet& cs, const PoiDatabase& db,
                          const FeatureParams& params, OverlapPolicy policy,
                          const std::function<int(const std::vector<const Poi*>&)>& choose) {
  const auto& sps = cs.stay_points;
  std::vector<int> picked(sps.size(), -1);
  std::vector<std::vector<const Poi*>> cands(sps.size());
  for (std::size_t i = 0; i < sps.size(); ++i) {
    cands[i] = candidate_pois(db, sps[i], params);
    if (!cands[i].empty()) picked[i] = choose(cands[i]);
  }
  Solution sol;
  for (int i : resolve_overlaps(sps, picked, policy)) {
    Selected s;
    s.sp = i;
    s.poi = picked[i];
    s.poi_id = cands[i][picked[i]]->id;
    sol.selected.push_back(std::move(s));
  }
  return sol;
}

}  // namespace

Solution assign_nn(const CandidateSet& cs, const PoiDatabase& db,
                   const FeatureParams& params, OverlapPolicy policy) {
  // candidate_pois returns nearest-first with id tie-break.
  return pick_and_resolve(cs, db, params, policy,
                          [](const std::vector<const Poi*>&) { return 0; });
}

Solution assign_nci(const CandidateSet& cs, const PoiDatabase& db,
                    const PopularityTable& pop, const FeatureParams& params,
                    OverlapPolicy policy) {
  return pick_and_resolve(
      cs, db, params, policy, [&pop](const std::vector<const Poi*>& cands) {
        int best = 0;
        for (int k = 1; k < static_cast<int>(cands.size()); ++k) {
          if (pop.count(cands[k]->id) > pop.count(cands[best]->id)) best = k;
        }
        return best;
      });
}

}  // namespace vpa
