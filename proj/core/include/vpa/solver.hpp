#pragma once

#include <array>
#include <string>
#include <vector>

#include "vpa/features.hpp"
#include "vpa/geo.hpp"
#include "vpa/staypoint.hpp"

namespace vpa {

// Weights for the five feature groups, all entries >= 0. Flat order:
// w_s, w_sbar, w_v, w_t, w_y.
struct WeightVector {
  std::array<double, 2> w_s{1.0, 1.0};
  std::array<double, 2> w_sbar{1.0, 1.0};
  std::array<double, 3> w_v{1.0, 1.0, 1.0};
  std::array<double, 2> w_t{1.0, 1.0};
  std::array<double, 1> w_y{1.0};

  static constexpr int kDim = 10;

  double flat(int i) const;
  void set_flat(int i, double v);
  static WeightVector ones() { return WeightVector{}; }
};

// Pairwise coefficients for stay-points i < j (i earlier by begin
// timestamp), one entry per candidate combination, row-major [k][l].
struct PairBlock {
  int i = 0;
  int j = 0;
  std::vector<double> coef;  // size K_i * K_j
};

// One session's 0-1 selection problem: choose a non-overlapping subset of
// candidate stay-points and one candidate POI for each chosen one,
// maximizing unary + pairwise + length scores.
struct AssignmentProblem {
  std::vector<StayPoint> stay_points;  // sorted by (begin, end)
  std::vector<std::vector<std::string>> candidates;  // POI ids, nearest first
  std::vector<double> unary_s;
  std::vector<double> unary_sbar;
  std::vector<std::vector<double>> unary_v;
  std::vector<PairBlock> pairs;  // only non-overlapping ordered pairs
  std::vector<double> len_y;     // size n()+1
  std::vector<std::pair<int, int>> overlap_pairs;  // i < j

  int n() const { return static_cast<int>(stay_points.size()); }
  int k(int i) const { return static_cast<int>(candidates[i].size()); }
  bool overlaps_at(int i, int j) const;
  /// Pointer to the K_i x K_j coefficient block, or nullptr if absent.
  const double* pair_block(int i, int j) const;

  /// Builds the pair lookup and overlap set; call after manual construction.
  void finalize();

 private:
  std::vector<int> pair_index_;     // n*n, -1 when absent
  std::vector<char> overlap_mask_;  // n*n
};

struct Selected {
  int sp = -1;
  int poi = -1;
  std::string poi_id;
};

struct Solution {
  std::vector<Selected> selected;  // ascending by sp
  double objective = 0.0;
};

enum class SolverBackend { exhaustive, bnb, chain };

// Weight-independent feature tensors for one candidate set. Grid search
// featurizes once and re-weights per candidate vector.
struct PairFeatureBlock {
  int i = 0;
  int j = 0;
  std::vector<std::array<double, 2>> feat;  // K_i * K_j, row-major
};

struct ProblemFeatures {
  std::vector<StayPoint> stay_points;  // sorted by (begin, end)
  std::vector<std::vector<std::string>> candidates;
  std::vector<StayPointFeatures> sp_feat;
  std::vector<std::vector<std::array<double, 3>>> v_feat;
  std::vector<PairFeatureBlock> pair_feat;
  std::vector<double> len_feat;  // x_y(m) for m = 0..n
  std::vector<std::pair<int, int>> overlap_pairs;
};

/// Computes every feature the objective needs: stay-point validity pairs,
/// per-candidate POI features, pairwise features for every temporally
/// ordered non-overlapping pair, and the length prior for m = 0..n.
ProblemFeatures featurize_problem(const CandidateSet& cs, const FeatureBank& bank,
                                  const FeatureParams& params,
                                  const PoiDatabase& db);

/// Turns features into objective coefficients via inner products.
AssignmentProblem apply_weights(const ProblemFeatures& feat,
                                const WeightVector& weights);

/// featurize_problem followed by apply_weights.
AssignmentProblem build_problem(const CandidateSet& cs, const FeatureBank& bank,
                                const FeatureParams& params,
                                const WeightVector& weights,
                                const PoiDatabase& db);

/// Global optimum by enumeration; guard: prod(K_i + 1) <= 10^7, else
/// TooLargeError. Ties broken toward the lexicographically smallest
/// selection (unselected sorts before any POI index).
Solution solve_exhaustive(const AssignmentProblem& p);

/// Exact branch-and-bound over the same space and tie-breaking rule;
/// branches stay-points in begin-timestamp order, unselected child first.
Solution solve_bnb(const AssignmentProblem& p);

/// Exact optimum of the chain restriction where pairwise scores apply only
/// between consecutively selected stay-points.
Solution solve_chain_dp(const AssignmentProblem& p);

Solution solve(const AssignmentProblem& p, SolverBackend backend);

/// Structural constraint check: valid indices, one POI per selection, no
/// duplicate or overlapping selections.
bool verify_solution(const AssignmentProblem& p, const Solution& sol);

/// Canonical objective recomputation (fixed summation order).
double recompute_objective(const AssignmentProblem& p,
                           const std::vector<Selected>& selected);

/// Same, but pairwise terms only between consecutive selections.
double chain_objective(const AssignmentProblem& p,
                       const std::vector<Selected>& selected);

/// Debug dumps; all coefficients printed with 17 significant digits.
std::string dump_problem_json(const AssignmentProblem& p);
std::string dump_solution_json(const AssignmentProblem& p, const Solution& sol);

}  // namespace vpa
