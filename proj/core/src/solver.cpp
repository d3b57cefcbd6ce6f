#include "vpa/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <unordered_map>

#include "vpa/errors.hpp"

namespace vpa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double WeightVector::flat(int i) const {
  switch (i) {
    case 0: return w_s[0];
    case 1: return w_s[1];
    case 2: return w_sbar[0];
    case 3: return w_sbar[1];
    case 4: return w_v[0];
    case 5: return w_v[1];
    case 6: return w_v[2];
    case 7: return w_t[0];
    case 8: return w_t[1];
    default: return w_y[0];
  }
}

void WeightVector::set_flat(int i, double v) {
  switch (i) {
    case 0: w_s[0] = v; break;
    case 1: w_s[1] = v; break;
    case 2: w_sbar[0] = v; break;
    case 3: w_sbar[1] = v; break;
    case 4: w_v[0] = v; break;
    case 5: w_v[1] = v; break;
    case 6: w_v[2] = v; break;
    case 7: w_t[0] = v; break;
    case 8: w_t[1] = v; break;
    default: w_y[0] = v; break;
  }
}

bool AssignmentProblem::overlaps_at(int i, int j) const {
  return overlap_mask_[static_cast<std::size_t>(i) * n() + j] != 0;
}

const double* AssignmentProblem::pair_block(int i, int j) const {
  const int idx = pair_index_[static_cast<std::size_t>(i) * n() + j];
  return idx < 0 ? nullptr : pairs[idx].coef.data();
}

void AssignmentProblem::finalize() {
  const int nn = n();
  if (static_cast<int>(candidates.size()) != nn ||
      static_cast<int>(unary_s.size()) != nn ||
      static_cast<int>(unary_sbar.size()) != nn ||
      static_cast<int>(unary_v.size()) != nn ||
      static_cast<int>(len_y.size()) != nn + 1) {
    throw InvalidConfigError("assignment problem has inconsistent sizes");
  }
  for (int i = 0; i < nn; ++i) {
    if (unary_v[i].size() != candidates[i].size()) {
      throw InvalidConfigError("unary_v size mismatch at stay-point " +
                               std::to_string(i));
    }
  }
  pair_index_.assign(static_cast<std::size_t>(nn) * nn, -1);
  overlap_mask_.assign(static_cast<std::size_t>(nn) * nn, 0);
  for (const auto& [a, b] : overlap_pairs) {
    overlap_mask_[static_cast<std::size_t>(a) * nn + b] = 1;
    overlap_mask_[static_cast<std::size_t>(b) * nn + a] = 1;
  }
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const PairBlock& b = pairs[pi];
    if (b.i < 0 || b.j <= b.i || b.j >= nn) {
      throw InvalidConfigError("pair block with invalid indices");
    }
    if (overlap_mask_[static_cast<std::size_t>(b.i) * nn + b.j] != 0) {
      throw InvalidConfigError("pair block on overlapping stay-points");
    }
    if (b.coef.size() != candidates[b.i].size() * candidates[b.j].size()) {
      throw InvalidConfigError("pair block coefficient count mismatch");
    }
    pair_index_[static_cast<std::size_t>(b.i) * nn + b.j] = static_cast<int>(pi);
  }
}

ProblemFeatures featurize_problem(const CandidateSet& cs, const FeatureBank& bank,
                                  const FeatureParams& params,
                                  const PoiDatabase& db) {
  ProblemFeatures f;
  f.stay_points = cs.stay_points;
  std::sort(f.stay_points.begin(), f.stay_points.end(),
            [](const StayPoint& a, const StayPoint& b) {
              if (a.begin != b.begin) return a.begin < b.begin;
              return a.end < b.end;
            });
  const int n = static_cast<int>(f.stay_points.size());

  std::vector<std::vector<const Poi*>> cand(n);
  f.candidates.resize(n);
  f.sp_feat.resize(n);
  f.v_feat.resize(n);
  for (int i = 0; i < n; ++i) {
    const StayPoint& sp = f.stay_points[i];
    f.sp_feat[i] = stay_point_features(bank, params, sp);
    cand[i] = candidate_pois(db, sp, params);
    f.candidates[i].reserve(cand[i].size());
    f.v_feat[i].reserve(cand[i].size());
    for (const Poi* poi : cand[i]) {
      f.candidates[i].push_back(poi->id);
      f.v_feat[i].push_back(stay_poi_features(bank, params, sp, *poi));
    }
  }

  // Pair features depend only on the two categories.
  std::map<std::pair<std::string, std::string>, std::array<double, 2>> cat_cache;
  auto pair_features = [&](const Poi& a, const Poi& b) {
    const auto key = std::make_pair(a.cat, b.cat);
    if (auto it = cat_cache.find(key); it != cat_cache.end()) return it->second;
    const auto value = poi_pair_features(bank, params, a, b);
    cat_cache.emplace(key, value);
    return value;
  };

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (overlaps(f.stay_points[i], f.stay_points[j])) {
        f.overlap_pairs.emplace_back(i, j);
        continue;
      }
      if (cand[i].empty() || cand[j].empty()) continue;
      PairFeatureBlock block;
      block.i = i;
      block.j = j;
      block.feat.reserve(cand[i].size() * cand[j].size());
      for (const Poi* pk : cand[i]) {
        for (const Poi* pl : cand[j]) {
          block.feat.push_back(pair_features(*pk, *pl));
        }
      }
      f.pair_feat.push_back(std::move(block));
    }
  }

  f.len_feat.resize(n + 1);
  for (int m = 0; m <= n; ++m) f.len_feat[m] = length_feature(bank, m);
  return f;
}

AssignmentProblem apply_weights(const ProblemFeatures& feat,
                                const WeightVector& weights) {
  AssignmentProblem p;
  p.stay_points = feat.stay_points;
  p.candidates = feat.candidates;
  p.overlap_pairs = feat.overlap_pairs;
  const int n = p.n();

  p.unary_s.resize(n);
  p.unary_sbar.resize(n);
  p.unary_v.resize(n);
  for (int i = 0; i < n; ++i) {
    const StayPointFeatures& sf = feat.sp_feat[i];
    p.unary_s[i] = weights.w_s[0] * sf.x_s[0] + weights.w_s[1] * sf.x_s[1];
    p.unary_sbar[i] =
        weights.w_sbar[0] * sf.x_sbar[0] + weights.w_sbar[1] * sf.x_sbar[1];
    p.unary_v[i].reserve(feat.v_feat[i].size());
    for (const auto& xv : feat.v_feat[i]) {
      p.unary_v[i].push_back(weights.w_v[0] * xv[0] + weights.w_v[1] * xv[1] +
                             weights.w_v[2] * xv[2]);
    }
  }
  p.pairs.reserve(feat.pair_feat.size());
  for (const PairFeatureBlock& fb : feat.pair_feat) {
    PairBlock block;
    block.i = fb.i;
    block.j = fb.j;
    block.coef.reserve(fb.feat.size());
    for (const auto& xt : fb.feat) {
      block.coef.push_back(weights.w_t[0] * xt[0] + weights.w_t[1] * xt[1]);
    }
    p.pairs.push_back(std::move(block));
  }
  p.len_y.resize(n + 1);
  for (int m = 0; m <= n; ++m) p.len_y[m] = weights.w_y[0] * feat.len_feat[m];
  p.finalize();
  return p;
}

AssignmentProblem build_problem(const CandidateSet& cs, const FeatureBank& bank,
                                const FeatureParams& params,
                                const WeightVector& weights,
                                const PoiDatabase& db) {
  return apply_weights(featurize_problem(cs, bank, params, db), weights);
}

double recompute_objective(const AssignmentProblem& p,
                           const std::vector<Selected>& selected) {
  const int n = p.n();
  std::vector<int> choice(n, -1);
  for (const Selected& s : selected) choice[s.sp] = s.poi;

  double obj = 0.0;
  for (int i = 0; i < n; ++i) {
    if (choice[i] >= 0) {
      obj += p.unary_s[i] + p.unary_v[i][choice[i]];
    } else {
      obj += p.unary_sbar[i];
    }
  }
  for (int i = 0; i < n; ++i) {
    if (choice[i] < 0) continue;
    for (int j = i + 1; j < n; ++j) {
      if (choice[j] < 0) continue;
      const double* block = p.pair_block(i, j);
      if (block == nullptr) continue;
      obj += block[static_cast<std::size_t>(choice[i]) * p.k(j) + choice[j]];
    }
  }
  obj += p.len_y[selected.size()];
  return obj;
}

double chain_objective(const AssignmentProblem& p,
                       const std::vector<Selected>& selected) {
  std::vector<Selected> sel = selected;
  std::sort(sel.begin(), sel.end(),
            [](const Selected& a, const Selected& b) { return a.sp < b.sp; });

  const int n = p.n();
  std::vector<int> choice(n, -1);
  for (const Selected& s : sel) choice[s.sp] = s.poi;

  double obj = 0.0;
  for (int i = 0; i < n; ++i) {
    if (choice[i] >= 0) {
      obj += p.unary_s[i] + p.unary_v[i][choice[i]];
    } else {
      obj += p.unary_sbar[i];
    }
  }
  for (std::size_t a = 0; a + 1 < sel.size(); ++a) {
    const double* block = p.pair_block(sel[a].sp, sel[a + 1].sp);
    if (block == nullptr) continue;
    obj += block[static_cast<std::size_t>(sel[a].poi) * p.k(sel[a + 1].sp) +
                 sel[a + 1].poi];
  }
  obj += p.len_y[sel.size()];
  return obj;
}

bool verify_solution(const AssignmentProblem& p, const Solution& sol) {
  const int n = p.n();
  std::vector<Selected> sel = sol.selected;
  std::sort(sel.begin(), sel.end(),
            [](const Selected& a, const Selected& b) { return a.sp < b.sp; });
  for (std::size_t a = 0; a < sel.size(); ++a) {
    const Selected& s = sel[a];
    if (s.sp < 0 || s.sp >= n) return false;
    // Exactly one candidate POI per selected stay-point (a selection with no
    // POI, or an out-of-range one, violates the one-visited-POI constraint).
    if (s.poi < 0 || s.poi >= p.k(s.sp)) return false;
    if (!s.poi_id.empty() && s.poi_id != p.candidates[s.sp][s.poi]) return false;
    if (a > 0 && sel[a - 1].sp == s.sp) return false;  // s_i + sbar_i = 1
  }
  // Exclusive selection of overlapping stay-points.
  for (std::size_t a = 0; a < sel.size(); ++a) {
    for (std::size_t b = a + 1; b < sel.size(); ++b) {
      if (p.overlaps_at(sel[a].sp, sel[b].sp)) return false;
    }
  }
  // Length consistency: one y_m with m equal to the selection count.
  return sel.size() <= static_cast<std::size_t>(n);
}

namespace {

// Shared state for the two depth-first exact searches. Stay-points are
// decided in order, so for an undecided i every pair partner j < i is
// already decided and every j > i is still open. The admissible bound
// couples the POI choice k across the unary gain, the exact pair values
// toward already-selected stay-points (sel_in), and per-k optimistic pair
// sums toward later stay-points (right_opt).
struct Searcher {
  const AssignmentProblem& p;
  const int n;
  const bool use_bound;

  std::vector<int> choice;     // -1 or POI index, per stay-point
  std::vector<int> sel_order;  // selected stay-points, ascending
  std::vector<int> conflict;   // # selected overlapping i

  std::vector<std::vector<double>> ugain;      // [i][k] select-vs-skip gain
  std::vector<std::vector<double>> right_opt;  // [i][k] sum of max_l pair(i,j,k,l)
  std::vector<std::vector<double>> sel_in;     // [i][k] exact pairs from selected
  std::vector<double> suffix_sbar;
  std::vector<std::vector<const PairBlock*>> blocks_from;  // left index -> blocks
  std::vector<std::vector<int>> overlap_adj;

  double best_value = kNegInf;
  bool have_best = false;
  std::vector<int> best_choice;

  explicit Searcher(const AssignmentProblem& prob, bool bounded)
      : p(prob), n(prob.n()), use_bound(bounded) {
    choice.assign(n, -1);
    conflict.assign(n, 0);
    ugain.resize(n);
    right_opt.resize(n);
    sel_in.resize(n);
    suffix_sbar.assign(n + 1, 0.0);
    blocks_from.assign(n, {});
    overlap_adj.assign(n, {});
    best_choice.assign(n, -1);

    for (int i = n - 1; i >= 0; --i) {
      suffix_sbar[i] = suffix_sbar[i + 1] + p.unary_sbar[i];
    }
    for (int i = 0; i < n; ++i) {
      const int kk = p.k(i);
      ugain[i].resize(kk);
      right_opt[i].assign(kk, 0.0);
      sel_in[i].assign(kk, 0.0);
      for (int k = 0; k < kk; ++k) {
        ugain[i][k] = p.unary_s[i] + p.unary_v[i][k] - p.unary_sbar[i];
      }
    }
    for (const PairBlock& b : p.pairs) {
      blocks_from[b.i].push_back(&b);
      const int kj = p.k(b.j);
      for (int k = 0; k < p.k(b.i); ++k) {
        double mx = 0.0;
        for (int l = 0; l < kj; ++l) {
          mx = std::max(mx, b.coef[static_cast<std::size_t>(k) * kj + l]);
        }
        right_opt[b.i][k] += mx;
      }
    }
    for (const auto& [a, b] : p.overlap_pairs) {
      overlap_adj[a].push_back(b);
      overlap_adj[b].push_back(a);
    }
  }

  double upper_bound(int depth, double partial) const {
    double bound = partial + suffix_sbar[depth];
    for (int i = depth; i < n; ++i) {
      if (conflict[i] > 0) continue;
      const int kk = p.k(i);
      double best = 0.0;
      for (int k = 0; k < kk; ++k) {
        best = std::max(best, ugain[i][k] + sel_in[i][k] + right_opt[i][k]);
      }
      bound += best;
    }
    const int m0 = static_cast<int>(sel_order.size());
    const int m1 = m0 + (n - depth);
    double best_len = kNegInf;
    for (int m = m0; m <= m1; ++m) best_len = std::max(best_len, p.len_y[m]);
    return bound + best_len;
  }

  void mark_selected(int i) {
    sel_order.push_back(i);
    for (int j : overlap_adj[i]) ++conflict[j];
    const int ki = choice[i];
    for (const PairBlock* b : blocks_from[i]) {
      const int kj = p.k(b->j);
      const double* row = b->coef.data() + static_cast<std::size_t>(ki) * kj;
      for (int k = 0; k < kj; ++k) sel_in[b->j][k] += row[k];
    }
  }

  void unmark_selected(int i) {
    sel_order.pop_back();
    for (int j : overlap_adj[i]) --conflict[j];
    const int ki = choice[i];
    for (const PairBlock* b : blocks_from[i]) {
      const int kj = p.k(b->j);
      const double* row = b->coef.data() + static_cast<std::size_t>(ki) * kj;
      for (int k = 0; k < kj; ++k) sel_in[b->j][k] -= row[k];
    }
  }

  void dfs(int depth, double partial) {
    if (depth == n) {
      const double value = partial + p.len_y[sel_order.size()];
      if (!have_best || value > best_value) {
        have_best = true;
        best_value = value;
        best_choice = choice;
      }
      return;
    }
    if (use_bound && have_best && upper_bound(depth, partial) <= best_value) {
      return;
    }
    // Unselected child first: keeps the traversal in lexicographic order of
    // assignment vectors, which is what the tie-breaking rule relies on.
    dfs(depth + 1, partial + p.unary_sbar[depth]);

    if (conflict[depth] > 0) return;
    const int kk = p.k(depth);
    for (int k = 0; k < kk; ++k) {
      // sel_in holds exactly the pair terms toward already-selected
      // stay-points, so the child gain is a lookup.
      const double gain =
          p.unary_s[depth] + p.unary_v[depth][k] + sel_in[depth][k];
      choice[depth] = k;
      mark_selected(depth);
      dfs(depth + 1, partial + gain);
      unmark_selected(depth);
      choice[depth] = -1;
    }
  }

  Solution result() const {
    Solution sol;
    for (int i = 0; i < n; ++i) {
      if (best_choice[i] >= 0) {
        Selected s;
        s.sp = i;
        s.poi = best_choice[i];
        if (!p.candidates[i].empty()) s.poi_id = p.candidates[i][s.poi];
        sol.selected.push_back(std::move(s));
      }
    }
    sol.objective = recompute_objective(p, sol.selected);
    return sol;
  }
};

}  // namespace

Solution solve_exhaustive(const AssignmentProblem& p) {
  double space = 1.0;
  for (int i = 0; i < p.n(); ++i) {
    space *= static_cast<double>(p.k(i) + 1);
    if (space > 1e7) {
      throw TooLargeError("exhaustive search space exceeds 10^7 outcomes");
    }
  }
  Searcher s(p, /*bounded=*/false);
  s.dfs(0, 0.0);
  return s.result();
}

Solution solve_bnb(const AssignmentProblem& p) {
  Searcher s(p, /*bounded=*/true);
  s.dfs(0, 0.0);
  return s.result();
}

namespace {

// Suffix-value dynamic programming for the chain restriction. State: next
// position to decide, the last selected (stay-point, POI) or none, and the
// number selected so far (for the length prior at the end).
struct ChainDp {
  const AssignmentProblem& p;
  const int n;
  std::vector<int> cum_k;  // prefix sums of K_i
  int n_states;            // 1 + sum K_i

  bool use_flat;
  std::vector<double> flat_value;
  std::vector<char> flat_seen;
  std::unordered_map<std::uint64_t, double> sparse;

  explicit ChainDp(const AssignmentProblem& prob) : p(prob), n(prob.n()) {
    cum_k.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) cum_k[i + 1] = cum_k[i] + p.k(i);
    n_states = 1 + cum_k[n];
    const std::uint64_t cells = static_cast<std::uint64_t>(n + 1) * n_states *
                                static_cast<std::uint64_t>(n + 1);
    use_flat = cells <= 6'000'000;
    if (use_flat) {
      flat_value.assign(cells, 0.0);
      flat_seen.assign(cells, 0);
    }
  }

  std::uint64_t key(int pos, int last, int m) const {
    return (static_cast<std::uint64_t>(pos) * n_states + last) *
               static_cast<std::uint64_t>(n + 1) +
           m;
  }

  int state_of(int i, int k) const { return 1 + cum_k[i] + k; }

  double skip_branch(int pos, int last, int m) {
    return p.unary_sbar[pos] + value(pos + 1, last, m);
  }

  // Feasible iff the last selected span ends before this one begins.
  bool can_follow(int last, int pos) const {
    if (last == 0) return true;
    int i = 0;
    while (cum_k[i + 1] < last) ++i;  // last in (cum_k[i], cum_k[i+1]]
    return !p.overlaps_at(i, pos);
  }

  double select_branch(int pos, int last, int m, int k) {
    double gain = p.unary_s[pos] + p.unary_v[pos][k];
    if (last != 0) {
      int i = 0;
      while (cum_k[i + 1] < last) ++i;
      const int ki = last - 1 - cum_k[i];
      const double* block = p.pair_block(i, pos);
      if (block != nullptr) {
        gain += block[static_cast<std::size_t>(ki) * p.k(pos) + k];
      }
    }
    return gain + value(pos + 1, state_of(pos, k), m + 1);
  }

  double value(int pos, int last, int m) {
    if (pos == n) return p.len_y[m];
    if (use_flat) {
      const std::uint64_t idx = key(pos, last, m);
      if (flat_seen[idx]) return flat_value[idx];
      const double v = compute(pos, last, m);
      flat_seen[idx] = 1;
      flat_value[idx] = v;
      return v;
    }
    const std::uint64_t idx = key(pos, last, m);
    if (auto it = sparse.find(idx); it != sparse.end()) return it->second;
    const double v = compute(pos, last, m);
    sparse.emplace(idx, v);
    return v;
  }

  double compute(int pos, int last, int m) {
    double best = skip_branch(pos, last, m);
    if (can_follow(last, pos)) {
      for (int k = 0; k < p.k(pos); ++k) {
        best = std::max(best, select_branch(pos, last, m, k));
      }
    }
    return best;
  }

  Solution run() {
    Solution sol;
    int last = 0, m = 0;
    for (int pos = 0; pos < n; ++pos) {
      const double target = value(pos, last, m);
      if (skip_branch(pos, last, m) == target) continue;
      for (int k = 0; k < p.k(pos); ++k) {
        if (select_branch(pos, last, m, k) == target) {
          Selected s;
          s.sp = pos;
          s.poi = k;
          if (!p.candidates[pos].empty()) s.poi_id = p.candidates[pos][k];
          sol.selected.push_back(std::move(s));
          last = state_of(pos, k);
          ++m;
          break;
        }
      }
    }
    sol.objective = chain_objective(p, sol.selected);
    return sol;
  }
};

}  // namespace

Solution solve_chain_dp(const AssignmentProblem& p) {
  ChainDp dp(p);
  return dp.run();
}

Solution solve(const AssignmentProblem& p, SolverBackend backend) {
  switch (backend) {
    case SolverBackend::exhaustive: return solve_exhaustive(p);
    case SolverBackend::bnb: return solve_bnb(p);
    case SolverBackend::chain: return solve_chain_dp(p);
  }
  throw InvalidConfigError("unknown solver backend");
}

std::string dump_problem_json(const AssignmentProblem& p) {
  std::string out = "{\n  \"n_stay_points\": " + std::to_string(p.n()) + ",\n";
  out += "  \"stay_points\": [";
  for (int i = 0; i < p.n(); ++i) {
    const StayPoint& sp = p.stay_points[i];
    out += (i ? ",\n    " : "\n    ");
    out += "{\"begin\": " + std::to_string(sp.begin) +
           ", \"end\": " + std::to_string(sp.end) +
           ", \"lng\": " + format17(sp.lng) + ", \"lat\": " + format17(sp.lat) +
           ", \"bt\": " + std::to_string(sp.bt) +
           ", \"et\": " + std::to_string(sp.et) +
           ", \"st\": " + std::to_string(sp.st) + "}";
  }
  out += "\n  ],\n  \"candidates\": [";
  for (int i = 0; i < p.n(); ++i) {
    out += (i ? ", [" : "[");
    for (int k = 0; k < p.k(i); ++k) {
      if (k) out += ", ";
      out += "\"" + p.candidates[i][k] + "\"";
    }
    out += "]";
  }
  auto coef_array = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += format17(v[i]);
    }
    return s + "]";
  };
  out += "],\n  \"unary_s\": " + coef_array(p.unary_s);
  out += ",\n  \"unary_sbar\": " + coef_array(p.unary_sbar);
  out += ",\n  \"unary_v\": [";
  for (int i = 0; i < p.n(); ++i) {
    if (i) out += ", ";
    out += coef_array(p.unary_v[i]);
  }
  out += "],\n  \"pairs\": [";
  for (std::size_t b = 0; b < p.pairs.size(); ++b) {
    if (b) out += ", ";
    out += "{\"i\": " + std::to_string(p.pairs[b].i) +
           ", \"j\": " + std::to_string(p.pairs[b].j) +
           ", \"coef\": " + coef_array(p.pairs[b].coef) + "}";
  }
  out += "],\n  \"len_y\": " + coef_array(p.len_y);
  out += ",\n  \"overlap_pairs\": [";
  for (std::size_t i = 0; i < p.overlap_pairs.size(); ++i) {
    if (i) out += ", ";
    out += "[" + std::to_string(p.overlap_pairs[i].first) + ", " +
           std::to_string(p.overlap_pairs[i].second) + "]";
  }
  out += "]\n}\n";
  return out;
}

std::string dump_solution_json(const AssignmentProblem& p, const Solution& sol) {
  std::string out = "{\n  \"objective\": " + format17(sol.objective) +
                    ",\n  \"selected\": [";
  for (std::size_t i = 0; i < sol.selected.size(); ++i) {
    const Selected& s = sol.selected[i];
    const StayPoint& sp = p.stay_points[s.sp];
    out += (i ? ",\n    " : "\n    ");
    out += "{\"sp\": " + std::to_string(s.sp) +
           ", \"poi\": " + std::to_string(s.poi) + ", \"poi_id\": \"" +
           s.poi_id + "\", \"bt\": " + std::to_string(sp.bt) +
           ", \"et\": " + std::to_string(sp.et) + "}";
  }
  out += sol.selected.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

}  // namespace vpa
