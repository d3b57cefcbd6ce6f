#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vpa/baselines.hpp"
#include "vpa/features.hpp"
#include "vpa/geo.hpp"

namespace vpa {

// Ordered category pattern planted into sessions: when triggered, its
// elements appear in order with unrelated random visits between them. On
// non-triggered days the optional fallback categories take the same slots,
// modeling conditional routines (pick-up vs. the usual evening errand).
struct MotifSpec {
  std::vector<std::string> categories;
  double trigger_probability = 0.0;
  std::vector<std::string> fallback_categories;  // "" skips the slot
};

// Guarantees that every POI of near_cat has an add_cat POI planted beside
// it, within [min_m, max_m] meters.
struct CoLocation {
  std::string near_cat;
  std::string add_cat;
  double min_m = 8.0;
  double max_m = 18.0;
};

struct BoundingBox {
  double lng_min = 139.60;
  double lng_max = 139.80;
  double lat_min = 35.60;
  double lat_max = 35.75;
};

struct WorldConfig {
  std::uint64_t seed = 1;
  int n_pois = 400;
  BoundingBox area;
  int n_categories = 12;
  double gps_noise_sigma = 8.0;     // meters, isotropic per axis
  double spurious_stop_rate = 0.25;  // probability per session
  double visits_mean = 5.0;          // away-from-home visits per session
  double visits_var = 2.0;
  int n_sessions = 14;
  std::vector<MotifSpec> dependency_motifs;

  // Plumbing knobs.
  int n_hotspots = 6;
  double hotspot_sigma = 150.0;      // meters
  // Users run two disjoint category routines (e.g. workday vs. errand day);
  // each session draws the alternate one with this probability.
  double regime_alt_probability = 0.0;
  // Chance a visit goes to one of the user's favorite POIs of the category
  // instead of a random one; lower values spread visits over more POIs.
  double favorite_bias = 0.85;
  double companion_rate = 0.35;      // chance a POI gets a close neighbor
  double companion_min = 8.0;        // meters
  double companion_max = 25.0;
  std::vector<CoLocation> co_locations;
  // Offset between a POI's database pin and the spot people actually dwell
  // at (building interiors, entrances). Zero keeps pins exact.
  double visit_offset_min = 0.0;
  double visit_offset_max = 0.0;
  // Log-normal visit durations in minutes, clamped to
  // [max(2, min_visit_seconds/60), visit_minutes_max].
  double visit_minutes_log_mean = 2.4849066497880004;  // ln(12)
  double visit_minutes_log_sigma = 0.6;
  double visit_minutes_max = 45.0;
  double walk_speed = 1.3;           // m/s
  int sample_interval = 3;           // seconds
  double min_visit_seconds = 60.0;
  int utc_offset_seconds = 0;
  CivilDate start_date{2024, 3, 4};
};

struct SyntheticUser {
  int index = 0;
  std::string name;  // e.g. "u03"
  std::string home_id;
  std::string office_id;
  std::array<std::map<std::string, double>, 4> habit;      // window -> cat weights
  std::array<std::map<std::string, double>, 4> habit_alt;  // alternate routine
  std::map<std::string, std::string> motif_poi;            // category -> POI id
  std::map<std::string, std::vector<std::string>> favorites;  // cat -> POI ids
};

struct World {
  PoiDatabase db;
  PopularityTable popularity;
  // Where visits to each POI actually happen (pin + per-POI offset).
  std::map<std::string, GeoPoint> visit_points;
};

/// POIs clustered around hotspots inside the bounding box plus a pool of
/// personal home POIs; check-in counts drawn from a heavy-tailed
/// distribution. Fully deterministic under config.seed.
World generate_world(const WorldConfig& config);

/// Deterministic per (config.seed, index).
SyntheticUser make_user(const World& world, const WorldConfig& config, int index);

/// One session per day starting at config.start_date: home bookend visits,
/// habit-driven visits, planted motifs, straight-line movement sampled every
/// sample_interval seconds, Gaussian position noise, and optional unannotated
/// spurious stops. Annotations carry the true visit intervals.
std::vector<AnnotatedSession> generate_user_days(const World& world,
                                                 const SyntheticUser& user,
                                                 const WorldConfig& config);

struct CorpusManifest {
  std::vector<std::string> files;  // relative to the export directory
};

/// Writes trajectories (JSONL per session), one annotation file per user,
/// the POI database, the popularity table, and a manifest echoing the
/// config. Re-exporting the same corpus is byte-identical.
CorpusManifest export_corpus(
    const World& world,
    const std::vector<std::pair<SyntheticUser, std::vector<AnnotatedSession>>>& users,
    const std::filesystem::path& out_dir, const WorldConfig& config);

/// Applies JSON overrides ({"seed": 7, "n_pois": 200, ...}) onto a config.
WorldConfig world_config_from_json(const std::string& json_text,
                                   const WorldConfig& base = WorldConfig{});

}  // namespace vpa
