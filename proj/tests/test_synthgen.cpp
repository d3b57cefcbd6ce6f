#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "vpa/errors.hpp"
#include "vpa/evaluation.hpp"
#include "vpa/io.hpp"
#include "vpa/staypoint.hpp"
#include "vpa/synthgen.hpp"

using namespace vpa;
namespace fs = std::filesystem;

namespace {

WorldConfig small_config() {
  WorldConfig cfg;
  cfg.seed = 11;
  cfg.n_pois = 100;
  cfg.n_categories = 10;
  cfg.n_sessions = 4;
  cfg.visits_mean = 3.0;
  cfg.visits_var = 1.0;
  return cfg;
}

bool same_pois(const PoiDatabase& a, const PoiDatabase& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Poi& x = a.pois()[i];
    const Poi& y = b.pois()[i];
    if (x.id != y.id || x.cat != y.cat || x.lng != y.lng || x.lat != y.lat ||
        x.source != y.source) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("world has exactly the configured POI count inside the box") {
  const WorldConfig cfg = small_config();
  const World world = generate_world(cfg);
  CHECK(world.db.size() == 100);
  for (const Poi& p : world.db.pois()) {
    CHECK(p.lng >= cfg.area.lng_min);
    CHECK(p.lng <= cfg.area.lng_max);
    CHECK(p.lat >= cfg.area.lat_min);
    CHECK(p.lat <= cfg.area.lat_max);
  }
  CHECK(world.popularity.checkins.size() == 100);
  for (const auto& [id, count] : world.popularity.checkins) CHECK(count >= 0);
}

TEST_CASE("world generation is deterministic under the seed") {
  const WorldConfig cfg = small_config();
  const World a = generate_world(cfg);
  const World b = generate_world(cfg);
  CHECK(same_pois(a.db, b.db));
  CHECK(a.popularity.checkins == b.popularity.checkins);

  WorldConfig other = cfg;
  other.seed = 12;
  CHECK(!same_pois(a.db, generate_world(other).db));
}

TEST_CASE("every category label comes from the configured universe") {
  WorldConfig cfg = small_config();
  cfg.n_categories = 10;
  const World world = generate_world(cfg);
  CHECK(world.db.category_count() <= 10);
  std::set<std::string> seen;
  for (const Poi& p : world.db.pois()) seen.insert(p.cat);
  CHECK(seen.count("home") == 1);
  CHECK(seen.size() <= 10);
}

TEST_CASE("invalid world configs are rejected") {
  WorldConfig cfg = small_config();
  cfg.n_pois = 1;
  CHECK_THROWS_AS(generate_world(cfg), InvalidConfigError);
  cfg = small_config();
  cfg.gps_noise_sigma = -1.0;
  CHECK_THROWS_AS(generate_world(cfg), InvalidConfigError);
  cfg = small_config();
  cfg.spurious_stop_rate = 1.5;
  CHECK_THROWS_AS(generate_world(cfg), InvalidConfigError);
  cfg = small_config();
  cfg.area.lng_min = cfg.area.lng_max;
  CHECK_THROWS_AS(generate_world(cfg), InvalidConfigError);
}

TEST_CASE("users are deterministic and anchored to world POIs") {
  const WorldConfig cfg = small_config();
  const World world = generate_world(cfg);
  const SyntheticUser a = make_user(world, cfg, 0);
  const SyntheticUser b = make_user(world, cfg, 0);
  CHECK(a.home_id == b.home_id);
  CHECK(a.habit == b.habit);
  CHECK(world.db.find(a.home_id) != nullptr);
  CHECK(world.db.find(a.home_id)->cat == "home");
  CHECK(world.db.find(a.office_id) != nullptr);

  const SyntheticUser c = make_user(world, cfg, 1);
  CHECK(c.name != a.name);
}

TEST_CASE("sessions carry consistent annotations") {
  WorldConfig cfg = small_config();
  cfg.n_sessions = 6;
  const World world = generate_world(cfg);
  const SyntheticUser user = make_user(world, cfg, 0);
  const auto days = generate_user_days(world, user, cfg);
  REQUIRE(days.size() == 6);

  for (const auto& [session, visits] : days) {
    REQUIRE(!session.points.empty());
    for (std::size_t i = 1; i < session.points.size(); ++i) {
      CHECK(session.points[i].ts >= session.points[i - 1].ts);
    }
    REQUIRE(!visits.empty());
    for (std::size_t i = 0; i < visits.size(); ++i) {
      CHECK(visits[i].bt < visits[i].et);
      CHECK(visits[i].et - visits[i].bt >= 60);
      CHECK(world.db.find(visits[i].poi_id) != nullptr);
      if (i > 0) CHECK(visits[i].bt > visits[i - 1].et);
    }
    // Bookends are the user's home.
    CHECK(visits.front().poi_id == user.home_id);
    CHECK(visits.back().poi_id == user.home_id);
  }
}

TEST_CASE("a certain motif appears in every session, tail after head") {
  WorldConfig cfg = small_config();
  cfg.n_sessions = 8;
  cfg.visits_mean = 5.0;
  cfg.dependency_motifs = {{{"daycare", "daycare"}, 1.0}};
  const World world = generate_world(cfg);
  const SyntheticUser user = make_user(world, cfg, 2);
  REQUIRE(user.motif_poi.count("daycare") == 1);
  const std::string daycare = user.motif_poi.at("daycare");

  for (const auto& [session, visits] : generate_user_days(world, user, cfg)) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < visits.size(); ++i) {
      if (visits[i].poi_id == daycare) hits.push_back(i);
    }
    REQUIRE(hits.size() >= 2);
    CHECK(hits.back() > hits.front());
  }
}

TEST_CASE("noiseless traces make every long visit extractable") {
  WorldConfig cfg = small_config();
  cfg.gps_noise_sigma = 0.0;
  cfg.spurious_stop_rate = 0.0;
  cfg.n_sessions = 5;
  const World world = generate_world(cfg);
  const SyntheticUser user = make_user(world, cfg, 1);

  for (const auto& [session, visits] : generate_user_days(world, user, cfg)) {
    const auto sps = extract_stay_points(session, {100.0, 180.0});
    std::vector<VisitRecord> truth;
    std::vector<GeoPoint> centers;
    for (const VisitRecord& v : visits) {
      if (v.et - v.bt >= 180) {
        truth.push_back(v);
        centers.push_back(world.db.find(v.poi_id)->center());
      }
    }
    const Confusion c = score_extraction(sps, truth, centers);
    CHECK(c.fn == 0);
  }
}

TEST_CASE("spurious stops strictly increase extraction false positives") {
  WorldConfig base = small_config();
  base.gps_noise_sigma = 0.0;
  base.n_sessions = 50;
  base.spurious_stop_rate = 0.0;
  WorldConfig noisy = base;
  noisy.spurious_stop_rate = 1.0;

  auto count_fp = [](const WorldConfig& cfg) {
    const World world = generate_world(cfg);
    std::int64_t fp = 0;
    for (int u = 0; u < 2; ++u) {
      const SyntheticUser user = make_user(world, cfg, u);
      for (const auto& [session, visits] : generate_user_days(world, user, cfg)) {
        std::vector<GeoPoint> centers;
        for (const VisitRecord& v : visits) {
          centers.push_back(world.db.find(v.poi_id)->center());
        }
        fp += score_extraction(extract_stay_points(session, {100.0, 180.0}),
                               visits, centers)
                  .fp;
      }
    }
    return fp;
  };
  const std::int64_t clean = count_fp(base);
  const std::int64_t spurious = count_fp(noisy);
  CHECK(spurious > clean);
}

TEST_CASE("gaussian position noise matches the Rayleigh tail bound") {
  WorldConfig cfg = small_config();
  cfg.gps_noise_sigma = 12.0;
  cfg.spurious_stop_rate = 0.0;
  cfg.n_sessions = 12;
  cfg.visits_mean = 4.0;
  const World world = generate_world(cfg);
  const SyntheticUser user = make_user(world, cfg, 0);

  std::int64_t total = 0, within = 0;
  for (const auto& [session, visits] : generate_user_days(world, user, cfg)) {
    for (const VisitRecord& v : visits) {
      const GeoPoint truth = world.db.find(v.poi_id)->center();
      for (const TrackPoint& p : session.points) {
        if (p.ts >= v.bt && p.ts <= v.et) {
          ++total;
          if (geo_distance({p.lng, p.lat}, truth) <= 20.0) ++within;
        }
      }
    }
  }
  REQUIRE(total >= 10000);
  CHECK(static_cast<double>(within) / static_cast<double>(total) >= 0.75);
}

TEST_CASE("planted motifs are statistically present") {
  WorldConfig cfg = small_config();
  cfg.n_sessions = 60;
  cfg.dependency_motifs = {{{"daycare", "park"}, 0.7}};
  const World world = generate_world(cfg);
  const SyntheticUser user = make_user(world, cfg, 0);

  int with_head = 0, with_tail = 0, with_both = 0, n = 0;
  for (const auto& [session, visits] : generate_user_days(world, user, cfg)) {
    bool head = false, tail = false;
    for (const VisitRecord& v : visits) {
      const std::string& cat = world.db.find(v.poi_id)->cat;
      head |= cat == "daycare";
      tail |= cat == "park";
    }
    with_head += head;
    with_tail += tail;
    with_both += head && tail;
    ++n;
  }
  const double joint = static_cast<double>(with_both) / n;
  const double marginals = (static_cast<double>(with_head) / n) *
                           (static_cast<double>(with_tail) / n);
  CHECK(joint > marginals);
}

TEST_CASE("export writes the expected files byte-identically") {
  WorldConfig cfg = small_config();
  cfg.n_sessions = 3;
  const World world = generate_world(cfg);
  std::vector<std::pair<SyntheticUser, std::vector<AnnotatedSession>>> users;
  for (int u = 0; u < 2; ++u) {
    const SyntheticUser user = make_user(world, cfg, u);
    users.emplace_back(user, generate_user_days(world, user, cfg));
  }

  const fs::path dir_a = fs::temp_directory_path() / "vpa_synth_test_a";
  const fs::path dir_b = fs::temp_directory_path() / "vpa_synth_test_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  const CorpusManifest ma = export_corpus(world, users, dir_a, cfg);
  const CorpusManifest mb = export_corpus(world, users, dir_b, cfg);

  // 6 trajectories + 2 annotation files + pois + popularity + manifest.
  CHECK(ma.files.size() == 11);
  CHECK(ma.files == mb.files);
  for (const std::string& rel : ma.files) {
    CHECK(read_text_file(dir_a / rel) == read_text_file(dir_b / rel));
  }

  // The written corpus loads back through the I/O layer.
  const PoiDatabase db = load_poi_database(dir_a / "pois.json");
  CHECK(db.size() == world.db.size());
  const auto annots =
      load_annotations(dir_a / (users[0].first.name + "_annotations.json"));
  CHECK(annots.size() == 3);
  const Session s = load_trajectory(dir_a / (annots.begin()->first + ".jsonl"));
  CHECK(!s.points.empty());

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("export to an unwritable path fails cleanly") {
  const WorldConfig cfg = small_config();
  const World world = generate_world(cfg);
  CHECK_THROWS_AS(
      export_corpus(world, {}, "/proc/definitely/not/writable", cfg), IoError);
}

TEST_CASE("json overrides apply onto a base config") {
  const WorldConfig cfg = world_config_from_json(
      R"({"seed": 99, "n_pois": 55, "dependency_motifs":
          [{"categories": ["daycare", "daycare"], "trigger_probability": 0.9}],
          "area": {"lng_min": 1.0, "lng_max": 2.0, "lat_min": 3.0, "lat_max": 4.0},
          "start_date": "2023-05-01"})",
      small_config());
  CHECK(cfg.seed == 99);
  CHECK(cfg.n_pois == 55);
  CHECK(cfg.n_categories == 10);  // untouched base value
  REQUIRE(cfg.dependency_motifs.size() == 1);
  CHECK(cfg.dependency_motifs[0].trigger_probability == 0.9);
  CHECK(cfg.area.lng_min == 1.0);
  CHECK(cfg.start_date.year == 2023);
  CHECK_THROWS_AS(world_config_from_json("{bad json", small_config()), ParseError);
}
