#include "vpa/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "vpa/errors.hpp"

namespace vpa {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr double kMetersPerDeg = kEarthRadiusMeters * std::numbers::pi / 180.0;

struct DegScale {
  double lng_per_m;
  double lat_per_m;
};

DegScale scale_at(const BoundingBox& box) {
  const double mid_lat = (box.lat_min + box.lat_max) / 2.0;
  const double c = std::cos(mid_lat * std::numbers::pi / 180.0);
  return {1.0 / (kMetersPerDeg * c), 1.0 / kMetersPerDeg};
}

const std::vector<std::string>& base_categories() {
  static const std::vector<std::string> names = {
      "home",    "office", "daycare", "restaurant", "cafe",
      "shop",    "grocery", "gym",    "park",       "museum",
      "station", "school", "bar",    "library",    "clinic"};
  return names;
}

std::vector<std::string> category_labels(int n) {
  std::vector<std::string> out;
  const auto& base = base_categories();
  for (int i = 0; i < n; ++i) {
    if (i < static_cast<int>(base.size())) {
      out.push_back(base[i]);
    } else {
      out.push_back("cat" + std::to_string(i));
    }
  }
  return out;
}

void validate(const WorldConfig& c) {
  if (c.n_pois < 2) throw InvalidConfigError("n_pois must be >= 2");
  if (c.n_categories < 2) throw InvalidConfigError("n_categories must be >= 2");
  if (c.area.lng_min >= c.area.lng_max || c.area.lat_min >= c.area.lat_max) {
    throw InvalidConfigError("invalid bounding box");
  }
  if (c.gps_noise_sigma < 0.0) throw InvalidConfigError("negative noise sigma");
  if (c.spurious_stop_rate < 0.0 || c.spurious_stop_rate > 1.0) {
    throw InvalidConfigError("spurious_stop_rate must be in [0, 1]");
  }
  if (c.visits_mean <= 0.0 || c.visits_var < 0.0) {
    throw InvalidConfigError("invalid visits_per_session parameters");
  }
  if (c.n_sessions < 1) throw InvalidConfigError("n_sessions must be >= 1");
  if (c.sample_interval < 1) throw InvalidConfigError("sample_interval must be >= 1");
  if (c.walk_speed <= 0.0) throw InvalidConfigError("walk_speed must be positive");
  for (const MotifSpec& m : c.dependency_motifs) {
    if (m.categories.empty()) throw InvalidConfigError("motif without categories");
    if (m.trigger_probability < 0.0 || m.trigger_probability > 1.0) {
      throw InvalidConfigError("motif trigger probability must be in [0, 1]");
    }
    if (!m.fallback_categories.empty() &&
        m.fallback_categories.size() != m.categories.size()) {
      throw InvalidConfigError("motif fallback must match the pattern length");
    }
  }
  if (c.visit_offset_min < 0.0 || c.visit_offset_max < c.visit_offset_min) {
    throw InvalidConfigError("invalid visit offset range");
  }
  for (const CoLocation& cl : c.co_locations) {
    if (cl.near_cat.empty() || cl.add_cat.empty() || cl.min_m < 0.0 ||
        cl.max_m < cl.min_m) {
      throw InvalidConfigError("invalid co-location rule");
    }
  }
}

GeoPoint offset_meters(const GeoPoint& p, double dx_m, double dy_m,
                       const DegScale& s) {
  return {p.lng + dx_m * s.lng_per_m, p.lat + dy_m * s.lat_per_m};
}

GeoPoint clamp_to(const BoundingBox& box, GeoPoint p) {
  p.lng = std::clamp(p.lng, box.lng_min, box.lng_max);
  p.lat = std::clamp(p.lat, box.lat_min, box.lat_max);
  return p;
}

}  // namespace

World generate_world(const WorldConfig& config) {
  validate(config);
  std::mt19937_64 rng(mix(config.seed, 0xC0FFEE));
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  const BoundingBox& box = config.area;
  const DegScale deg = scale_at(box);
  const std::vector<std::string> cats = category_labels(config.n_categories);

  const double wlng = box.lng_max - box.lng_min;
  const double wlat = box.lat_max - box.lat_min;
  auto uniform_point = [&](double shrink) {
    return GeoPoint{box.lng_min + wlng * (shrink + (1.0 - 2.0 * shrink) * u01(rng)),
                    box.lat_min + wlat * (shrink + (1.0 - 2.0 * shrink) * u01(rng))};
  };

  std::vector<GeoPoint> hotspots;
  for (int h = 0; h < std::max(1, config.n_hotspots); ++h) {
    hotspots.push_back(uniform_point(0.12));
  }

  const int n_homes =
      std::min(config.n_pois - 1, std::max(4, config.n_pois / 12));
  const int n_common = config.n_pois - n_homes;

  std::normal_distribution<double> spread(0.0, config.hotspot_sigma);
  std::normal_distribution<double> pop_log(2.5, 1.3);
  std::vector<Poi> pois;
  pois.reserve(config.n_pois);
  PopularityTable pop;

  auto next_id = [&pois] {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%04d", static_cast<int>(pois.size()));
    return std::string(buf);
  };

  auto co_rule_for = [&config](const std::string& cat) -> const CoLocation* {
    for (const CoLocation& cl : config.co_locations) {
      if (cl.near_cat == cat) return &cl;
    }
    return nullptr;
  };

  bool companion_pending = false;
  for (int i = 0; i < n_common; ++i) {
    Poi poi;
    poi.id = next_id();
    if (companion_pending && !pois.empty()) {
      const Poi& prev = pois.back();
      const CoLocation* rule = co_rule_for(prev.cat);
      const double lo = rule ? rule->min_m : config.companion_min;
      const double hi = rule ? rule->max_m : config.companion_max;
      const double dist = lo + (hi - lo) * u01(rng);
      const double bearing = 2.0 * std::numbers::pi * u01(rng);
      GeoPoint p = offset_meters(prev.center(), dist * std::cos(bearing),
                                 dist * std::sin(bearing), deg);
      p = clamp_to(box, p);
      poi.lng = p.lng;
      poi.lat = p.lat;
      if (rule) {
        poi.cat = rule->add_cat;
      } else {
        // Companion takes a different category than its neighbor.
        std::string cat;
        do {
          cat = cats[1 + static_cast<std::size_t>(u01(rng) * (cats.size() - 1))];
        } while (cat == prev.cat);
        poi.cat = cat;
      }
      companion_pending = false;
    } else {
      GeoPoint p;
      if (u01(rng) < 0.7) {
        const GeoPoint& h = hotspots[static_cast<std::size_t>(u01(rng) * hotspots.size())];
        p = clamp_to(box, offset_meters(h, spread(rng), spread(rng), deg));
      } else {
        p = uniform_point(0.02);
      }
      poi.lng = p.lng;
      poi.lat = p.lat;
      poi.cat = cats[1 + static_cast<std::size_t>(u01(rng) * (cats.size() - 1))];
      companion_pending =
          co_rule_for(poi.cat) != nullptr || u01(rng) < config.companion_rate;
    }
    poi.name = poi.cat + " " + poi.id;
    poi.source = PoiSource::common;
    pop.checkins[poi.id] =
        static_cast<std::int64_t>(std::floor(std::exp(pop_log(rng))));
    pois.push_back(std::move(poi));
  }

  for (int i = 0; i < n_homes; ++i) {
    Poi poi;
    poi.id = next_id();
    const GeoPoint p = uniform_point(0.05);
    poi.lng = p.lng;
    poi.lat = p.lat;
    poi.cat = cats[0];  // "home"
    poi.name = "home " + poi.id;
    poi.source = PoiSource::personal;
    pop.checkins[poi.id] = 0;
    pois.push_back(std::move(poi));
  }

  // Pins vs. actual dwell spots: common POIs drift, personal pins are exact.
  std::map<std::string, GeoPoint> visit_points;
  for (const Poi& p : pois) {
    if (p.source == PoiSource::personal ||
        config.visit_offset_max <= 0.0) {
      visit_points[p.id] = p.center();
      continue;
    }
    const double dist = config.visit_offset_min +
                        (config.visit_offset_max - config.visit_offset_min) *
                            u01(rng);
    const double bearing = 2.0 * std::numbers::pi * u01(rng);
    visit_points[p.id] =
        clamp_to(box, offset_meters(p.center(), dist * std::cos(bearing),
                                    dist * std::sin(bearing), deg));
  }

  return World{PoiDatabase(std::move(pois)), std::move(pop),
               std::move(visit_points)};
}

namespace {

std::vector<const Poi*> pois_of_category(const PoiDatabase& db,
                                         const std::string& cat) {
  std::vector<const Poi*> out;
  for (const Poi& p : db.pois()) {
    if (p.cat == cat) out.push_back(&p);
  }
  return out;
}

std::vector<const Poi*> nearest_of_category(const PoiDatabase& db,
                                            const std::string& cat,
                                            const GeoPoint& from,
                                            std::size_t limit) {
  auto found = pois_of_category(db, cat);
  std::sort(found.begin(), found.end(), [&](const Poi* a, const Poi* b) {
    const double da = geo_distance(from, a->center());
    const double dbm = geo_distance(from, b->center());
    if (da != dbm) return da < dbm;
    return a->id < b->id;
  });
  if (found.size() > limit) found.resize(limit);
  return found;
}

}  // namespace

SyntheticUser make_user(const World& world, const WorldConfig& config, int index) {
  std::mt19937_64 rng(mix(config.seed, 1000 + static_cast<std::uint64_t>(index)));
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  SyntheticUser user;
  user.index = index;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%02d", index + 1);
  user.name = buf;

  const auto homes = pois_of_category(world.db, "home");
  if (homes.empty()) throw InvalidConfigError("world has no home POIs");
  const Poi* home = homes[static_cast<std::size_t>(index) % homes.size()];
  user.home_id = home->id;

  const std::vector<std::string> cats = category_labels(config.n_categories);
  auto offices = nearest_of_category(world.db, cats.size() > 1 ? cats[1] : cats[0],
                                     home->center(), 4);
  user.office_id = offices.empty() ? home->id
                                   : offices[static_cast<std::size_t>(
                                                 u01(rng) * offices.size())]
                                         ->id;

  std::set<std::string> motif_cats;
  for (const MotifSpec& m : config.dependency_motifs) {
    for (const std::string& c : m.categories) motif_cats.insert(c);
    for (const std::string& c : m.fallback_categories) {
      if (!c.empty()) motif_cats.insert(c);
    }
  }
  for (const MotifSpec& m : config.dependency_motifs) {
    for (const std::string& c : m.categories) {
      if (user.motif_poi.count(c)) continue;
      const auto near = nearest_of_category(world.db, c, home->center(), 1);
      if (near.empty()) {
        throw InvalidConfigError("world has no POI of motif category '" + c + "'");
      }
      user.motif_poi[c] = near[0]->id;
    }
    // Fallback slots share the motif POI's neighborhood, so the alternative
    // routine happens at the same plaza.
    for (std::size_t e = 0; e < m.fallback_categories.size(); ++e) {
      const std::string& c = m.fallback_categories[e];
      if (c.empty() || user.motif_poi.count(c)) continue;
      const GeoPoint anchor =
          world.db.find(user.motif_poi.at(m.categories[e]))->center();
      const auto near = nearest_of_category(world.db, c, anchor, 1);
      if (near.empty()) {
        throw InvalidConfigError("world has no POI of fallback category '" + c +
                                 "'");
      }
      user.motif_poi[c] = near[0]->id;
    }
  }

  // Favorites live around the hotspot the user frequents, not at home, so
  // they sit in dense POI surroundings.
  GeoPoint anchor = home->center();
  {
    const Poi* office = world.db.find(user.office_id);
    if (office != nullptr) anchor = office->center();
  }

  // Non-motif categories split into two disjoint routine bundles. Bundles
  // are capped so each routine concentrates on a few categories; leftover
  // categories only ever appear as neighbors. With
  // regime_alt_probability = 0 only the first bundle is ever used.
  constexpr std::size_t kBundleCap = 5;
  std::size_t main_n = 0, alt_n = 0;
  bool alt = false;
  for (std::size_t ci = 1; ci < cats.size(); ++ci) {
    const std::string& cat = cats[ci];
    if (motif_cats.count(cat)) continue;
    const auto near = nearest_of_category(world.db, cat, anchor, 10);
    if (near.empty()) continue;
    std::vector<std::string> favs;
    favs.push_back(near[static_cast<std::size_t>(u01(rng) * near.size())]->id);
    const Poi* second = near[static_cast<std::size_t>(u01(rng) * near.size())];
    if (second->id != favs[0]) favs.push_back(second->id);
    user.favorites[cat] = std::move(favs);

    const bool use_alt = alt && config.regime_alt_probability > 0.0;
    alt = !alt;
    std::size_t& count = use_alt ? alt_n : main_n;
    if (count >= kBundleCap) continue;
    ++count;
    auto& table = use_alt ? user.habit_alt : user.habit;
    for (int w = 0; w < 4; ++w) table[w][cat] = 1.0;
  }
  return user;
}

namespace {

struct Segment {
  std::int64_t t0 = 0;
  std::int64_t t1 = 0;  // exclusive of the next segment's start
  GeoPoint from;
  GeoPoint to;  // == from for stationary segments
};

GeoPoint lerp(const Segment& s, std::int64_t ts) {
  if (s.t1 <= s.t0) return s.from;
  const double f = static_cast<double>(ts - s.t0) / static_cast<double>(s.t1 - s.t0);
  return {s.from.lng + f * (s.to.lng - s.from.lng),
          s.from.lat + f * (s.to.lat - s.from.lat)};
}

const Poi* pick_weighted_category_poi(
    const World& world, const SyntheticUser& user,
    const std::map<std::string, double>& table, double favorite_bias,
    std::mt19937_64& rng, std::uniform_real_distribution<double>& u01) {
  double total = 0.0;
  for (const auto& [cat, w] : table) total += w;
  if (total <= 0.0) return nullptr;
  double pick = u01(rng) * total;
  const std::string* chosen = nullptr;
  for (const auto& [cat, w] : table) {
    pick -= w;
    if (pick <= 0.0) {
      chosen = &cat;
      break;
    }
  }
  if (chosen == nullptr) chosen = &table.rbegin()->first;

  auto it = user.favorites.find(*chosen);
  if (it != user.favorites.end() && !it->second.empty() &&
      u01(rng) < favorite_bias) {
    const auto& favs = it->second;
    return world.db.find(favs[static_cast<std::size_t>(u01(rng) * favs.size())]);
  }
  const auto all = pois_of_category(world.db, *chosen);
  if (all.empty()) return nullptr;
  return all[static_cast<std::size_t>(u01(rng) * all.size())];
}

}  // namespace

std::vector<AnnotatedSession> generate_user_days(const World& world,
                                                 const SyntheticUser& user,
                                                 const WorldConfig& config) {
  validate(config);
  std::mt19937_64 rng(
      mix(config.seed, 2000000 + static_cast<std::uint64_t>(user.index)));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const Poi* home = world.db.find(user.home_id);
  if (home == nullptr) throw InvalidConfigError("user home not in database");
  const DegScale deg = scale_at(config.area);

  auto dwell_spot = [&world](const Poi& poi) {
    auto it = world.visit_points.find(poi.id);
    return it == world.visit_points.end() ? poi.center() : it->second;
  };

  std::vector<AnnotatedSession> out;
  out.reserve(config.n_sessions);

  for (int d = 0; d < config.n_sessions; ++d) {
    const CivilDate date = civil_from_days(days_from_civil(config.start_date) + d);
    const std::int64_t day0 =
        days_from_civil(date) * 86400 - config.utc_offset_seconds;

    const std::int64_t log_start = day0 + 7 * 3600;
    const std::int64_t leave_home =
        day0 + 7 * 3600 + 2700 + static_cast<std::int64_t>(u01(rng) * 2700);
    const std::int64_t curfew = day0 + 22 * 3600;

    // Plan the day's away visits: motif elements are anchored so that later
    // elements always land after the random intermediates.
    struct Planned {
      double frac;
      const Poi* poi;
      std::int64_t duration;  // seconds
      bool motif;
    };
    std::vector<Planned> plan;
    int motif_elements = 0;
    for (const MotifSpec& m : config.dependency_motifs) {
      const bool triggered = u01(rng) < m.trigger_probability;
      const int e_count = static_cast<int>(m.categories.size());
      for (int e = 0; e < e_count; ++e) {
        std::string cat;
        if (triggered) {
          cat = m.categories[e];
        } else if (!m.fallback_categories.empty() &&
                   !m.fallback_categories[e].empty()) {
          cat = m.fallback_categories[e];
        } else {
          continue;
        }
        const double frac =
            e_count == 1 ? 0.5
                         : 0.02 + 0.96 * static_cast<double>(e) /
                                      static_cast<double>(e_count - 1);
        const Poi* poi = world.db.find(user.motif_poi.at(cat));
        const std::int64_t dur =
            480 + static_cast<std::int64_t>(u01(rng) * 720);  // 8-20 min
        plan.push_back({frac, poi, dur, true});
        ++motif_elements;
      }
    }
    const bool alt_regime = u01(rng) < config.regime_alt_probability;
    const auto& habit = alt_regime && !user.habit_alt[0].empty() ? user.habit_alt
                                                                 : user.habit;
    std::normal_distribution<double> visits_n(config.visits_mean,
                                              std::sqrt(config.visits_var));
    const int planned_total = std::clamp(
        static_cast<int>(std::llround(visits_n(rng))), 1, 9);
    const int n_random = std::max(0, planned_total - motif_elements);
    for (int v = 0; v < n_random; ++v) {
      const double frac = 0.10 + 0.80 * u01(rng);
      const int approx_hour = 8 + static_cast<int>(frac * 10.0);
      const int window = std::clamp(approx_hour / 6, 0, 3);
      const Poi* poi = pick_weighted_category_poi(
          world, user, habit[window], config.favorite_bias, rng, u01);
      if (poi == nullptr) continue;
      const double minutes =
          std::clamp(std::exp(config.visit_minutes_log_mean +
                              config.visit_minutes_log_sigma * gauss(rng)),
                     std::max(2.0, config.min_visit_seconds / 60.0),
                     config.visit_minutes_max);
      plan.push_back({frac, poi, static_cast<std::int64_t>(minutes * 60.0), false});
    }
    std::stable_sort(plan.begin(), plan.end(),
                     [](const Planned& a, const Planned& b) { return a.frac < b.frac; });
    // Drop consecutive repeats of the same POI.
    plan.erase(std::unique(plan.begin(), plan.end(),
                           [](const Planned& a, const Planned& b) {
                             return a.poi->id == b.poi->id;
                           }),
               plan.end());

    const int spurious_leg =
        u01(rng) < config.spurious_stop_rate
            ? static_cast<int>(u01(rng) * static_cast<double>(plan.size() + 1))
            : -1;

    std::vector<Segment> segments;
    std::vector<VisitRecord> annots;
    GeoPoint cur = dwell_spot(*home);
    std::int64_t t = leave_home;

    segments.push_back({log_start, leave_home, cur, cur});
    annots.push_back({log_start, leave_home, home->id});

    auto travel = [&](const GeoPoint& to, int leg) {
      const double dist = geo_distance(cur, to);
      std::int64_t travel_s = std::max<std::int64_t>(
          config.sample_interval,
          static_cast<std::int64_t>(dist / config.walk_speed));
      if (leg == spurious_leg) {
        const double frac = 0.3 + 0.4 * u01(rng);
        const std::int64_t pause =
            180 + static_cast<std::int64_t>(u01(rng) * 420);  // 3-10 min
        const std::int64_t split = static_cast<std::int64_t>(frac * travel_s);
        const GeoPoint mid{cur.lng + frac * (to.lng - cur.lng),
                           cur.lat + frac * (to.lat - cur.lat)};
        segments.push_back({t, t + split, cur, mid});
        segments.push_back({t + split, t + split + pause, mid, mid});
        segments.push_back({t + split + pause, t + travel_s + pause, mid, to});
        t += travel_s + pause;
      } else {
        segments.push_back({t, t + travel_s, cur, to});
        t += travel_s;
      }
      cur = to;
    };

    int leg = 0;
    for (const Planned& v : plan) {
      const std::int64_t min_dur =
          std::max<std::int64_t>(v.duration,
                                 static_cast<std::int64_t>(config.min_visit_seconds));
      const GeoPoint spot = dwell_spot(*v.poi);
      const double dist = geo_distance(cur, spot);
      const std::int64_t eta =
          t + static_cast<std::int64_t>(dist / config.walk_speed) + min_dur;
      if (eta > curfew) break;
      travel(spot, leg++);
      segments.push_back({t, t + min_dur, cur, cur});
      annots.push_back({t, t + min_dur, v.poi->id});
      t += min_dur;
    }

    travel(dwell_spot(*home), leg);
    const std::int64_t home_stay = 1800 + static_cast<std::int64_t>(u01(rng) * 1800);
    const std::int64_t log_end = std::min(t + home_stay, day0 + 86399);
    segments.push_back({t, log_end, cur, cur});
    annots.push_back({t, log_end, home->id});

    std::vector<TrackPoint> points;
    points.reserve(static_cast<std::size_t>((log_end - log_start) /
                                            config.sample_interval) + 2);
    std::int64_t next_ts = log_start;
    for (const Segment& seg : segments) {
      while (next_ts <= seg.t1 && next_ts <= log_end) {
        if (next_ts >= seg.t0) {
          GeoPoint p = lerp(seg, next_ts);
          if (config.gps_noise_sigma > 0.0) {
            p = offset_meters(p, config.gps_noise_sigma * gauss(rng),
                              config.gps_noise_sigma * gauss(rng), deg);
          }
          points.push_back({p.lng, p.lat, next_ts});
          next_ts += config.sample_interval;
        } else {
          break;
        }
      }
    }

    Session session = build_session(user.name + "_" + format_date(date),
                                    std::move(points), date,
                                    config.utc_offset_seconds);
    out.emplace_back(std::move(session), std::move(annots));
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::string>& files,
                const std::filesystem::path& root) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) throw IoError("failed writing '" + path.string() + "'");
  files.push_back(std::filesystem::relative(path, root).string());
}

}  // namespace

CorpusManifest export_corpus(
    const World& world,
    const std::vector<std::pair<SyntheticUser, std::vector<AnnotatedSession>>>& users,
    const std::filesystem::path& out_dir, const WorldConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir.string() + "'");

  CorpusManifest manifest;
  using nlohmann::json;

  json pois = json::array();
  for (const Poi& p : world.db.pois()) {
    pois.push_back({{"id", p.id},
                    {"name", p.name},
                    {"cat", p.cat},
                    {"lat", p.lat},
                    {"lng", p.lng},
                    {"source", p.source == PoiSource::common ? "common" : "personal"}});
  }
  write_file(out_dir / "pois.json", pois.dump(2) + "\n", manifest.files, out_dir);

  json pop = json::object();
  for (const auto& [id, count] : world.popularity.checkins) pop[id] = count;
  write_file(out_dir / "popularity.json", pop.dump(2) + "\n", manifest.files,
             out_dir);

  for (const auto& [user, sessions] : users) {
    json annots = json::object();
    for (const auto& [session, visits] : sessions) {
      std::string traj;
      traj.reserve(session.points.size() * 64);
      char line[128];
      for (const TrackPoint& tp : session.points) {
        std::snprintf(line, sizeof(line),
                      "{\"lat\": %.17g, \"lng\": %.17g, \"ts\": %lld}\n", tp.lat,
                      tp.lng, static_cast<long long>(tp.ts));
        traj += line;
      }
      write_file(out_dir / (session.id + ".jsonl"), traj, manifest.files, out_dir);

      json arr = json::array();
      for (const VisitRecord& v : visits) {
        arr.push_back({{"bt", v.bt}, {"et", v.et}, {"poi_id", v.poi_id}});
      }
      annots[session.id] = std::move(arr);
    }
    write_file(out_dir / (user.name + "_annotations.json"), annots.dump(2) + "\n",
               manifest.files, out_dir);
  }

  std::sort(manifest.files.begin(), manifest.files.end());

  json mf;
  mf["seed"] = config.seed;
  mf["n_pois"] = config.n_pois;
  mf["n_categories"] = config.n_categories;
  mf["n_sessions"] = config.n_sessions;
  mf["gps_noise_sigma"] = config.gps_noise_sigma;
  mf["spurious_stop_rate"] = config.spurious_stop_rate;
  mf["visits_mean"] = config.visits_mean;
  mf["visits_var"] = config.visits_var;
  mf["start_date"] = format_date(config.start_date);
  mf["users"] = json::array();
  for (const auto& [user, sessions] : users) mf["users"].push_back(user.name);
  mf["files"] = manifest.files;
  write_file(out_dir / "manifest.json", mf.dump(2) + "\n", manifest.files, out_dir);

  std::sort(manifest.files.begin(), manifest.files.end());
  return manifest;
}

WorldConfig world_config_from_json(const std::string& json_text,
                                   const WorldConfig& base) {
  WorldConfig cfg = base;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<config>", static_cast<long>(e.byte), e.what());
  }
  auto get = [&](const char* key, auto& target) {
    if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
  };
  get("seed", cfg.seed);
  get("n_pois", cfg.n_pois);
  get("n_categories", cfg.n_categories);
  get("gps_noise_sigma", cfg.gps_noise_sigma);
  get("spurious_stop_rate", cfg.spurious_stop_rate);
  get("visits_mean", cfg.visits_mean);
  get("visits_var", cfg.visits_var);
  get("n_sessions", cfg.n_sessions);
  get("n_hotspots", cfg.n_hotspots);
  get("hotspot_sigma", cfg.hotspot_sigma);
  get("companion_rate", cfg.companion_rate);
  get("walk_speed", cfg.walk_speed);
  get("sample_interval", cfg.sample_interval);
  get("min_visit_seconds", cfg.min_visit_seconds);
  get("utc_offset_seconds", cfg.utc_offset_seconds);
  get("visit_offset_min", cfg.visit_offset_min);
  get("visit_offset_max", cfg.visit_offset_max);
  get("regime_alt_probability", cfg.regime_alt_probability);
  get("favorite_bias", cfg.favorite_bias);
  get("visit_minutes_log_mean", cfg.visit_minutes_log_mean);
  get("visit_minutes_log_sigma", cfg.visit_minutes_log_sigma);
  get("visit_minutes_max", cfg.visit_minutes_max);
  if (j.contains("area")) {
    const auto& a = j.at("area");
    cfg.area = {a.at("lng_min").get<double>(), a.at("lng_max").get<double>(),
                a.at("lat_min").get<double>(), a.at("lat_max").get<double>()};
  }
  if (j.contains("start_date")) {
    const auto parsed = parse_date(j.at("start_date").get<std::string>());
    if (!parsed) throw InvalidConfigError("bad start_date");
    cfg.start_date = *parsed;
  }
  if (j.contains("dependency_motifs")) {
    cfg.dependency_motifs.clear();
    for (const auto& m : j.at("dependency_motifs")) {
      MotifSpec spec;
      spec.categories = m.at("categories").get<std::vector<std::string>>();
      spec.trigger_probability = m.at("trigger_probability").get<double>();
      if (m.contains("fallback_categories")) {
        spec.fallback_categories =
            m.at("fallback_categories").get<std::vector<std::string>>();
      }
      cfg.dependency_motifs.push_back(std::move(spec));
    }
  }
  if (j.contains("co_locations")) {
    cfg.co_locations.clear();
    for (const auto& c : j.at("co_locations")) {
      CoLocation cl;
      cl.near_cat = c.at("near_cat").get<std::string>();
      cl.add_cat = c.at("add_cat").get<std::string>();
      if (c.contains("min_m")) cl.min_m = c.at("min_m").get<double>();
      if (c.contains("max_m")) cl.max_m = c.at("max_m").get<double>();
      cfg.co_locations.push_back(std::move(cl));
    }
  }
  return cfg;
}

}  // namespace vpa
