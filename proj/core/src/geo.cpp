#include "vpa/geo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "vpa/errors.hpp"

namespace vpa {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Meters per degree of latitude; slightly shrunk when used as a divisor so
// bounding boxes stay conservative.
constexpr double kMetersPerDegLat = kEarthRadiusMeters * kDegToRad;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

double geo_distance(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlng = (b.lng - a.lng) * kDegToRad;
  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dlng / 2.0);
  const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

std::int64_t days_from_civil(const CivilDate& d) {
  // Howard Hinnant's algorithm.
  int y = d.year;
  const unsigned m = static_cast<unsigned>(d.month);
  const unsigned day = static_cast<unsigned>(d.day);
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                   static_cast<int>(day)};
}

std::optional<CivilDate> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto digits = [&](int from, int to) -> std::optional<int> {
    int v = 0;
    for (int i = from; i < to; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  const auto y = digits(0, 4), m = digits(5, 7), d = digits(8, 10);
  if (!y || !m || !d) return std::nullopt;
  if (*m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
  return CivilDate{*y, *m, *d};
}

std::string format_date(const CivilDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

int time_window(std::int64_t ts, int utc_offset_seconds) {
  const std::int64_t local = ts + utc_offset_seconds;
  const std::int64_t sec_of_day = local - floor_div(local, 86400) * 86400;
  return static_cast<int>(sec_of_day / 21600);
}

Session build_session(std::string id, std::vector<TrackPoint> points,
                      const CivilDate& day, int utc_offset_seconds) {
  const std::int64_t day_start = days_from_civil(day) * 86400 - utc_offset_seconds;
  const std::int64_t day_end = day_start + 86399;  // 23:59:59 inclusive

  std::vector<TrackPoint> kept;
  kept.reserve(points.size());
  for (const TrackPoint& p : points) {
    if (p.ts >= day_start && p.ts <= day_end) kept.push_back(p);
  }
  if (kept.empty()) {
    throw EmptySessionError("session '" + id + "': no track-points on " +
                            format_date(day));
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const TrackPoint& a, const TrackPoint& b) { return a.ts < b.ts; });
  return Session{std::move(id), std::move(kept)};
}

StayPoint make_stay_point(const Session& s, int begin, int end) {
  const int n = static_cast<int>(s.points.size());
  if (begin < 0 || end >= n || begin > end) {
    throw IndexError("stay-point span [" + std::to_string(begin) + ", " +
                     std::to_string(end) + "] out of range for session of " +
                     std::to_string(n) + " points");
  }
  StayPoint sp;
  sp.begin = begin;
  sp.end = end;
  double sum_lng = 0.0, sum_lat = 0.0;
  for (int t = begin; t <= end; ++t) {
    sum_lng += s.points[t].lng;
    sum_lat += s.points[t].lat;
  }
  const double count = static_cast<double>(end - begin + 1);
  sp.lng = sum_lng / count;
  sp.lat = sum_lat / count;
  sp.bt = s.points[begin].ts;
  sp.et = s.points[end].ts;
  sp.st = sp.et - sp.bt;
  return sp;
}

PoiDatabase::PoiDatabase(std::vector<Poi> pois) : pois_(std::move(pois)) {
  by_id_.reserve(pois_.size());
  std::vector<std::string_view> cats;
  cats.reserve(pois_.size());
  for (std::size_t i = 0; i < pois_.size(); ++i) {
    const Poi& p = pois_[i];
    if (p.cat.empty())
      throw InvalidConfigError("POI '" + p.id + "' has an empty category");
    if (!by_id_.emplace(p.id, i).second)
      throw InvalidConfigError("duplicate POI id '" + p.id + "'");
    grid_[cell_key(p.lng, p.lat)].push_back(static_cast<std::uint32_t>(i));
    cats.push_back(p.cat);
  }
  std::sort(cats.begin(), cats.end());
  n_categories_ = std::unique(cats.begin(), cats.end()) - cats.begin();
}

const Poi* PoiDatabase::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &pois_[it->second];
}

std::int64_t PoiDatabase::cell_key(double lng, double lat) const {
  const auto cx = static_cast<std::int64_t>(std::floor(lng / kCellDeg));
  const auto cy = static_cast<std::int64_t>(std::floor(lat / kCellDeg));
  return cx * 100000 + cy;
}

std::vector<std::pair<const Poi*, double>> PoiDatabase::radius_query(
    const GeoPoint& center, double radius_m) const {
  std::vector<std::pair<const Poi*, double>> out;
  if (pois_.empty()) return out;

  auto test = [&](const Poi& p) {
    const double d = geo_distance(center, p.center());
    if (d <= radius_m) out.emplace_back(&p, d);
  };

  // Conservative degree bounding box around the query circle.
  const double dlat = radius_m / (kMetersPerDegLat * 0.999);
  const double band_lat = std::min(89.9, std::max(std::abs(center.lat - dlat),
                                                  std::abs(center.lat + dlat)));
  const double min_cos = std::cos(band_lat * (std::numbers::pi / 180.0));
  const bool degenerate = min_cos < 0.05;
  const double dlng =
      degenerate ? 360.0 : radius_m / (kMetersPerDegLat * min_cos * 0.999);

  if (degenerate || dlng >= 180.0 || center.lng - dlng < -180.0 ||
      center.lng + dlng > 180.0) {
    // Pole or antimeridian proximity: exactness over cleverness.
    for (const Poi& p : pois_) test(p);
  } else {
    const auto cx0 = static_cast<std::int64_t>(std::floor((center.lng - dlng) / kCellDeg));
    const auto cx1 = static_cast<std::int64_t>(std::floor((center.lng + dlng) / kCellDeg));
    const auto cy0 = static_cast<std::int64_t>(std::floor((center.lat - dlat) / kCellDeg));
    const auto cy1 = static_cast<std::int64_t>(std::floor((center.lat + dlat) / kCellDeg));
    if ((cx1 - cx0 + 1) * (cy1 - cy0 + 1) >=
        static_cast<std::int64_t>(pois_.size())) {
      for (const Poi& p : pois_) test(p);
    } else {
      for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
        for (std::int64_t cy = cy0; cy <= cy1; ++cy) {
          auto it = grid_.find(cx * 100000 + cy);
          if (it == grid_.end()) continue;
          for (std::uint32_t idx : it->second) test(pois_[idx]);
        }
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first->id < b.first->id;
  });
  return out;
}

}  // namespace vpa
