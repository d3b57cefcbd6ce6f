#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vpa {

struct GeoPoint {
  double lng = 0.0;  // degrees, [-180, 180]
  double lat = 0.0;  // degrees, [-90, 90]
};

/// Haversine great-circle distance in meters (Earth radius 6,371,000 m).
double geo_distance(const GeoPoint& a, const GeoPoint& b);

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

// One positioning sample: longitude, latitude, epoch seconds.
struct TrackPoint {
  double lng = 0.0;
  double lat = 0.0;
  std::int64_t ts = 0;
};

// One calendar day of ordered track-points.
struct Session {
  std::string id;
  std::vector<TrackPoint> points;
};

struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

std::optional<CivilDate> parse_date(std::string_view yyyy_mm_dd);
std::string format_date(const CivilDate& d);

/// Six-hour window index 0..3 ([00-06), [06-12), [12-18), [18-24) local).
int time_window(std::int64_t ts, int utc_offset_seconds);

/// Sorts points by timestamp (stable) and keeps only those falling on `day`
/// in the given fixed UTC offset. Throws EmptySessionError if nothing
/// survives.
Session build_session(std::string id, std::vector<TrackPoint> points,
                      const CivilDate& day, int utc_offset_seconds = 0);

// Contiguous track-point span with derived attributes. Indexes are 0-based
// and inclusive.
struct StayPoint {
  int begin = 0;
  int end = 0;
  double lng = 0.0;  // arithmetic mean of member longitudes
  double lat = 0.0;  // arithmetic mean of member latitudes
  std::int64_t bt = 0;
  std::int64_t et = 0;
  std::int64_t st = 0;  // et - bt, seconds

  GeoPoint center() const { return {lng, lat}; }
};

/// Computes the span attributes for points[begin..end]. Throws IndexError
/// unless 0 <= begin <= end < session size.
StayPoint make_stay_point(const Session& s, int begin, int end);

enum class PoiSource { common, personal };

struct Poi {
  std::string id;
  std::string name;
  std::string cat;
  double lng = 0.0;
  double lat = 0.0;
  PoiSource source = PoiSource::common;

  GeoPoint center() const { return {lng, lat}; }
};

// Ground-truth visit: the user was at poi_id during [bt, et].
struct VisitRecord {
  std::int64_t bt = 0;
  std::int64_t et = 0;
  std::string poi_id;
};

// Named places with exact radius queries. Backed by a degree grid; cells
// intersecting the query's bounding box are scanned and filtered by
// geo_distance, with a full-scan fallback near the poles.
class PoiDatabase {
 public:
  PoiDatabase() = default;
  explicit PoiDatabase(std::vector<Poi> pois);

  const std::vector<Poi>& pois() const { return pois_; }
  std::size_t size() const { return pois_.size(); }
  bool empty() const { return pois_.empty(); }

  const Poi* find(std::string_view id) const;

  /// All POIs with geo_distance(center, poi) <= radius_m, sorted by
  /// (distance, id).
  std::vector<std::pair<const Poi*, double>> radius_query(
      const GeoPoint& center, double radius_m) const;

  /// Number of distinct categories in the database.
  std::size_t category_count() const { return n_categories_; }

 private:
  std::int64_t cell_key(double lng, double lat) const;

  std::vector<Poi> pois_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::int64_t, std::vector<std::uint32_t>> grid_;
  std::size_t n_categories_ = 0;
  static constexpr double kCellDeg = 0.01;  // ~1.1 km at the equator
};

}  // namespace vpa
