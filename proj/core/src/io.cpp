#include "vpa/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vpa/errors.hpp"

namespace vpa {

using nlohmann::json;

namespace {

json parse_json_file(const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw IoError("cannot open '" + file.string() + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ParseError(file.string(), 0, e.what());
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw IoError("cannot open '" + file.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream f(file, std::ios::binary);
  if (!f) throw IoError("cannot open '" + file.string() + "' for writing");
  f << content;
  if (!f) throw IoError("failed writing '" + file.string() + "'");
}

std::string user_of_session(const std::string& session_id) {
  const auto pos = session_id.find('_');
  return pos == std::string::npos ? session_id : session_id.substr(0, pos);
}

Session load_trajectory(const std::filesystem::path& file, int utc_offset_seconds) {
  std::ifstream f(file);
  if (!f) throw IoError("cannot open '" + file.string() + "'");

  const std::string stem = file.stem().string();
  const auto date_pos = stem.rfind('_');
  if (date_pos == std::string::npos) {
    throw ParseError(file.string(), 0,
                     "filename must look like <user>_<YYYY-MM-DD>.jsonl");
  }
  const auto date = parse_date(std::string_view(stem).substr(date_pos + 1));
  if (!date) {
    throw ParseError(file.string(), 0, "filename carries no valid date");
  }

  std::vector<TrackPoint> points;
  std::string line;
  long line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(file.string(), line_no, e.what());
    }
    try {
      points.push_back({j.at("lng").get<double>(), j.at("lat").get<double>(),
                        j.at("ts").get<std::int64_t>()});
    } catch (const json::exception& e) {
      throw ParseError(file.string(), line_no, e.what());
    }
  }
  return build_session(stem, std::move(points), *date, utc_offset_seconds);
}

void save_trajectory(const std::filesystem::path& file, const Session& s) {
  std::string out;
  out.reserve(s.points.size() * 64);
  char line[128];
  for (const TrackPoint& tp : s.points) {
    std::snprintf(line, sizeof(line), "{\"lat\": %.17g, \"lng\": %.17g, \"ts\": %lld}\n",
                  tp.lat, tp.lng, static_cast<long long>(tp.ts));
    out += line;
  }
  write_text_file(file, out);
}

PoiDatabase load_poi_database(const std::filesystem::path& file) {
  const json j = parse_json_file(file);
  if (!j.is_array()) throw ParseError(file.string(), 0, "expected a JSON array");
  std::vector<Poi> pois;
  pois.reserve(j.size());
  for (const auto& e : j) {
    try {
      Poi p;
      p.id = e.at("id").get<std::string>();
      p.name = e.at("name").get<std::string>();
      p.cat = e.at("cat").get<std::string>();
      p.lat = e.at("lat").get<double>();
      p.lng = e.at("lng").get<double>();
      const std::string source = e.value("source", "common");
      if (source != "common" && source != "personal") {
        throw ParseError(file.string(), 0, "POI source must be common|personal");
      }
      p.source = source == "common" ? PoiSource::common : PoiSource::personal;
      pois.push_back(std::move(p));
    } catch (const json::exception& ex) {
      throw ParseError(file.string(), 0, ex.what());
    }
  }
  try {
    return PoiDatabase(std::move(pois));
  } catch (const InvalidConfigError& ex) {
    throw ParseError(file.string(), 0, ex.what());
  }
}

void save_poi_database(const std::filesystem::path& file, const PoiDatabase& db) {
  json j = json::array();
  for (const Poi& p : db.pois()) {
    j.push_back({{"id", p.id},
                 {"name", p.name},
                 {"cat", p.cat},
                 {"lat", p.lat},
                 {"lng", p.lng},
                 {"source", p.source == PoiSource::common ? "common" : "personal"}});
  }
  write_text_file(file, j.dump(2) + "\n");
}

std::map<std::string, std::vector<VisitRecord>> load_annotations(
    const std::filesystem::path& file) {
  const json j = parse_json_file(file);
  if (!j.is_object()) {
    throw ParseError(file.string(), 0, "expected an object keyed by session id");
  }
  std::map<std::string, std::vector<VisitRecord>> out;
  for (const auto& [session_id, arr] : j.items()) {
    std::vector<VisitRecord> visits;
    for (const auto& e : arr) {
      try {
        VisitRecord v;
        v.bt = e.at("bt").get<std::int64_t>();
        v.et = e.at("et").get<std::int64_t>();
        v.poi_id = e.at("poi_id").get<std::string>();
        if (v.bt >= v.et) {
          throw ParseError(file.string(), 0,
                           "visit in '" + session_id + "' has bt >= et");
        }
        visits.push_back(std::move(v));
      } catch (const json::exception& ex) {
        throw ParseError(file.string(), 0, ex.what());
      }
    }
    std::sort(visits.begin(), visits.end(),
              [](const VisitRecord& a, const VisitRecord& b) { return a.bt < b.bt; });
    for (std::size_t i = 1; i < visits.size(); ++i) {
      if (visits[i].bt <= visits[i - 1].et) {
        throw ParseError(file.string(), 0,
                         "overlapping visits in '" + session_id + "'");
      }
    }
    out[session_id] = std::move(visits);
  }
  return out;
}

void save_annotations(const std::filesystem::path& file,
                      const std::map<std::string, std::vector<VisitRecord>>& annots) {
  json j = json::object();
  for (const auto& [session_id, visits] : annots) {
    json arr = json::array();
    for (const VisitRecord& v : visits) {
      arr.push_back({{"bt", v.bt}, {"et", v.et}, {"poi_id", v.poi_id}});
    }
    j[session_id] = std::move(arr);
  }
  write_text_file(file, j.dump(2) + "\n");
}

PopularityTable load_popularity(const std::filesystem::path& file) {
  const json j = parse_json_file(file);
  if (!j.is_object()) {
    throw ParseError(file.string(), 0, "expected an object of poi_id -> count");
  }
  PopularityTable pop;
  for (const auto& [id, count] : j.items()) {
    const std::int64_t c = count.get<std::int64_t>();
    if (c < 0) throw ParseError(file.string(), 0, "negative check-in count");
    pop.checkins[id] = c;
  }
  return pop;
}

void save_popularity(const std::filesystem::path& file, const PopularityTable& pop) {
  json j = json::object();
  for (const auto& [id, count] : pop.checkins) j[id] = count;
  write_text_file(file, j.dump(2) + "\n");
}

namespace {

json table_to_json(const std::map<std::string, double>& t) {
  json j = json::object();
  for (const auto& [k, v] : t) j[k] = v;
  return j;
}

std::map<std::string, double> table_from_json(const json& j) {
  std::map<std::string, double> t;
  for (const auto& [k, v] : j.items()) t[k] = v.get<double>();
  return t;
}

}  // namespace

void save_feature_bank(const std::filesystem::path& file, const FeatureBank& bank) {
  json j;
  json centers = json::array();
  for (const GeoPoint& c : bank.sig_centers) {
    centers.push_back({{"lng", c.lng}, {"lat", c.lat}});
  }
  j["sig_centers"] = std::move(centers);
  j["f_poi"] = table_to_json(bank.f_poi);
  j["f_cat"] = table_to_json(bank.f_cat);
  for (int w = 0; w < 4; ++w) {
    j["f_poi_time"][w] = table_to_json(bank.f_poi_time[w]);
    j["f_cat_time"][w] = table_to_json(bank.f_cat_time[w]);
  }
  json lognorm = json::object();
  for (const auto& [cat, fit] : bank.lognorm) {
    lognorm[cat] = {{"nu", fit.nu}, {"tau", fit.tau}};
  }
  j["lognorm"] = std::move(lognorm);
  json trans = json::object();
  for (const auto& [from, row] : bank.trans) {
    json r = json::object();
    for (const auto& [to, count] : row) r[to] = count;
    trans[from] = std::move(r);
  }
  j["trans"] = std::move(trans);
  json trans_out = json::object();
  for (const auto& [cat, count] : bank.trans_out) trans_out[cat] = count;
  j["trans_out"] = std::move(trans_out);
  json scats = json::array();
  for (const auto& cats : bank.session_cats) {
    scats.push_back(std::vector<std::string>(cats.begin(), cats.end()));
  }
  j["session_cats"] = std::move(scats);
  j["mu_y"] = bank.mu_y;
  j["sigma2_y"] = bank.sigma2_y;
  j["n_categories"] = bank.n_categories;
  write_text_file(file, j.dump(2) + "\n");
}

FeatureBank load_feature_bank(const std::filesystem::path& file) {
  const json j = parse_json_file(file);
  FeatureBank bank;
  try {
    for (const auto& c : j.at("sig_centers")) {
      bank.sig_centers.push_back({c.at("lng").get<double>(), c.at("lat").get<double>()});
    }
    bank.f_poi = table_from_json(j.at("f_poi"));
    bank.f_cat = table_from_json(j.at("f_cat"));
    for (int w = 0; w < 4; ++w) {
      bank.f_poi_time[w] = table_from_json(j.at("f_poi_time").at(w));
      bank.f_cat_time[w] = table_from_json(j.at("f_cat_time").at(w));
    }
    for (const auto& [cat, fit] : j.at("lognorm").items()) {
      bank.lognorm[cat] = {fit.at("nu").get<double>(), fit.at("tau").get<double>()};
    }
    for (const auto& [from, row] : j.at("trans").items()) {
      for (const auto& [to, count] : row.items()) {
        bank.trans[from][to] = count.get<std::int64_t>();
      }
    }
    for (const auto& [cat, count] : j.at("trans_out").items()) {
      bank.trans_out[cat] = count.get<std::int64_t>();
    }
    for (const auto& arr : j.at("session_cats")) {
      std::set<std::string> cats;
      for (const auto& c : arr) cats.insert(c.get<std::string>());
      bank.session_cats.push_back(std::move(cats));
    }
    bank.mu_y = j.at("mu_y").get<double>();
    bank.sigma2_y = j.at("sigma2_y").get<double>();
    bank.n_categories = j.at("n_categories").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(file.string(), 0, e.what());
  }
  return bank;
}

WeightVector load_weights(const std::filesystem::path& file) {
  const json j = parse_json_file(file);
  WeightVector w;
  try {
    const auto ws = j.at("w_s").get<std::vector<double>>();
    const auto wsb = j.at("w_sbar").get<std::vector<double>>();
    const auto wv = j.at("w_v").get<std::vector<double>>();
    const auto wt = j.at("w_t").get<std::vector<double>>();
    const auto wy = j.at("w_y").get<std::vector<double>>();
    if (ws.size() != 2 || wsb.size() != 2 || wv.size() != 3 || wt.size() != 2 ||
        wy.size() != 1) {
      throw ParseError(file.string(), 0, "weight group with wrong dimension");
    }
    std::copy(ws.begin(), ws.end(), w.w_s.begin());
    std::copy(wsb.begin(), wsb.end(), w.w_sbar.begin());
    std::copy(wv.begin(), wv.end(), w.w_v.begin());
    std::copy(wt.begin(), wt.end(), w.w_t.begin());
    std::copy(wy.begin(), wy.end(), w.w_y.begin());
  } catch (const json::exception& e) {
    throw ParseError(file.string(), 0, e.what());
  }
  for (int i = 0; i < WeightVector::kDim; ++i) {
    if (w.flat(i) < 0.0) {
      throw ParseError(file.string(), 0, "weights must be non-negative");
    }
  }
  return w;
}

void save_weights(const std::filesystem::path& file, const WeightVector& w) {
  json j;
  j["w_s"] = w.w_s;
  j["w_sbar"] = w.w_sbar;
  j["w_v"] = w.w_v;
  j["w_t"] = w.w_t;
  j["w_y"] = w.w_y;
  write_text_file(file, j.dump(2) + "\n");
}

void save_candidates(const std::filesystem::path& file, const std::string& session_id,
                     const CandidateSet& cs) {
  json j;
  j["session"] = session_id;
  json sps = json::array();
  for (const StayPoint& sp : cs.stay_points) {
    sps.push_back({{"begin", sp.begin},
                   {"end", sp.end},
                   {"lng", sp.lng},
                   {"lat", sp.lat},
                   {"bt", sp.bt},
                   {"et", sp.et},
                   {"st", sp.st}});
  }
  j["stay_points"] = std::move(sps);
  json pairs = json::array();
  for (const auto& [a, b] : cs.overlap_pairs) pairs.push_back({a, b});
  j["overlap_pairs"] = std::move(pairs);
  write_text_file(file, j.dump(2) + "\n");
}

CandidateSet load_candidates(const std::filesystem::path& file,
                             std::string* session_id) {
  const json j = parse_json_file(file);
  CandidateSet cs;
  try {
    if (session_id != nullptr) *session_id = j.at("session").get<std::string>();
    for (const auto& e : j.at("stay_points")) {
      StayPoint sp;
      sp.begin = e.at("begin").get<int>();
      sp.end = e.at("end").get<int>();
      sp.lng = e.at("lng").get<double>();
      sp.lat = e.at("lat").get<double>();
      sp.bt = e.at("bt").get<std::int64_t>();
      sp.et = e.at("et").get<std::int64_t>();
      sp.st = e.at("st").get<std::int64_t>();
      cs.stay_points.push_back(sp);
    }
    for (const auto& e : j.at("overlap_pairs")) {
      cs.overlap_pairs.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
  } catch (const json::exception& e) {
    throw ParseError(file.string(), 0, e.what());
  }
  return cs;
}

}  // namespace vpa
