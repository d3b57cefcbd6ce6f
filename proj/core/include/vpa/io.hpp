#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vpa/baselines.hpp"
#include "vpa/features.hpp"
#include "vpa/geo.hpp"
#include "vpa/solver.hpp"
#include "vpa/staypoint.hpp"

namespace vpa {

/// Reads a JSON Lines trajectory file ({"lat":..,"lng":..,"ts":..} per
/// line). The session id and date come from the filename stem,
/// "<user>_<YYYY-MM-DD>". Throws ParseError with file/line context.
Session load_trajectory(const std::filesystem::path& file,
                        int utc_offset_seconds = 0);
void save_trajectory(const std::filesystem::path& file, const Session& s);

/// User id prefix of a session id ("u01_2024-01-15" -> "u01").
std::string user_of_session(const std::string& session_id);

PoiDatabase load_poi_database(const std::filesystem::path& file);
void save_poi_database(const std::filesystem::path& file, const PoiDatabase& db);

/// Annotation file: {"<session_id>": [{"bt":..,"et":..,"poi_id":..}, ...]}.
std::map<std::string, std::vector<VisitRecord>> load_annotations(
    const std::filesystem::path& file);
void save_annotations(const std::filesystem::path& file,
                      const std::map<std::string, std::vector<VisitRecord>>& annots);

PopularityTable load_popularity(const std::filesystem::path& file);
void save_popularity(const std::filesystem::path& file, const PopularityTable& pop);

FeatureBank load_feature_bank(const std::filesystem::path& file);
void save_feature_bank(const std::filesystem::path& file, const FeatureBank& bank);

WeightVector load_weights(const std::filesystem::path& file);
void save_weights(const std::filesystem::path& file, const WeightVector& w);

/// Candidate stay-points for one session, with overlap pairs.
void save_candidates(const std::filesystem::path& file, const std::string& session_id,
                     const CandidateSet& cs);
CandidateSet load_candidates(const std::filesystem::path& file,
                             std::string* session_id = nullptr);

std::string read_text_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, const std::string& content);

}  // namespace vpa
