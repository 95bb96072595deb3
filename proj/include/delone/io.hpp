#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "delone/decorate.hpp"
#include "delone/ergodic.hpp"
#include "delone/pointset.hpp"
#include "delone/repet.hpp"
#include "delone/subst.hpp"

namespace delone {

using json = nlohmann::json;

inline constexpr const char* kPointSetSchema = "delone.pointset/1";
inline constexpr const char* kTilesSchema = "delone.tiles/1";
inline constexpr const char* kRuleSchema = "delone.rule/1";
inline constexpr const char* kReportSchema = "delone.report/1";

/// Exact scalars: real values as [num, den], others as [re, im, den].
/// Parsing also takes the ring form [p, q, k, j] = (p + q i) i^j / (2+i)^k.
json to_json(const Gaussian& g);
Gaussian gaussian_from_json(const json& j);

json to_json(const ExactMotion& m);
ExactMotion motion_from_json(const json& j);
json to_json(const FloatMotion& m);
FloatMotion float_motion_from_json(const json& j);

json to_json(const Box& b);
Box box_from_json(const json& j);

json to_json(const GeneratorSpec& g);
GeneratorSpec generator_from_json(const json& j);

json to_json(const PointSetWindow& p);
PointSetWindow pointset_from_json(const json& j);
/// Same data, frame, region and provenance.
bool same_pointset(const PointSetWindow& a, const PointSetWindow& b);

json to_json(const Tile& t);
Tile tile_from_json(const json& j);
json tiles_to_json(const std::string& rule, const std::vector<Tile>& tiles);
std::vector<Tile> tiles_from_json(const json& j, std::string* rule = nullptr);

json to_json(const SubstitutionRule& r);
SubstitutionRule rule_from_json(const json& j);

json to_json(const PeriodSet& p);
json to_json(const RadiusEstimate& r);
json to_json(const DensityCurve& c);

/// RFC 4180 field quoting and a CRLF-terminated table.
std::string csv_field(std::string_view s);
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);
std::string density_csv(const DensityCurve& c);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, std::string_view data);
std::string read_file(const std::string& path);

/// SHA-1 of "blob <size>\0" + data, as git computes object ids.
std::string git_blob_hash(std::string_view data);

}  // namespace delone
