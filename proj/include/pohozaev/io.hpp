#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pohozaev/config.hpp"
#include "pohozaev/fields.hpp"
#include "pohozaev/functionals.hpp"
#include "pohozaev/limit_problem.hpp"
#include "pohozaev/projection.hpp"
#include "pohozaev/search.hpp"
#include "pohozaev/two_bump.hpp"

namespace pohozaev {

/// Version strings stamped into every artifact.
std::vector<std::pair<std::string, std::string>> module_versions();

/// Provenance block carried by every output file.
struct ArtifactHeader
{
    std::string kind;
    std::string config_hash;

    static ArtifactHeader make(std::string kind, RunConfig const& cfg);
    nlohmann::json to_json() const;
};

using CsvCell = std::variant<double, std::int64_t, std::string>;

struct CsvTable
{
    std::vector<std::string> columns;
    std::vector<std::vector<CsvCell>> rows;
};

/// 17 significant digits, so values round-trip exactly.
std::string format_real(double x);

/// Writes `# key: value` header lines, then the column names and rows.
void write_csv(std::string const& path, ArtifactHeader const& header, CsvTable const& table);
/// Wraps the payload as {"header": ..., "data": payload}.
void write_json(std::string const& path, ArtifactHeader const& header, nlohmann::json const& payload);
/// Returns the "data" member of a file written by write_json.
nlohmann::json read_json(std::string const& path);

nlohmann::json to_json(EnergyReport const& r);
nlohmann::json to_json(ExponentFit const& f);
nlohmann::json to_json(LineFit const& f);
nlohmann::json to_json(InteractionReport const& r);
nlohmann::json to_json(AcpReport const& r);
nlohmann::json to_json(ProjectionResult const& r);
nlohmann::json to_json(LandscapeReport const& r);
nlohmann::json to_json(LevelReport const& r);
nlohmann::json to_json(RadialProfile const& w);

CsvTable profile_table(RadialProfile const& w);
CsvTable interaction_table(InteractionReport const& r);
CsvTable exponent_table(ExponentFit const& f);
CsvTable landscape_table(LandscapeReport const& r);
CsvTable history_table(SearchState const& s);
/// Final field as (z, rho, u) with coordinates in physical units.
CsvTable field_table(NodalField const& u);

} // namespace pohozaev
