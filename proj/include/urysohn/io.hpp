#pragma once

#include "urysohn/metric_space.hpp"

#include <json.hpp>

#include <string>

namespace urysohn {

/// Malformed MonoidFile or SpaceFile; where() is a JSON pointer to the bad node.
class SchemaError : public Error {
public:
    SchemaError(const std::string& where, const std::string& what)
        : Error((where.empty() ? "/" : where) + ": " + what), where_(where) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

/// MonoidFile:
///   {"kind": "finite", "elements": [labels, 0 first], "table": [[index or null]]}
///   {"kind": "interval-truncated-add" | "interval-max",
///    "intervals": [{"lo": "0", "lo_closed": true, "hi": "2" | "inf", "hi_closed": false}],
///    "lattice": "1/2" (optional), "excluded": ["3"] (optional)}
/// Rationals are strings "p/q". An optional "name" is kept.
DistanceMonoidSpec monoid_from_json(const nlohmann::json& j);
nlohmann::json monoid_to_json(const DistanceMonoidSpec& spec);

/// SpaceFile:
///   {"monoid": MonoidFile object or builtin name, "points": [labels],
///    "distances": [[label, label, value]]}
/// Values use the ExtendedValue syntax; unlisted pairs are an error.
FiniteMetricSpace space_from_json(const nlohmann::json& j);
nlohmann::json space_to_json(const FiniteMetricSpace& space);

/// Reads and parses a JSON file; errors name the file.
nlohmann::json read_json_file(const std::string& path);

} // namespace urysohn
