#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dyngreen/forms.hpp"

namespace dyngreen {

/// A validated map fileification.
struct MapFile {
    MapPair map;
    std::string label;
};

/// JSON {"d": int, "F1": [rat...], "F2": [rat...], "label": str?}; rationals
/// are integers or strings "p/q", coefficients ordered x^d, x^(d-1) y, ..., y^d.
/// Throws DomainError on malformed input, a degree mismatch or Res = 0.
MapFile parse_map_file(std::string_view text);
MapFile load_map_file(const std::string& path);

/// Inverse of parse_map_file.
std::string to_json(const MapFile& file);

}  // namespace dyngreen
