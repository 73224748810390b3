#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

namespace restcov::detail {

using ojson = nlohmann::ordered_json;

/// Parses a YAML document into JSON with YAML 1.2 core-schema scalar
/// resolution (null/bool/int/float, everything else string). Mapping keys are
/// stringified with the same rules, so `200:` becomes the key "200".
/// Throws ParseError on malformed input or pathological nesting.
ojson yaml_to_json(std::string_view document);

}  // namespace restcov::detail
