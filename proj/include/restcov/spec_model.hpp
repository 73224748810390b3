#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "restcov/http.hpp"

namespace restcov {

enum class ParamLocation { Path, Query, Header, Cookie };

std::string_view to_string(ParamLocation location);
std::optional<ParamLocation> param_location_from_string(std::string_view name);

enum class DomainKind { Boolean, Enumeration, Unbounded };

/// Value domain of a parameter. `literals` holds the canonical spellings for
/// boolean/enum domains; textual comparison against observed wire values is
/// done on these strings.
struct ValueDomain {
    DomainKind kind = DomainKind::Unbounded;
    std::vector<std::string> literals;

    bool domain_limited() const { return kind != DomainKind::Unbounded; }
    bool operator==(const ValueDomain&) const = default;
};

struct ParameterSpec {
    std::string name;
    ParamLocation location = ParamLocation::Query;
    bool required = false;
    ValueDomain domain;

    bool operator==(const ParameterSpec&) const = default;
};

struct MediaTypeSet {
    std::vector<std::string> media_types;  // lowercase "type/subtype", no parameters
    bool has_wildcard = false;

    bool empty() const { return media_types.empty(); }
    bool operator==(const MediaTypeSet&) const = default;
};

struct ResponseSpec {
    std::string status_key;  // "200", "4XX" or "default", as written
    MediaTypeSet media_types;

    bool operator==(const ResponseSpec&) const = default;
};

struct OperationSpec {
    std::string path_template;
    HttpMethod method = HttpMethod::Get;
    std::optional<std::string> operation_id;
    std::vector<ParameterSpec> parameters;
    MediaTypeSet request_media_types;  // empty when no request body is documented
    std::vector<ResponseSpec> responses;

    /// "GET /pets/{petId}" -- the stable identity used in reports.
    std::string key() const;

    bool operator==(const OperationSpec&) const = default;
};

/// Normalized, self-contained view of an OpenAPI 3 document. Immutable after
/// construction; safe to share across threads.
struct ApiModel {
    std::vector<std::string> servers;
    std::vector<OperationSpec> operations;
    std::string source_version;
    std::vector<std::string> warnings;  // tolerated irregularities, in discovery order

    bool operator==(const ApiModel&) const = default;
};

enum class SpecFormat { Json, Yaml };

/// Parses and normalizes an OpenAPI 3 document. Format is auto-detected from
/// the first non-whitespace character ("{" -> JSON) unless a hint is given.
/// All local $ref chains are resolved; media types are lowercased and
/// parameter-stripped.
///
/// Throws ParseError, UnsupportedVersion, UnresolvableRef or ExternalRef.
ApiModel load_spec(std::string_view document, std::optional<SpecFormat> format_hint = std::nullopt);

/// Parameters eligible for parameter-value coverage (boolean or enum domains),
/// in deterministic (path, method, name) order.
std::vector<std::pair<const OperationSpec*, const ParameterSpec*>>
list_domain_limited_parameters(const ApiModel& model);

/// Template variables of a path template, in order of appearance.
/// The template must be syntactically valid (load_spec guarantees this).
std::vector<std::string> path_template_variables(std::string_view path_template);

}  // namespace restcov
