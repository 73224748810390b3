#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace restcov {

enum class HttpMethod { Get, Head, Post, Put, Delete, Connect, Options, Trace, Patch };

std::string_view to_string(HttpMethod method);
std::optional<HttpMethod> method_from_string(std::string_view name);

/// Ordered (name, value) pairs, order preserved as seen on the wire.
using Headers = std::vector<std::pair<std::string, std::string>>;

/// First header matching `name` case-insensitively, if any.
std::optional<std::string> header_value(const Headers& headers, std::string_view name);

bool iequals(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);

/// Decomposed absolute URL. `path` and `query` are kept raw (still percent-encoded).
struct Url {
    std::string scheme;
    std::string host;
    std::optional<int> port;
    std::string path;                  // always starts with "/"
    std::optional<std::string> query;  // without leading "?"
};

/// Parses an absolute http/https URL. Returns nullopt when the input has no
/// scheme or authority; fragments are dropped.
std::optional<Url> parse_url(std::string_view url);

/// Percent-decodes %XX escapes; when `plus_as_space`, "+" decodes to " ".
/// Malformed escapes are passed through verbatim.
std::string percent_decode(std::string_view s, bool plus_as_space = false);

/// Splits a raw query string into decoded (key, value) pairs,
/// application/x-www-form-urlencoded style. Order and repetitions preserved.
std::vector<std::pair<std::string, std::string>> parse_query(std::string_view query);

/// "type/subtype" with parameters stripped and case folded, e.g.
/// "Application/JSON; charset=utf-8" -> "application/json".
std::string normalize_media_type(std::string_view value);

std::string base64_encode(std::string_view bytes);
std::optional<std::string> base64_decode(std::string_view text);

/// UTC instant, millisecond precision <-> "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_iso8601_ms(std::int64_t epoch_ms);
std::optional<std::int64_t> parse_iso8601_ms(std::string_view text);

}  // namespace restcov
