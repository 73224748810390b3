#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "restcov/http.hpp"

namespace restcov {

/// One recorded HTTP request/response pair. Bodies are raw bytes; an absent
/// body is distinct from an empty one.
struct Interaction {
    std::int64_t timestamp_ms = 0;  // UTC epoch milliseconds
    HttpMethod method = HttpMethod::Get;
    std::string url;  // absolute, http or https
    Headers request_headers;
    std::optional<std::string> request_body;
    int status = 0;  // 100..599
    Headers response_headers;
    std::optional<std::string> response_body;
    bool truncated = false;  // a body was cut at the proxy's max-body limit

    bool operator==(const Interaction&) const = default;
};

struct InteractionLog {
    std::vector<Interaction> interactions;  // wire order, never deduplicated
    std::string source;
    std::vector<std::string> warnings;

    bool operator==(const InteractionLog&) const = default;
};

/// Reads a HAR 1.2 document. Entries without a valid response status or URL
/// are dropped with a warning; base64-encoded bodies are decoded.
/// Throws ParseError on malformed JSON, NotHar when log.entries is missing.
InteractionLog read_har(std::string_view document, std::string source = "har");

/// Reads the native JSON Lines format (one interaction per line).
/// Throws ParseError or SchemaError carrying the offending line number.
InteractionLog read_jsonl(std::string_view document, std::string source = "jsonl");

/// Writes the native JSON Lines format; read_jsonl(write_jsonl(log))
/// reproduces the log field-for-field (bodies via base64).
std::string write_jsonl(const InteractionLog& log);
void write_jsonl(const InteractionLog& log, std::ostream& sink);

/// Serializes one interaction as a single JSONL line (no trailing newline).
std::string to_jsonl_line(const Interaction& interaction);

}  // namespace restcov
