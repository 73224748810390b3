#include "restcov/traffic_log.hpp"

#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "restcov/errors.hpp"

namespace restcov {

namespace {

using ojson = nlohmann::ordered_json;

bool valid_interaction_url(const std::string& url) {
    auto parsed = parse_url(url);
    return parsed && (parsed->scheme == "http" || parsed->scheme == "https");
}

Headers headers_from_pairs(const ojson& node, std::size_t line, const char* field) {
    Headers out;
    if (!node.is_array()) throw SchemaError(line, field, "expected an array of [name, value] pairs");
    for (const ojson& pair : node) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
            throw SchemaError(line, field, "expected [name, value] string pairs");
        }
        out.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    return out;
}

std::optional<std::string> body_from_b64(const ojson& node, std::size_t line, const char* field) {
    if (!node.is_string()) throw SchemaError(line, field, "expected a base64 string");
    auto decoded = base64_decode(node.get<std::string>());
    if (!decoded) throw SchemaError(line, field, "invalid base64");
    return decoded;
}

Interaction interaction_from_line(const ojson& j, std::size_t line) {
    if (!j.is_object()) throw SchemaError(line, "", "expected a JSON object");
    Interaction out;

    if (!j.contains("ts") || !j["ts"].is_string()) throw SchemaError(line, "ts", "missing or not a string");
    auto ts = parse_iso8601_ms(j["ts"].get<std::string>());
    if (!ts) throw SchemaError(line, "ts", "not an ISO-8601 instant");
    out.timestamp_ms = *ts;

    if (!j.contains("method") || !j["method"].is_string()) {
        throw SchemaError(line, "method", "missing or not a string");
    }
    auto method = method_from_string(j["method"].get<std::string>());
    if (!method) throw SchemaError(line, "method", "unknown HTTP method");
    out.method = *method;

    if (!j.contains("url") || !j["url"].is_string()) throw SchemaError(line, "url", "missing or not a string");
    out.url = j["url"].get<std::string>();
    if (!valid_interaction_url(out.url)) throw SchemaError(line, "url", "not an absolute http(s) URL");

    if (!j.contains("status") || !j["status"].is_number_integer()) {
        throw SchemaError(line, "status", "missing or not an integer");
    }
    out.status = j["status"].get<int>();
    if (out.status < 100 || out.status > 599) throw SchemaError(line, "status", "outside 100..599");

    if (j.contains("req_headers")) out.request_headers = headers_from_pairs(j["req_headers"], line, "req_headers");
    if (j.contains("resp_headers")) out.response_headers = headers_from_pairs(j["resp_headers"], line, "resp_headers");
    if (j.contains("req_body_b64")) out.request_body = body_from_b64(j["req_body_b64"], line, "req_body_b64");
    if (j.contains("resp_body_b64")) out.response_body = body_from_b64(j["resp_body_b64"], line, "resp_body_b64");

    if (j.contains("truncated")) {
        if (!j["truncated"].is_boolean()) throw SchemaError(line, "truncated", "not a boolean");
        out.truncated = j["truncated"].get<bool>();
    }
    return out;
}

ojson headers_to_pairs(const Headers& headers) {
    ojson arr = ojson::array();
    for (const auto& [name, value] : headers) arr.push_back(ojson::array({name, value}));
    return arr;
}

}  // namespace

std::string to_jsonl_line(const Interaction& interaction) {
    ojson j = ojson::object();
    j["ts"] = format_iso8601_ms(interaction.timestamp_ms);
    j["method"] = std::string(to_string(interaction.method));
    j["url"] = interaction.url;
    j["req_headers"] = headers_to_pairs(interaction.request_headers);
    if (interaction.request_body) j["req_body_b64"] = base64_encode(*interaction.request_body);
    j["status"] = interaction.status;
    j["resp_headers"] = headers_to_pairs(interaction.response_headers);
    if (interaction.response_body) j["resp_body_b64"] = base64_encode(*interaction.response_body);
    if (interaction.truncated) j["truncated"] = true;
    return j.dump();
}

InteractionLog read_jsonl(std::string_view document, std::string source) {
    InteractionLog log;
    log.source = std::move(source);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= document.size()) {
        auto nl = document.find('\n', pos);
        std::string_view line =
            document.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) {
            ojson j;
            try {
                j = ojson::parse(line);
            } catch (const ojson::parse_error& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
            log.interactions.push_back(interaction_from_line(j, line_no));
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return log;
}

std::string write_jsonl(const InteractionLog& log) {
    std::string out;
    for (const auto& interaction : log.interactions) {
        out += to_jsonl_line(interaction);
        out += '\n';
    }
    return out;
}

void write_jsonl(const InteractionLog& log, std::ostream& sink) {
    for (const auto& interaction : log.interactions) {
        sink << to_jsonl_line(interaction) << '\n';
    }
}

namespace {

Headers har_headers(const ojson& node) {
    Headers out;
    if (!node.is_array()) return out;
    for (const ojson& h : node) {
        if (h.is_object() && h.contains("name") && h["name"].is_string() && h.contains("value") &&
            h["value"].is_string()) {
            out.emplace_back(h["name"].get<std::string>(), h["value"].get<std::string>());
        }
    }
    return out;
}

// HAR body carriers: request.postData / response.content, text plus optional
// base64 encoding marker.
std::optional<std::string> har_body(const ojson& node, std::vector<std::string>& warnings,
                                    std::size_t index, const char* side) {
    if (!node.is_object() || !node.contains("text") || !node["text"].is_string()) {
        return std::nullopt;
    }
    std::string text = node["text"].get<std::string>();
    if (node.contains("encoding") && node["encoding"].is_string() &&
        node["encoding"].get<std::string>() == "base64") {
        auto decoded = base64_decode(text);
        if (!decoded) {
            warnings.push_back("entry " + std::to_string(index) + ": invalid base64 in " + side +
                               " body, kept verbatim");
            return text;
        }
        return decoded;
    }
    return text;
}

}  // namespace

InteractionLog read_har(std::string_view document, std::string source) {
    ojson root;
    try {
        root = ojson::parse(document);
    } catch (const ojson::parse_error& e) {
        throw ParseError(std::string("HAR: ") + e.what());
    }
    if (!root.is_object() || !root.contains("log") || !root["log"].is_object() ||
        !root["log"].contains("entries") || !root["log"]["entries"].is_array()) {
        throw NotHar("missing log.entries");
    }

    InteractionLog log;
    log.source = std::move(source);
    std::size_t index = 0;
    for (const ojson& entry : root["log"]["entries"]) {
        ++index;
        if (!entry.is_object() || !entry.contains("request") || !entry["request"].is_object() ||
            !entry.contains("response") || !entry["response"].is_object()) {
            log.warnings.push_back("entry " + std::to_string(index) +
                                   ": missing request or response, dropped");
            continue;
        }
        const ojson& request = entry["request"];
        const ojson& response = entry["response"];

        if (!response.contains("status") || !response["status"].is_number_integer() ||
            response["status"].get<int>() < 100 || response["status"].get<int>() > 599) {
            log.warnings.push_back("entry " + std::to_string(index) +
                                   ": missing or invalid response status, dropped");
            continue;
        }
        if (!request.contains("method") || !request["method"].is_string() ||
            !method_from_string(request["method"].get<std::string>())) {
            log.warnings.push_back("entry " + std::to_string(index) +
                                   ": missing or unknown request method, dropped");
            continue;
        }
        if (!request.contains("url") || !request["url"].is_string() ||
            !valid_interaction_url(request["url"].get<std::string>())) {
            log.warnings.push_back("entry " + std::to_string(index) +
                                   ": missing or invalid request url, dropped");
            continue;
        }

        Interaction out;
        out.method = *method_from_string(request["method"].get<std::string>());
        out.url = request["url"].get<std::string>();
        out.status = response["status"].get<int>();

        if (entry.contains("startedDateTime") && entry["startedDateTime"].is_string()) {
            if (auto ts = parse_iso8601_ms(entry["startedDateTime"].get<std::string>())) {
                out.timestamp_ms = *ts;
            } else {
                log.warnings.push_back("entry " + std::to_string(index) +
                                       ": unparseable startedDateTime, timestamp set to 0");
            }
        } else {
            log.warnings.push_back("entry " + std::to_string(index) +
                                   ": missing startedDateTime, timestamp set to 0");
        }

        if (request.contains("headers")) out.request_headers = har_headers(request["headers"]);
        if (response.contains("headers")) out.response_headers = har_headers(response["headers"]);
        if (request.contains("postData")) {
            out.request_body = har_body(request["postData"], log.warnings, index, "request");
        }
        if (response.contains("content")) {
            out.response_body = har_body(response["content"], log.warnings, index, "response");
        }
        log.interactions.push_back(std::move(out));
    }
    return log;
}

}  // namespace restcov
