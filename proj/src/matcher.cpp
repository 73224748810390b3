#include "restcov/matcher.hpp"

#include <algorithm>
#include <array>

namespace restcov {

namespace {

// Request headers that are transport plumbing, not API inputs; they never
// show up in the undocumented-parameter diagnostics.
bool plumbing_header(std::string_view lower_name) {
    static constexpr std::array<std::string_view, 24> kExact = {
        "host",           "content-length",  "content-type", "connection",
        "keep-alive",     "transfer-encoding", "te",         "trailer",
        "upgrade",        "expect",          "accept",       "accept-encoding",
        "accept-language", "accept-charset", "user-agent",   "cookie",
        "origin",         "referer",         "date",         "cache-control",
        "pragma",         "via",             "forwarded",    "upgrade-insecure-requests"};
    if (std::find(kExact.begin(), kExact.end(), lower_name) != kExact.end()) return true;
    return lower_name.rfind("sec-", 0) == 0 || lower_name.rfind("proxy-", 0) == 0 ||
           lower_name.rfind("x-forwarded-", 0) == 0;
}

std::vector<std::string> split_path_segments(std::string_view path) {
    if (path.empty()) return {};
    if (path.front() == '/') path.remove_prefix(1);
    // trailing slash is not significant, except for the root path
    if (!path.empty() && path.back() == '/') path.remove_suffix(1);
    std::vector<std::string> segments;
    if (path.empty()) return segments;
    std::size_t pos = 0;
    while (true) {
        auto slash = path.find('/', pos);
        segments.emplace_back(
            path.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos));
        if (slash == std::string_view::npos) break;
        pos = slash + 1;
    }
    return segments;
}

// Path component of a server entry; "http://host/v1" and "/v1" both yield "/v1".
std::string server_path_of(const std::string& server_url) {
    if (auto parsed = parse_url(server_url)) return parsed->path;
    if (!server_url.empty() && server_url.front() == '/') return server_url;
    return "/";
}

struct TemplateSegment {
    std::string text;  // literal, or variable name
    bool is_variable = false;
};

struct CompiledTemplate {
    std::string path_template;
    std::vector<TemplateSegment> segments;
    int concrete_count = 0;
};

struct CompiledModel {
    std::vector<std::vector<std::string>> server_prefixes;  // sorted by length desc
    std::vector<CompiledTemplate> templates;                // sorted by template string
    const ApiModel* model = nullptr;

    explicit CompiledModel(const ApiModel& m) : model(&m) {
        for (const auto& server : m.servers) {
            auto segments = split_path_segments(server_path_of(server));
            if (std::find(server_prefixes.begin(), server_prefixes.end(), segments) ==
                server_prefixes.end()) {
                server_prefixes.push_back(std::move(segments));
            }
        }
        if (server_prefixes.empty()) server_prefixes.push_back({});
        std::sort(server_prefixes.begin(), server_prefixes.end(),
                  [](const auto& a, const auto& b) { return a.size() > b.size(); });

        for (const auto& op : m.operations) {
            if (std::any_of(templates.begin(), templates.end(), [&](const CompiledTemplate& t) {
                    return t.path_template == op.path_template;
                })) {
                continue;
            }
            CompiledTemplate compiled;
            compiled.path_template = op.path_template;
            for (auto& segment : split_path_segments(op.path_template)) {
                bool variable = segment.size() >= 2 && segment.front() == '{' && segment.back() == '}';
                if (variable) {
                    compiled.segments.push_back({segment.substr(1, segment.size() - 2), true});
                } else {
                    compiled.segments.push_back({std::move(segment), false});
                    ++compiled.concrete_count;
                }
            }
            templates.push_back(std::move(compiled));
        }
        std::sort(templates.begin(), templates.end(), [](const auto& a, const auto& b) {
            return a.path_template < b.path_template;
        });
    }

    // Longest server prefix heading `segments`, or nullptr.
    const std::vector<std::string>* strip_prefix(const std::vector<std::string>& segments) const {
        for (const auto& prefix : server_prefixes) {
            if (prefix.size() > segments.size()) continue;
            if (std::equal(prefix.begin(), prefix.end(), segments.begin())) return &prefix;
        }
        return nullptr;
    }

    std::variant<PathMatch, UnmatchedReason> match(HttpMethod method, std::string_view url) const {
        auto parsed = parse_url(url);
        std::vector<std::string> segments =
            parsed ? split_path_segments(parsed->path) : split_path_segments(url);

        const auto* prefix = strip_prefix(segments);
        if (prefix == nullptr) return UnmatchedReason::NoServerPrefix;
        segments.erase(segments.begin(), segments.begin() + static_cast<long>(prefix->size()));

        const CompiledTemplate* best = nullptr;
        for (const auto& candidate : templates) {
            if (candidate.segments.size() != segments.size()) continue;
            bool ok = true;
            for (std::size_t i = 0; i < segments.size(); ++i) {
                const auto& ts = candidate.segments[i];
                if (ts.is_variable ? segments[i].empty() : ts.text != segments[i]) {
                    ok = false;
                    break;
                }
            }
            // templates are iterated in lexicographic order, so a strict
            // improvement test implements the tie-break
            if (ok && (best == nullptr || candidate.concrete_count > best->concrete_count)) {
                best = &candidate;
            }
        }
        if (best == nullptr) return UnmatchedReason::NoPath;

        const OperationSpec* op = nullptr;
        for (const auto& candidate : model->operations) {
            if (candidate.path_template == best->path_template && candidate.method == method) {
                op = &candidate;
                break;
            }
        }
        if (op == nullptr) return UnmatchedReason::NoMethod;

        PathMatch match;
        match.operation = op;
        for (std::size_t i = 0; i < segments.size(); ++i) {
            if (best->segments[i].is_variable) {
                match.path_values[best->segments[i].text] = segments[i];
            }
        }
        return match;
    }
};

std::vector<std::pair<std::string, std::string>> parse_cookie_header(std::string_view value) {
    std::vector<std::pair<std::string, std::string>> cookies;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        auto semi = value.find(';', pos);
        std::string_view item =
            value.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            auto eq = item.find('=');
            if (eq != std::string_view::npos && eq > 0) {
                cookies.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
            }
        }
        if (semi == std::string_view::npos) break;
        pos = semi + 1;
    }
    return cookies;
}

}  // namespace

std::string_view to_string(StatusClass cls) {
    switch (cls) {
        case StatusClass::Correct: return "correct";
        case StatusClass::Erroneous: return "erroneous";
        case StatusClass::Other: return "other";
    }
    return "other";
}

StatusClass classify_status(int status) {
    if (status >= 200 && status <= 299) return StatusClass::Correct;
    if (status >= 400 && status <= 599) return StatusClass::Erroneous;
    return StatusClass::Other;
}

std::string_view to_string(UnmatchedReason reason) {
    switch (reason) {
        case UnmatchedReason::NoServerPrefix: return "no_server_prefix";
        case UnmatchedReason::NoPath: return "no_path";
        case UnmatchedReason::NoMethod: return "no_method";
    }
    return "no_path";
}

std::variant<PathMatch, UnmatchedReason>
match_operation(const ApiModel& model, HttpMethod method, std::string_view url) {
    return CompiledModel(model).match(method, url);
}

std::optional<std::string> media_type_of(const Headers& headers) {
    auto value = header_value(headers, "Content-Type");
    if (!value) return std::nullopt;
    std::string normalized = normalize_media_type(*value);
    if (normalized.empty()) return std::nullopt;
    return normalized;
}

std::vector<ParameterObservation>
extract_parameters(const OperationSpec& op, const Interaction& interaction,
                   const std::map<std::string, std::string>& path_values,
                   std::vector<UndocumentedInput>* undocumented) {
    std::vector<ParameterObservation> observations;
    auto declared = [&](ParamLocation location, std::string_view name,
                        bool case_insensitive = false) -> const ParameterSpec* {
        for (const auto& param : op.parameters) {
            if (param.location != location) continue;
            if (case_insensitive ? iequals(param.name, name) : param.name == name) return &param;
        }
        return nullptr;
    };
    auto note_undocumented = [&](ParamLocation location, std::string name) {
        if (undocumented != nullptr) undocumented->push_back({location, std::move(name)});
    };

    // path values arrive raw from the matcher
    for (const auto& [var, raw] : path_values) {
        if (const auto* param = declared(ParamLocation::Path, var)) {
            observations.push_back({param, percent_decode(raw)});
        } else {
            note_undocumented(ParamLocation::Path, var);
        }
    }

    if (auto parsed = parse_url(interaction.url); parsed && parsed->query) {
        for (auto& [key, value] : parse_query(*parsed->query)) {
            if (const auto* param = declared(ParamLocation::Query, key)) {
                observations.push_back({param, value});
            } else {
                note_undocumented(ParamLocation::Query, key);
            }
        }
    }

    for (const auto& [name, value] : interaction.request_headers) {
        if (const auto* param = declared(ParamLocation::Header, name, /*case_insensitive=*/true)) {
            observations.push_back({param, value});
            continue;
        }
        std::string lower = to_lower(name);
        if (lower == "cookie") {
            for (auto& [cookie_name, cookie_value] : parse_cookie_header(value)) {
                if (const auto* param = declared(ParamLocation::Cookie, cookie_name)) {
                    observations.push_back({param, cookie_value});
                } else {
                    note_undocumented(ParamLocation::Cookie, cookie_name);
                }
            }
        } else if (!plumbing_header(lower)) {
            note_undocumented(ParamLocation::Header, lower);
        }
    }
    return observations;
}

MatchOutcome match_log(const ApiModel& model, const InteractionLog& log) {
    CompiledModel compiled(model);
    MatchOutcome outcome;
    for (const auto& interaction : log.interactions) {
        auto result = compiled.match(interaction.method, interaction.url);
        if (std::holds_alternative<UnmatchedReason>(result)) {
            outcome.unmatched.push_back({&interaction, std::get<UnmatchedReason>(result)});
            continue;
        }
        auto& path_match = std::get<PathMatch>(result);
        MatchedInteraction matched;
        matched.interaction = &interaction;
        matched.operation = path_match.operation;
        matched.path_values = std::move(path_match.path_values);
        matched.observed_params = extract_parameters(*matched.operation, interaction,
                                                     matched.path_values,
                                                     &matched.undocumented_params);
        matched.request_media_type = media_type_of(interaction.request_headers);
        matched.response_media_type = media_type_of(interaction.response_headers);
        matched.status_class = classify_status(interaction.status);
        outcome.matched.push_back(std::move(matched));
    }
    return outcome;
}

}  // namespace restcov
