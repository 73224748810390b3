#include "restcov/spec_model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "restcov/errors.hpp"
#include "yaml_json.hpp"

namespace restcov {

using detail::ojson;

namespace {

// Fixed field names of the OpenAPI 3 path item object.
constexpr std::string_view kOperationKeys[] = {"get",  "put",     "post", "delete",
                                               "head", "options", "patch", "trace"};

struct Loader {
    const ojson& root;
    std::vector<std::string> warnings;

    const ojson& resolve(const ojson& node) {
        std::vector<std::string> chain;
        return resolve_chain(node, chain);
    }

    const ojson& resolve_chain(const ojson& node, std::vector<std::string>& chain) {
        const ojson* current = &node;
        while (current->is_object() && current->contains("$ref")) {
            const ojson& ref = (*current)["$ref"];
            if (!ref.is_string()) throw ParseError("$ref is not a string");
            std::string target = ref.get<std::string>();
            if (target.empty() || target[0] != '#') {
                throw ExternalRef("external reference not supported: " + target);
            }
            std::string pointer = percent_decode(target.substr(1));
            if (std::find(chain.begin(), chain.end(), pointer) != chain.end()) {
                throw UnresolvableRef("cyclic $ref chain through " + target);
            }
            chain.push_back(pointer);
            try {
                ojson::json_pointer p(pointer);
                if (!root.contains(p)) throw UnresolvableRef("dangling $ref: " + target);
                current = &root.at(p);
            } catch (const ojson::exception&) {
                throw UnresolvableRef("invalid $ref pointer: " + target);
            }
        }
        return *current;
    }

    void warn(std::string message) { warnings.push_back(std::move(message)); }
};

// Minimal JSON text of an enum literal: strings unquoted, numbers without
// superfluous zeros, booleans lowercase.
std::string canonical_literal(const ojson& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

struct TemplateSegment {
    std::string text;  // literal text, or variable name when is_variable
    bool is_variable = false;
};

// Validates a path template and splits it into segments. A segment is either
// fully concrete or exactly one "{name}" variable; a single trailing slash is
// tolerated (the matcher normalizes it away).
std::vector<TemplateSegment> parse_path_template(const std::string& path) {
    if (path.empty() || path[0] != '/') {
        throw ParseError("path template must start with '/': \"" + path + "\"");
    }
    std::string_view body(path);
    body.remove_prefix(1);
    if (body == "/") {
        throw ParseError("empty segment in path template \"" + path + "\"");
    }
    if (!body.empty() && body.back() == '/') body.remove_suffix(1);

    std::vector<TemplateSegment> segments;
    std::set<std::string> seen_vars;
    std::size_t pos = 0;
    while (pos <= body.size() && !body.empty()) {
        auto slash = body.find('/', pos);
        std::string_view segment =
            body.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos);
        if (segment.empty()) {
            throw ParseError("empty segment in path template \"" + path + "\"");
        }
        auto open = segment.find('{');
        auto close = segment.find('}');
        if (open == std::string_view::npos && close == std::string_view::npos) {
            segments.push_back({std::string(segment), false});
        } else if (open == 0 && close == segment.size() - 1 &&
                   segment.find('{', 1) == std::string_view::npos &&
                   close != std::string_view::npos && close > 1) {
            std::string name(segment.substr(1, segment.size() - 2));
            if (!seen_vars.insert(name).second) {
                throw ParseError("duplicate variable {" + name + "} in path template \"" + path + "\"");
            }
            segments.push_back({std::move(name), true});
        } else {
            throw ParseError("malformed template segment \"" + std::string(segment) +
                             "\" in path \"" + path + "\"");
        }
        if (slash == std::string_view::npos) break;
        pos = slash + 1;
    }
    return segments;
}

bool valid_status_key(const std::string& key) {
    if (key == "default") return true;
    if (key.size() != 3) return false;
    if (std::isdigit(static_cast<unsigned char>(key[0])) == 0) return false;
    if (key[1] == 'X' && key[2] == 'X') return true;
    return std::isdigit(static_cast<unsigned char>(key[1])) != 0 &&
           std::isdigit(static_cast<unsigned char>(key[2])) != 0;
}

MediaTypeSet media_types_from_content(const ojson& content) {
    MediaTypeSet out;
    if (!content.is_object()) return out;
    for (const auto& [key, value] : content.items()) {
        (void)value;
        std::string normalized = normalize_media_type(key);
        if (normalized.empty()) continue;
        if (std::find(out.media_types.begin(), out.media_types.end(), normalized) ==
            out.media_types.end()) {
            out.media_types.push_back(normalized);
        }
    }
    out.has_wildcard = std::any_of(out.media_types.begin(), out.media_types.end(),
                                   [](const std::string& mt) { return mt.find('*') != std::string::npos; });
    return out;
}

ValueDomain domain_from_schema(Loader& loader, const ojson& param, const std::string& where) {
    ValueDomain domain;
    if (!param.contains("schema")) return domain;  // content-style params stay unbounded
    const ojson& schema = loader.resolve(param["schema"]);
    if (!schema.is_object()) return domain;

    if (schema.contains("enum")) {
        const ojson& literals = schema["enum"];
        if (!literals.is_array()) {
            loader.warn(where + ": enum is not an array, treated as unbounded");
            return domain;
        }
        if (literals.empty()) {
            loader.warn(where + ": empty enum, treated as unbounded");
            return domain;
        }
        for (const ojson& lit : literals) {
            std::string text = canonical_literal(lit);
            if (std::find(domain.literals.begin(), domain.literals.end(), text) !=
                domain.literals.end()) {
                loader.warn(where + ": duplicate enum literal \"" + text + "\"");
                continue;
            }
            domain.literals.push_back(std::move(text));
        }
        domain.kind = DomainKind::Enumeration;
        return domain;
    }
    if (schema.contains("type") && schema["type"].is_string() &&
        schema["type"].get<std::string>() == "boolean") {
        domain.kind = DomainKind::Boolean;
        domain.literals = {"true", "false"};
    }
    return domain;
}

std::optional<ParameterSpec> build_parameter(Loader& loader, const ojson& raw,
                                             const std::string& where) {
    const ojson& param = loader.resolve(raw);
    if (!param.is_object()) {
        loader.warn(where + ": parameter entry is not an object, skipped");
        return std::nullopt;
    }
    if (!param.contains("name") || !param["name"].is_string()) {
        loader.warn(where + ": parameter without a name, skipped");
        return std::nullopt;
    }
    ParameterSpec spec;
    spec.name = param["name"].get<std::string>();
    if (!param.contains("in") || !param["in"].is_string()) {
        loader.warn(where + ": parameter \"" + spec.name + "\" without a location, skipped");
        return std::nullopt;
    }
    auto location = param_location_from_string(param["in"].get<std::string>());
    if (!location) {
        loader.warn(where + ": parameter \"" + spec.name + "\" has unknown location \"" +
                    param["in"].get<std::string>() + "\", skipped");
        return std::nullopt;
    }
    spec.location = *location;
    spec.required = param.contains("required") && param["required"].is_boolean() &&
                    param["required"].get<bool>();
    if (spec.location == ParamLocation::Path && !spec.required) {
        loader.warn(where + ": path parameter \"" + spec.name +
                    "\" not marked required, treated as required");
        spec.required = true;
    }
    spec.domain = domain_from_schema(loader, param, where + " parameter \"" + spec.name + "\"");
    return spec;
}

std::string version_of(const ojson& root) {
    const ojson& v = root["openapi"];
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

bool supported_version(const std::string& v) {
    for (std::string_view major : {"3.0", "3.1"}) {
        if (v == major) return true;
        if (v.size() > major.size() && v.compare(0, major.size(), major) == 0 &&
            v[major.size()] == '.') {
            return true;
        }
    }
    return false;
}

}  // namespace

std::string_view to_string(ParamLocation location) {
    switch (location) {
        case ParamLocation::Path: return "path";
        case ParamLocation::Query: return "query";
        case ParamLocation::Header: return "header";
        case ParamLocation::Cookie: return "cookie";
    }
    return "query";
}

std::optional<ParamLocation> param_location_from_string(std::string_view name) {
    if (name == "path") return ParamLocation::Path;
    if (name == "query") return ParamLocation::Query;
    if (name == "header") return ParamLocation::Header;
    if (name == "cookie") return ParamLocation::Cookie;
    return std::nullopt;
}

std::string OperationSpec::key() const {
    return std::string(to_string(method)) + " " + path_template;
}

std::vector<std::string> path_template_variables(std::string_view path_template) {
    std::vector<std::string> vars;
    for (const auto& segment : parse_path_template(std::string(path_template))) {
        if (segment.is_variable) vars.push_back(segment.text);
    }
    return vars;
}

ApiModel load_spec(std::string_view document, std::optional<SpecFormat> format_hint) {
    SpecFormat format;
    if (format_hint) {
        format = *format_hint;
    } else {
        auto first = document.find_first_not_of(" \t\r\n");
        format = (first != std::string_view::npos && document[first] == '{') ? SpecFormat::Json
                                                                             : SpecFormat::Yaml;
    }

    ojson root;
    if (format == SpecFormat::Json) {
        try {
            root = ojson::parse(document);
        } catch (const ojson::parse_error& e) {
            throw ParseError(std::string("JSON: ") + e.what());
        }
    } else {
        root = detail::yaml_to_json(document);
    }
    if (!root.is_object()) throw ParseError("document root is not an object");

    if (root.contains("swagger")) {
        throw UnsupportedVersion("Swagger 2.x documents are not supported; convert to OpenAPI 3");
    }
    if (!root.contains("openapi")) {
        throw UnsupportedVersion("missing \"openapi\" version field");
    }
    std::string version = version_of(root);
    if (!supported_version(version)) {
        throw UnsupportedVersion("unsupported OpenAPI version \"" + version + "\"");
    }

    Loader loader{root, {}};
    ApiModel model;
    model.source_version = version;

    if (root.contains("servers")) {
        const ojson& servers = root["servers"];
        if (!servers.is_array()) {
            loader.warn("servers is not an array, ignored");
        } else {
            for (const ojson& server : servers) {
                if (server.is_object() && server.contains("url") && server["url"].is_string()) {
                    model.servers.push_back(server["url"].get<std::string>());
                } else {
                    loader.warn("server entry without a url string, ignored");
                }
            }
        }
    }

    std::map<std::string, std::string> shapes;  // structural signature -> first template
    if (root.contains("paths")) {
        const ojson& paths = root["paths"];
        if (!paths.is_object()) throw ParseError("paths is not an object");
        for (const auto& [path, raw_item] : paths.items()) {
            if (path.rfind("x-", 0) == 0) continue;
            auto segments = parse_path_template(path);

            std::string shape;
            for (const auto& s : segments) {
                shape += '/';
                shape += s.is_variable ? "{}" : s.text;
            }
            auto [it, inserted] = shapes.emplace(shape, path);
            if (!inserted && it->second != path) {
                loader.warn("path templates \"" + it->second + "\" and \"" + path +
                            "\" are structurally equivalent; matches are tie-broken lexicographically");
            }

            const ojson& item = loader.resolve(raw_item);
            if (!item.is_object()) {
                loader.warn("path item for \"" + path + "\" is not an object, skipped");
                continue;
            }

            std::vector<const ojson*> shared_params;
            if (item.contains("parameters") && item["parameters"].is_array()) {
                for (const ojson& p : item["parameters"]) shared_params.push_back(&p);
            }

            for (const auto& [field, op_node] : item.items()) {
                if (std::find(std::begin(kOperationKeys), std::end(kOperationKeys), field) ==
                    std::end(kOperationKeys)) {
                    continue;
                }
                if (!op_node.is_object()) {
                    loader.warn("operation " + field + " " + path + " is not an object, skipped");
                    continue;
                }
                OperationSpec op;
                op.path_template = path;
                op.method = *method_from_string(field);
                const std::string where = op.key();

                if (op_node.contains("operationId") && op_node["operationId"].is_string()) {
                    op.operation_id = op_node["operationId"].get<std::string>();
                }

                // path-item parameters apply unless overridden by (name, location)
                std::vector<const ojson*> raw_params = shared_params;
                if (op_node.contains("parameters")) {
                    if (!op_node["parameters"].is_array()) {
                        loader.warn(where + ": parameters is not an array, ignored");
                    } else {
                        for (const ojson& p : op_node["parameters"]) raw_params.push_back(&p);
                    }
                }
                std::size_t shared_count = shared_params.size();
                std::vector<std::pair<ParameterSpec, bool>> built;  // (spec, from_op_level)
                for (std::size_t i = 0; i < raw_params.size(); ++i) {
                    auto spec = build_parameter(loader, *raw_params[i], where);
                    if (!spec) continue;
                    bool op_level = i >= shared_count;
                    auto same = std::find_if(built.begin(), built.end(), [&](const auto& e) {
                        return e.first.name == spec->name && e.first.location == spec->location;
                    });
                    if (same == built.end()) {
                        built.emplace_back(std::move(*spec), op_level);
                    } else if (op_level && !same->second) {
                        same->first = std::move(*spec);  // operation level overrides path level
                        same->second = true;
                    } else {
                        loader.warn(where + ": duplicate parameter \"" + spec->name + "\" in " +
                                    std::string(to_string(spec->location)) + ", first kept");
                    }
                }
                for (auto& [spec, _] : built) op.parameters.push_back(std::move(spec));

                // template variables and path parameters must agree
                std::set<std::string> vars;
                for (const auto& s : segments) {
                    if (s.is_variable) vars.insert(s.text);
                }
                for (const auto& p : op.parameters) {
                    if (p.location == ParamLocation::Path && vars.find(p.name) == vars.end()) {
                        loader.warn(where + ": path parameter \"" + p.name +
                                    "\" has no matching template variable");
                    }
                }
                for (const auto& var : vars) {
                    bool declared = std::any_of(op.parameters.begin(), op.parameters.end(),
                                                [&](const ParameterSpec& p) {
                                                    return p.location == ParamLocation::Path &&
                                                           p.name == var;
                                                });
                    if (!declared) {
                        loader.warn(where + ": template variable {" + var +
                                    "} has no matching path parameter");
                    }
                }

                if (op_node.contains("requestBody")) {
                    const ojson& body = loader.resolve(op_node["requestBody"]);
                    if (body.is_object() && body.contains("content")) {
                        op.request_media_types = media_types_from_content(body["content"]);
                    }
                }

                if (op_node.contains("responses") && op_node["responses"].is_object()) {
                    for (const auto& [status_key, raw_response] : op_node["responses"].items()) {
                        if (status_key.rfind("x-", 0) == 0) continue;
                        if (!valid_status_key(status_key)) {
                            loader.warn(where + ": invalid response key \"" + status_key +
                                        "\", skipped");
                            continue;
                        }
                        ResponseSpec response;
                        response.status_key = status_key;
                        const ojson& resolved = loader.resolve(raw_response);
                        if (resolved.is_object() && resolved.contains("content")) {
                            response.media_types = media_types_from_content(resolved["content"]);
                        }
                        op.responses.push_back(std::move(response));
                    }
                }

                model.operations.push_back(std::move(op));
            }
        }
    }

    model.warnings = std::move(loader.warnings);
    return model;
}

std::vector<std::pair<const OperationSpec*, const ParameterSpec*>>
list_domain_limited_parameters(const ApiModel& model) {
    std::vector<std::pair<const OperationSpec*, const ParameterSpec*>> out;
    for (const auto& op : model.operations) {
        for (const auto& param : op.parameters) {
            if (param.domain.domain_limited()) out.emplace_back(&op, &param);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tuple(a.first->path_template, to_string(a.first->method), a.second->name,
                          to_string(a.second->location)) <
               std::tuple(b.first->path_template, to_string(b.first->method), b.second->name,
                          to_string(b.second->location));
    });
    return out;
}

}  // namespace restcov
