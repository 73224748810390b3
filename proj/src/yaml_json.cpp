#include "yaml_json.hpp"

#include <cerrno>
#include <cstdlib>
#include <string>

#include <yaml-cpp/yaml.h>

#include "restcov/errors.hpp"

namespace restcov::detail {

namespace {

constexpr int kMaxDepth = 256;  // alias loops aside, sane documents are shallow

bool parse_int(const std::string& s, long long& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

bool parse_float(const std::string& s, double& out) {
    if (s.empty()) return false;
    // keep .inf/.nan textual; JSON cannot carry them
    for (char c : s) {
        if (c != '+' && c != '-' && c != '.' && c != 'e' && c != 'E' &&
            !(c >= '0' && c <= '9')) {
            return false;
        }
    }
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

ojson scalar_to_json(const YAML::Node& node) {
    const std::string& text = node.Scalar();
    // "?" marks a plain (unquoted) scalar; anything quoted or tagged stays a string
    if (node.Tag() != "?") return ojson(text);

    if (text.empty() || text == "~" || text == "null" || text == "Null" || text == "NULL") {
        return ojson(nullptr);
    }
    if (text == "true" || text == "True" || text == "TRUE") return ojson(true);
    if (text == "false" || text == "False" || text == "FALSE") return ojson(false);

    long long i = 0;
    if (parse_int(text, i)) return ojson(i);
    double d = 0;
    if (parse_float(text, d)) return ojson(d);
    return ojson(text);
}

std::string key_to_string(const YAML::Node& key) {
    if (!key.IsScalar()) throw ParseError("YAML mapping key is not a scalar");
    ojson j = scalar_to_json(key);
    return j.is_string() ? j.get<std::string>() : j.dump();
}

ojson convert(const YAML::Node& node, int depth) {
    if (depth > kMaxDepth) throw ParseError("YAML document nested too deeply (alias loop?)");
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            return ojson(nullptr);
        case YAML::NodeType::Scalar:
            return scalar_to_json(node);
        case YAML::NodeType::Sequence: {
            ojson arr = ojson::array();
            for (const auto& item : node) arr.push_back(convert(item, depth + 1));
            return arr;
        }
        case YAML::NodeType::Map: {
            ojson obj = ojson::object();
            for (const auto& kv : node) {
                obj[key_to_string(kv.first)] = convert(kv.second, depth + 1);
            }
            return obj;
        }
    }
    return ojson(nullptr);
}

}  // namespace

ojson yaml_to_json(std::string_view document) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(document));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string("YAML: ") + e.what());
    }
    return convert(root, 0);
}

}  // namespace restcov::detail
