#include "restcov/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "restcov/errors.hpp"
#include "restcov/traffic_log.hpp"

namespace restcov {

namespace {

using ojson = nlohmann::ordered_json;

ojson metric_to_json(const MetricValue& value) {
    ojson j = ojson::object();
    if (value.computed) {
        j["status"] = "computed";
        j["numerator"] = value.numerator;
        j["denominator"] = value.denominator;
        j["ratio"] = value.ratio();
    } else {
        j["status"] = "not_computable";
        j["reason"] = value.reason;
    }
    return j;
}

MetricValue metric_from_json(const ojson& j) {
    if (!j.is_object() || !j.contains("status") || !j["status"].is_string()) {
        throw ParseError("metric entry is not an object with a status");
    }
    std::string status = j["status"].get<std::string>();
    if (status == "computed") {
        if (!j.contains("numerator") || !j.contains("denominator")) {
            throw ParseError("computed metric without numerator/denominator");
        }
        return MetricValue::of(j["numerator"].get<std::int64_t>(),
                               j["denominator"].get<std::int64_t>());
    }
    if (status == "not_computable") {
        return MetricValue::not_computable(j.value("reason", std::string()));
    }
    throw ParseError("unknown metric status \"" + status + "\"");
}

ojson media_type_block(bool wildcard_excluded, const std::vector<MediaTypeDetail>& entries) {
    ojson block = ojson::object();
    block["wildcard_excluded"] = wildcard_excluded;
    ojson arr = ojson::array();
    for (const auto& e : entries) {
        arr.push_back({{"media_type", e.media_type}, {"covered", e.covered}});
    }
    block["media_types"] = arr;
    return block;
}

ojson detail_to_json(const OperationDetail& detail) {
    ojson j = ojson::object();
    j["path"] = detail.path_template;
    j["method"] = std::string(to_string(detail.method));
    if (detail.operation_id) j["operation_id"] = *detail.operation_id;
    j["matched_interactions"] = detail.matched_interactions;

    ojson params = ojson::array();
    for (const auto& p : detail.parameters) {
        params.push_back({{"name", p.name},
                          {"in", std::string(to_string(p.location))},
                          {"covered", p.covered}});
    }
    j["parameters"] = params;

    ojson values = ojson::array();
    for (const auto& v : detail.parameter_values) {
        values.push_back({{"parameter", v.parameter}, {"value", v.literal}, {"covered", v.covered}});
    }
    j["parameter_values"] = values;

    ojson codes = ojson::array();
    for (const auto& c : detail.status_codes) {
        codes.push_back({{"code", c.code}, {"covered", c.covered}});
    }
    j["status_codes"] = codes;
    j["excluded_status_keys"] = detail.excluded_status_keys;
    j["undocumented_status_codes"] = detail.undocumented_status_codes;

    j["request_content_types"] =
        media_type_block(detail.request_wildcard_excluded, detail.request_content_types);
    j["response_content_types"] =
        media_type_block(detail.response_wildcard_excluded, detail.response_content_types);

    ojson classes = ojson::array();
    if (detail.observed_correct) classes.push_back("correct");
    if (detail.observed_erroneous) classes.push_back("erroneous");
    j["observed_classes"] = classes;
    return j;
}

OperationDetail detail_from_json(const ojson& j) {
    OperationDetail detail;
    detail.path_template = j.at("path").get<std::string>();
    auto method = method_from_string(j.at("method").get<std::string>());
    if (!method) throw ParseError("unknown method in per_operation entry");
    detail.method = *method;
    if (j.contains("operation_id")) detail.operation_id = j["operation_id"].get<std::string>();
    detail.matched_interactions = j.at("matched_interactions").get<std::int64_t>();

    for (const auto& p : j.at("parameters")) {
        auto location = param_location_from_string(p.at("in").get<std::string>());
        if (!location) throw ParseError("unknown parameter location in report");
        detail.parameters.push_back(
            {p.at("name").get<std::string>(), *location, p.at("covered").get<bool>()});
    }
    for (const auto& v : j.at("parameter_values")) {
        detail.parameter_values.push_back({v.at("parameter").get<std::string>(),
                                           v.at("value").get<std::string>(),
                                           v.at("covered").get<bool>()});
    }
    for (const auto& c : j.at("status_codes")) {
        detail.status_codes.push_back({c.at("code").get<int>(), c.at("covered").get<bool>()});
    }
    detail.excluded_status_keys = j.at("excluded_status_keys").get<std::vector<std::string>>();
    detail.undocumented_status_codes = j.at("undocumented_status_codes").get<std::vector<int>>();

    const ojson& request = j.at("request_content_types");
    detail.request_wildcard_excluded = request.at("wildcard_excluded").get<bool>();
    for (const auto& m : request.at("media_types")) {
        detail.request_content_types.push_back(
            {m.at("media_type").get<std::string>(), m.at("covered").get<bool>()});
    }
    const ojson& response = j.at("response_content_types");
    detail.response_wildcard_excluded = response.at("wildcard_excluded").get<bool>();
    for (const auto& m : response.at("media_types")) {
        detail.response_content_types.push_back(
            {m.at("media_type").get<std::string>(), m.at("covered").get<bool>()});
    }
    for (const auto& cls : j.at("observed_classes")) {
        if (cls == "correct") detail.observed_correct = true;
        if (cls == "erroneous") detail.observed_erroneous = true;
    }
    return detail;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string format_ratio(double ratio, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, ratio);
    return buf;
}

}  // namespace

std::optional<OutputFormat> output_format_from_string(std::string_view name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "table") return OutputFormat::Table;
    return std::nullopt;
}

std::string render_json(const CoverageReport& report) {
    ojson j = ojson::object();
    j["restcov_report_version"] = kReportVersion;

    ojson metrics = ojson::object();
    for (const char* name : kMetricNames) {
        metrics[name] = metric_to_json(*report.metric(name));
    }
    j["metrics"] = metrics;

    ojson ops = ojson::array();
    for (const auto& detail : report.per_operation) ops.push_back(detail_to_json(detail));
    j["per_operation"] = ops;

    const Diagnostics& diag = report.diagnostics;
    ojson d = ojson::object();
    d["unmatched"] = {{"total", diag.unmatched_total()},
                      {"no_server_prefix", diag.unmatched_no_server_prefix},
                      {"no_path", diag.unmatched_no_path},
                      {"no_method", diag.unmatched_no_method}};
    ojson undoc_params = ojson::array();
    for (const auto& p : diag.undocumented_parameters) {
        undoc_params.push_back({{"operation", p.operation},
                                {"in", std::string(to_string(p.location))},
                                {"name", p.name}});
    }
    d["undocumented_parameters"] = undoc_params;
    ojson undoc_codes = ojson::array();
    for (const auto& c : diag.undocumented_status_codes) {
        undoc_codes.push_back({{"operation", c.operation}, {"code", c.code}});
    }
    d["undocumented_status_codes"] = undoc_codes;
    ojson excluded = ojson::array();
    for (const auto& k : diag.excluded_status_keys) {
        excluded.push_back({{"operation", k.operation}, {"status_key", k.status_key}});
    }
    d["excluded_status_keys"] = excluded;
    d["request_wildcard_operations"] = diag.request_wildcard_operations;
    d["response_wildcard_operations"] = diag.response_wildcard_operations;
    j["diagnostics"] = d;

    return j.dump(2) + "\n";
}

CoverageReport report_from_json(std::string_view json_text) {
    ojson j;
    try {
        j = ojson::parse(json_text);
    } catch (const ojson::parse_error& e) {
        throw ParseError(std::string("report JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("restcov_report_version")) {
            throw ParseError("not a restcov report");
        }
        if (j["restcov_report_version"].get<int>() != kReportVersion) {
            throw ParseError("unsupported report version");
        }
        CoverageReport report;
        const ojson& metrics = j.at("metrics");
        report.path = metric_from_json(metrics.at("path"));
        report.operation = metric_from_json(metrics.at("operation"));
        report.parameter = metric_from_json(metrics.at("parameter"));
        report.parameter_value = metric_from_json(metrics.at("parameter_value"));
        report.request_content_type = metric_from_json(metrics.at("request_content_type"));
        report.status_code_class = metric_from_json(metrics.at("status_code_class"));
        report.status_code = metric_from_json(metrics.at("status_code"));
        report.response_content_type = metric_from_json(metrics.at("response_content_type"));

        for (const auto& entry : j.at("per_operation")) {
            report.per_operation.push_back(detail_from_json(entry));
        }

        const ojson& d = j.at("diagnostics");
        const ojson& unmatched = d.at("unmatched");
        report.diagnostics.unmatched_no_server_prefix = unmatched.at("no_server_prefix").get<std::int64_t>();
        report.diagnostics.unmatched_no_path = unmatched.at("no_path").get<std::int64_t>();
        report.diagnostics.unmatched_no_method = unmatched.at("no_method").get<std::int64_t>();
        for (const auto& p : d.at("undocumented_parameters")) {
            auto location = param_location_from_string(p.at("in").get<std::string>());
            if (!location) throw ParseError("unknown location in diagnostics");
            report.diagnostics.undocumented_parameters.push_back(
                {p.at("operation").get<std::string>(), *location, p.at("name").get<std::string>()});
        }
        for (const auto& c : d.at("undocumented_status_codes")) {
            report.diagnostics.undocumented_status_codes.push_back(
                {c.at("operation").get<std::string>(), c.at("code").get<int>()});
        }
        for (const auto& k : d.at("excluded_status_keys")) {
            report.diagnostics.excluded_status_keys.push_back(
                {k.at("operation").get<std::string>(), k.at("status_key").get<std::string>()});
        }
        report.diagnostics.request_wildcard_operations =
            d.at("request_wildcard_operations").get<std::vector<std::string>>();
        report.diagnostics.response_wildcard_operations =
            d.at("response_wildcard_operations").get<std::vector<std::string>>();
        return report;
    } catch (const ojson::exception& e) {
        throw ParseError(std::string("report JSON: ") + e.what());
    }
}

std::string render_csv(const CoverageReport& report) {
    std::ostringstream out;
    out << "metric,numerator,denominator,ratio,status,reason\n";
    for (const char* name : kMetricNames) {
        const MetricValue& value = *report.metric(name);
        if (value.computed) {
            out << name << ',' << value.numerator << ',' << value.denominator << ','
                << format_ratio(value.ratio(), 6) << ",computed,\n";
        } else {
            out << name << ",,,,not_computable," << csv_escape(value.reason) << "\n";
        }
    }
    out << "\noperation,kind,element,covered\n";
    for (const auto& detail : report.per_operation) {
        const std::string key = csv_escape(detail.key());
        for (const auto& p : detail.parameters) {
            out << key << ",parameter," << csv_escape(std::string(to_string(p.location)) + ":" + p.name)
                << ',' << (p.covered ? "true" : "false") << "\n";
        }
        for (const auto& v : detail.parameter_values) {
            out << key << ",parameter_value," << csv_escape(v.parameter + "=" + v.literal) << ','
                << (v.covered ? "true" : "false") << "\n";
        }
        for (const auto& c : detail.status_codes) {
            out << key << ",status_code," << c.code << ',' << (c.covered ? "true" : "false") << "\n";
        }
        for (const auto& m : detail.request_content_types) {
            out << key << ",request_content_type," << csv_escape(m.media_type) << ','
                << (m.covered ? "true" : "false") << "\n";
        }
        for (const auto& m : detail.response_content_types) {
            out << key << ",response_content_type," << csv_escape(m.media_type) << ','
                << (m.covered ? "true" : "false") << "\n";
        }
    }
    return out.str();
}

std::string render_table(const CoverageReport& report, bool color) {
    const char* reset = color ? "\x1b[0m" : "";
    auto paint = [&](double ratio) {
        if (!color) return "";
        if (ratio >= 1.0) return "\x1b[32m";
        if (ratio > 0.0) return "\x1b[33m";
        return "\x1b[31m";
    };

    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-24s %10s %9s\n", "metric", "covered", "ratio");
    out << line;
    out << std::string(45, '-') << "\n";
    for (const char* name : kMetricNames) {
        const MetricValue& value = *report.metric(name);
        if (value.computed) {
            std::string covered = std::to_string(value.numerator) + "/" + std::to_string(value.denominator);
            std::string pct = format_ratio(value.ratio() * 100.0, 1) + "%";
            std::snprintf(line, sizeof(line), "%-24s %10s %s%9s%s\n", name, covered.c_str(),
                          paint(value.ratio()), pct.c_str(), reset);
        } else {
            std::snprintf(line, sizeof(line), "%-24s        n/a (%s)\n", name, value.reason.c_str());
        }
        out << line;
    }

    std::int64_t matched = 0;
    for (const auto& detail : report.per_operation) matched += detail.matched_interactions;
    const Diagnostics& diag = report.diagnostics;
    out << "\nmatched interactions: " << matched << "\n";
    out << "unmatched: " << diag.unmatched_total() << " (no_server_prefix "
        << diag.unmatched_no_server_prefix << ", no_path " << diag.unmatched_no_path
        << ", no_method " << diag.unmatched_no_method << ")\n";
    if (!diag.undocumented_status_codes.empty()) {
        out << "undocumented status codes observed: " << diag.undocumented_status_codes.size() << "\n";
    }
    if (!diag.undocumented_parameters.empty()) {
        out << "undocumented parameters observed: " << diag.undocumented_parameters.size() << "\n";
    }
    if (!diag.request_wildcard_operations.empty() || !diag.response_wildcard_operations.empty()) {
        out << "wildcard content-type operations excluded: "
            << diag.request_wildcard_operations.size() + diag.response_wildcard_operations.size()
            << "\n";
    }
    return out.str();
}

std::string render(const CoverageReport& report, OutputFormat format, RenderOptions options) {
    switch (format) {
        case OutputFormat::Json: return render_json(report);
        case OutputFormat::Csv: return render_csv(report);
        case OutputFormat::Table: return render_table(report, options.color);
    }
    return render_json(report);
}

int threshold_exit_code(const CoverageReport& report,
                        const std::map<std::string, double>& thresholds) {
    for (const auto& [name, minimum] : thresholds) {
        const MetricValue* value = report.metric(name);
        if (value == nullptr) return 2;  // unknown names are caught at config parse time
        if (!value->computed || value->ratio() < minimum) return 2;
    }
    return 0;
}

namespace {

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error("cannot read file: " + path);
    return buffer.str();
}

bool ends_with_icase(const std::string& text, std::string_view suffix) {
    if (text.size() < suffix.size()) return false;
    return iequals(std::string_view(text).substr(text.size() - suffix.size()), suffix);
}

}  // namespace

InteractionLog read_log_file(const std::string& path) {
    std::string content = slurp_file(path);
    if (ends_with_icase(path, ".har")) return read_har(content, path);
    if (ends_with_icase(path, ".jsonl") || ends_with_icase(path, ".ndjson")) {
        return read_jsonl(content, path);
    }
    // content sniffing: a HAR is one JSON document carrying log.entries
    ojson parsed = ojson::parse(content, nullptr, false);
    if (parsed.is_object() && parsed.contains("log") && parsed["log"].is_object() &&
        parsed["log"].contains("entries")) {
        return read_har(content, path);
    }
    return read_jsonl(content, path);
}

int run_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
    for (const auto& [name, minimum] : config.thresholds) {
        if (CoverageReport{}.metric(name) == nullptr) {
            err << "error: unknown metric in threshold: " << name << "\n";
            return 1;
        }
        if (minimum < 0.0 || minimum > 1.0) {
            err << "error: threshold for " << name << " outside [0,1]\n";
            return 1;
        }
    }
    if (config.log_paths.empty()) {
        err << "error: at least one --log is required\n";
        return 1;
    }

    ApiModel model;
    InteractionLog log;
    try {
        model = load_spec(slurp_file(config.spec_path));
    } catch (const Error& e) {
        err << "error: " << config.spec_path << ": " << e.what() << "\n";
        return 1;
    }
    try {
        for (const auto& path : config.log_paths) {
            InteractionLog part = read_log_file(path);
            for (auto& interaction : part.interactions) {
                log.interactions.push_back(std::move(interaction));
            }
            for (auto& warning : part.warnings) {
                err << "warning: " << path << ": " << warning << "\n";
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    for (const auto& warning : model.warnings) {
        err << "warning: " << config.spec_path << ": " << warning << "\n";
    }

    MatchOutcome outcome = match_log(model, log);
    CoverageReport report = compute_report(model, outcome);
    std::string rendered = render(report, config.output_format, {config.color});

    if (config.output_path) {
        std::ofstream sink(*config.output_path, std::ios::binary);
        if (!sink) {
            err << "error: cannot write output file: " << *config.output_path << "\n";
            return 1;
        }
        sink << rendered;
    } else {
        out << rendered;
    }
    return threshold_exit_code(report, config.thresholds);
}

}  // namespace restcov
