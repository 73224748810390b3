#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "restcov/matcher.hpp"
#include "restcov/spec_model.hpp"

namespace restcov {

/// A coverage ratio with exact numerator/denominator, or NotComputable with a
/// reason. Invariant when computed: 0 <= numerator <= denominator, denominator > 0.
struct MetricValue {
    bool computed = false;
    std::int64_t numerator = 0;
    std::int64_t denominator = 0;
    std::string reason;  // set iff not computed

    double ratio() const { return computed ? static_cast<double>(numerator) / static_cast<double>(denominator) : 0.0; }

    static MetricValue of(std::int64_t numerator, std::int64_t denominator);
    static MetricValue not_computable(std::string reason);

    bool operator==(const MetricValue&) const = default;
};

/// Canonical metric names, in report order.
inline constexpr const char* kMetricNames[] = {
    "path",
    "operation",
    "parameter",
    "parameter_value",
    "request_content_type",
    "status_code_class",
    "status_code",
    "response_content_type",
};

struct ParameterCoverageDetail {
    std::string name;
    ParamLocation location = ParamLocation::Query;
    bool covered = false;

    bool operator==(const ParameterCoverageDetail&) const = default;
};

struct ValueCoverageDetail {
    std::string parameter;
    std::string literal;
    bool covered = false;

    bool operator==(const ValueCoverageDetail&) const = default;
};

struct StatusCodeDetail {
    int code = 0;
    bool covered = false;

    bool operator==(const StatusCodeDetail&) const = default;
};

struct MediaTypeDetail {
    std::string media_type;
    bool covered = false;

    bool operator==(const MediaTypeDetail&) const = default;
};

/// Per-operation breakdown backing every denominator of the report.
struct OperationDetail {
    std::string path_template;
    HttpMethod method = HttpMethod::Get;
    std::optional<std::string> operation_id;
    std::int64_t matched_interactions = 0;
    std::vector<ParameterCoverageDetail> parameters;
    std::vector<ValueCoverageDetail> parameter_values;     // domain-limited params only
    std::vector<StatusCodeDetail> status_codes;            // numeric documented codes
    std::vector<std::string> excluded_status_keys;         // "default" and range keys
    std::vector<int> undocumented_status_codes;            // observed, not documented
    bool request_wildcard_excluded = false;
    std::vector<MediaTypeDetail> request_content_types;
    bool response_wildcard_excluded = false;
    std::vector<MediaTypeDetail> response_content_types;   // union over responses
    bool observed_correct = false;                         // any 2XX seen
    bool observed_erroneous = false;                       // any 4XX/5XX seen

    std::string key() const;

    bool operator==(const OperationDetail&) const = default;
};

struct UndocumentedParameterDiag {
    std::string operation;  // operation key, e.g. "GET /pets"
    ParamLocation location = ParamLocation::Query;
    std::string name;

    bool operator==(const UndocumentedParameterDiag&) const = default;
    auto operator<=>(const UndocumentedParameterDiag&) const = default;
};

struct UndocumentedStatusDiag {
    std::string operation;
    int code = 0;

    bool operator==(const UndocumentedStatusDiag&) const = default;
    auto operator<=>(const UndocumentedStatusDiag&) const = default;
};

/// A documented response key left out of the status-code denominator
/// ("default" or a range key such as "4XX").
struct ExcludedStatusKeyDiag {
    std::string operation;
    std::string status_key;

    bool operator==(const ExcludedStatusKeyDiag&) const = default;
    auto operator<=>(const ExcludedStatusKeyDiag&) const = default;
};

struct Diagnostics {
    std::int64_t unmatched_no_server_prefix = 0;
    std::int64_t unmatched_no_path = 0;
    std::int64_t unmatched_no_method = 0;
    std::vector<UndocumentedParameterDiag> undocumented_parameters;  // distinct, sorted
    std::vector<UndocumentedStatusDiag> undocumented_status_codes;   // distinct, sorted
    std::vector<ExcludedStatusKeyDiag> excluded_status_keys;         // distinct, sorted
    std::vector<std::string> request_wildcard_operations;            // excluded from the metric
    std::vector<std::string> response_wildcard_operations;

    std::int64_t unmatched_total() const {
        return unmatched_no_server_prefix + unmatched_no_path + unmatched_no_method;
    }

    bool operator==(const Diagnostics&) const = default;
};

/// The eight metric values plus per-operation breakdowns and diagnostics.
struct CoverageReport {
    MetricValue path;
    MetricValue operation;
    MetricValue parameter;
    MetricValue parameter_value;
    MetricValue request_content_type;
    MetricValue status_code_class;
    MetricValue status_code;
    MetricValue response_content_type;
    std::vector<OperationDetail> per_operation;  // sorted by (path, method)
    Diagnostics diagnostics;

    const MetricValue* metric(std::string_view name) const;

    bool operator==(const CoverageReport&) const = default;
};

MetricValue path_coverage(const ApiModel& model, const MatchOutcome& outcome);
MetricValue operation_coverage(const ApiModel& model, const MatchOutcome& outcome);
MetricValue parameter_coverage(const ApiModel& model, const MatchOutcome& outcome);
MetricValue parameter_value_coverage(const ApiModel& model, const MatchOutcome& outcome);
MetricValue request_content_type_coverage(const ApiModel& model, const MatchOutcome& outcome);
MetricValue status_code_class_coverage(const MatchOutcome& outcome);
MetricValue status_code_coverage(const ApiModel& model, const MatchOutcome& outcome);
MetricValue response_content_type_coverage(const ApiModel& model, const MatchOutcome& outcome);

/// Assembles all eight metrics, per-operation detail and diagnostics.
/// Deterministic for identical inputs.
CoverageReport compute_report(const ApiModel& model, const MatchOutcome& outcome);

}  // namespace restcov
