#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "restcov/spec_model.hpp"
#include "restcov/traffic_log.hpp"

namespace restcov {

enum class StatusClass { Correct, Erroneous, Other };

std::string_view to_string(StatusClass cls);

/// 2XX -> Correct, 4XX/5XX -> Erroneous, anything else -> Other.
StatusClass classify_status(int status);

enum class UnmatchedReason { NoServerPrefix, NoPath, NoMethod };

std::string_view to_string(UnmatchedReason reason);

/// One supplied occurrence of a documented parameter. Query and path values
/// are percent-decoded; header and cookie values are verbatim.
struct ParameterObservation {
    const ParameterSpec* spec = nullptr;
    std::string raw_value;
};

/// An input present on the wire but not declared by the matched operation.
struct UndocumentedInput {
    ParamLocation location = ParamLocation::Query;
    std::string name;

    bool operator==(const UndocumentedInput&) const = default;
    auto operator<=>(const UndocumentedInput&) const = default;
};

struct MatchedInteraction {
    const Interaction* interaction = nullptr;
    const OperationSpec* operation = nullptr;
    std::map<std::string, std::string> path_values;  // variable -> raw (undecoded) segment
    std::vector<ParameterObservation> observed_params;
    std::vector<UndocumentedInput> undocumented_params;
    std::optional<std::string> request_media_type;   // normalized "type/subtype"
    std::optional<std::string> response_media_type;
    StatusClass status_class = StatusClass::Other;
};

struct UnmatchedInteraction {
    const Interaction* interaction = nullptr;
    UnmatchedReason reason = UnmatchedReason::NoPath;
};

/// Partition of an input log: |matched| + |unmatched| == |log|.
/// Holds pointers into the ApiModel and InteractionLog it was computed from;
/// both must outlive the outcome.
struct MatchOutcome {
    std::vector<MatchedInteraction> matched;
    std::vector<UnmatchedInteraction> unmatched;
};

struct PathMatch {
    const OperationSpec* operation = nullptr;
    std::map<std::string, std::string> path_values;
};

/// Binds (method, url) to the operation it exercised. The longest server
/// base-URL path prefix is stripped (hosts are ignored so proxy-rewritten
/// logs still match); templates are matched segment-by-segment; when several
/// templates match, the most concrete one wins, ties broken by lexicographic
/// template order.
std::variant<PathMatch, UnmatchedReason>
match_operation(const ApiModel& model, HttpMethod method, std::string_view url);

/// Observations for the documented parameters of `op` supplied by
/// `interaction`. Undocumented inputs are appended to `undocumented`
/// when given (plumbing headers such as Host are not reported).
std::vector<ParameterObservation>
extract_parameters(const OperationSpec& op, const Interaction& interaction,
                   const std::map<std::string, std::string>& path_values,
                   std::vector<UndocumentedInput>* undocumented = nullptr);

/// Normalized media type of the first Content-Type header, if any.
std::optional<std::string> media_type_of(const Headers& headers);

/// Matches every interaction of the log. Pure; failures are data, not errors.
MatchOutcome match_log(const ApiModel& model, const InteractionLog& log);

}  // namespace restcov
