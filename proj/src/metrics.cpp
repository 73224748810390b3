#include "restcov/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>

namespace restcov {

MetricValue MetricValue::of(std::int64_t numerator, std::int64_t denominator) {
    assert(denominator > 0 && numerator >= 0 && numerator <= denominator);
    MetricValue v;
    v.computed = true;
    v.numerator = numerator;
    v.denominator = denominator;
    return v;
}

MetricValue MetricValue::not_computable(std::string reason) {
    MetricValue v;
    v.computed = false;
    v.reason = std::move(reason);
    return v;
}

std::string OperationDetail::key() const {
    return std::string(to_string(method)) + " " + path_template;
}

const MetricValue* CoverageReport::metric(std::string_view name) const {
    if (name == "path") return &path;
    if (name == "operation") return &operation;
    if (name == "parameter") return &parameter;
    if (name == "parameter_value") return &parameter_value;
    if (name == "request_content_type") return &request_content_type;
    if (name == "status_code_class") return &status_code_class;
    if (name == "status_code") return &status_code;
    if (name == "response_content_type") return &response_content_type;
    return nullptr;
}

namespace {

// Everything observed against one operation, pooled over the matched log.
struct OpObserved {
    std::int64_t matched_count = 0;
    std::set<std::pair<std::string, ParamLocation>> params_supplied;
    // (name, location) -> raw values seen
    std::map<std::pair<std::string, ParamLocation>, std::set<std::string>> param_values;
    std::set<std::string> request_media_types;
    std::set<std::string> response_media_types;
    std::set<int> statuses;
    bool correct = false;
    bool erroneous = false;
    std::set<UndocumentedInput> undocumented;
};

struct Observed {
    std::vector<OpObserved> per_op;  // parallel to model.operations
    bool any_correct = false;
    bool any_erroneous = false;

    explicit Observed(const ApiModel& model, const MatchOutcome& outcome)
        : per_op(model.operations.size()) {
        std::map<const OperationSpec*, std::size_t> index_of;
        std::map<std::string, std::size_t> index_by_key;
        for (std::size_t i = 0; i < model.operations.size(); ++i) {
            index_of[&model.operations[i]] = i;
            index_by_key[model.operations[i].key()] = i;
        }
        for (const auto& m : outcome.matched) {
            std::size_t index;
            if (auto it = index_of.find(m.operation); it != index_of.end()) {
                index = it->second;
            } else if (auto keyed = index_by_key.find(m.operation->key());
                       keyed != index_by_key.end()) {
                // outcome was computed against an equal copy of the model
                index = keyed->second;
            } else {
                throw std::invalid_argument("MatchOutcome does not belong to this ApiModel");
            }
            OpObserved& obs = per_op[index];
            ++obs.matched_count;
            for (const auto& o : m.observed_params) {
                auto key = std::make_pair(o.spec->name, o.spec->location);
                obs.params_supplied.insert(key);
                obs.param_values[key].insert(o.raw_value);
            }
            for (const auto& u : m.undocumented_params) obs.undocumented.insert(u);
            if (m.request_media_type) obs.request_media_types.insert(*m.request_media_type);
            if (m.response_media_type) obs.response_media_types.insert(*m.response_media_type);
            obs.statuses.insert(m.interaction->status);
            switch (m.status_class) {
                case StatusClass::Correct:
                    obs.correct = true;
                    any_correct = true;
                    break;
                case StatusClass::Erroneous:
                    obs.erroneous = true;
                    any_erroneous = true;
                    break;
                case StatusClass::Other: break;
            }
        }
    }
};

std::optional<int> numeric_status_key(const std::string& key) {
    if (key.size() != 3) return std::nullopt;
    for (char c : key) {
        if (std::isdigit(static_cast<unsigned char>(c)) == 0) return std::nullopt;
    }
    return (key[0] - '0') * 100 + (key[1] - '0') * 10 + (key[2] - '0');
}

// Documented numeric codes of an operation, deduplicated, in document order.
std::vector<int> documented_codes(const OperationSpec& op) {
    std::vector<int> codes;
    for (const auto& response : op.responses) {
        if (auto code = numeric_status_key(response.status_key)) {
            if (std::find(codes.begin(), codes.end(), *code) == codes.end()) codes.push_back(*code);
        }
    }
    return codes;
}

// Union of response media types across all documented responses.
MediaTypeSet response_media_union(const OperationSpec& op) {
    MediaTypeSet out;
    for (const auto& response : op.responses) {
        for (const auto& mt : response.media_types.media_types) {
            if (std::find(out.media_types.begin(), out.media_types.end(), mt) ==
                out.media_types.end()) {
                out.media_types.push_back(mt);
            }
        }
        out.has_wildcard = out.has_wildcard || response.media_types.has_wildcard;
    }
    return out;
}

// Textual comparison after canonicalization: boolean domains compare
// case-folded, enum literals are already minimal JSON text.
bool value_covers(const ValueDomain& domain, const std::set<std::string>& observed,
                  const std::string& literal) {
    if (domain.kind == DomainKind::Boolean) {
        return std::any_of(observed.begin(), observed.end(),
                           [&](const std::string& v) { return to_lower(v) == literal; });
    }
    return observed.count(literal) > 0;
}

}  // namespace

MetricValue path_coverage(const ApiModel& model, const MatchOutcome& outcome) {
    Observed observed(model, outcome);
    std::set<std::string> all;
    std::set<std::string> hit;
    for (std::size_t i = 0; i < model.operations.size(); ++i) {
        all.insert(model.operations[i].path_template);
        if (observed.per_op[i].matched_count > 0) hit.insert(model.operations[i].path_template);
    }
    if (all.empty()) return MetricValue::not_computable("no documented paths");
    return MetricValue::of(static_cast<std::int64_t>(hit.size()), static_cast<std::int64_t>(all.size()));
}

MetricValue operation_coverage(const ApiModel& model, const MatchOutcome& outcome) {
    Observed observed(model, outcome);
    if (model.operations.empty()) return MetricValue::not_computable("no documented operations");
    std::int64_t hit = 0;
    for (const auto& obs : observed.per_op) {
        if (obs.matched_count > 0) ++hit;
    }
    return MetricValue::of(hit, static_cast<std::int64_t>(model.operations.size()));
}

MetricValue parameter_coverage(const ApiModel& model, const MatchOutcome& outcome) {
    Observed observed(model, outcome);
    std::int64_t total = 0;
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < model.operations.size(); ++i) {
        for (const auto& param : model.operations[i].parameters) {
            ++total;
            if (observed.per_op[i].params_supplied.count({param.name, param.location}) > 0) ++covered;
        }
    }
    if (total == 0) return MetricValue::not_computable("no documented parameters");
    return MetricValue::of(covered, total);
}

MetricValue parameter_value_coverage(const ApiModel& model, const MatchOutcome& outcome) {
    Observed observed(model, outcome);
    std::int64_t total = 0;
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < model.operations.size(); ++i) {
        for (const auto& param : model.operations[i].parameters) {
            if (!param.domain.domain_limited()) continue;
            auto values = observed.per_op[i].param_values.find({param.name, param.location});
            static const std::set<std::string> kEmpty;
            const auto& seen = values == observed.per_op[i].param_values.end() ? kEmpty : values->second;
            for (const auto& literal : param.domain.literals) {
                ++total;
                if (value_covers(param.domain, seen, literal)) ++covered;
            }
        }
    }
    if (total == 0) return MetricValue::not_computable("no domain-limited parameters");
    return MetricValue::of(covered, total);
}

MetricValue request_content_type_coverage(const ApiModel& model, const MatchOutcome& outcome) {
    Observed observed(model, outcome);
    std::int64_t total = 0;
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < model.operations.size(); ++i) {
        const auto& set = model.operations[i].request_media_types;
        if (set.empty() || set.has_wildcard) continue;
        for (const auto& mt : set.media_types) {
            ++total;
            if (observed.per_op[i].request_media_types.count(mt) > 0) ++covered;
        }
    }
    if (total == 0) {
        return MetricValue::not_computable("no operations with wildcard-free request content-types");
    }
    return MetricValue::of(covered, total);
}

MetricValue status_code_class_coverage(const MatchOutcome& outcome) {
    bool correct = false;
    bool erroneous = false;
    for (const auto& m : outcome.matched) {
        if (m.status_class == StatusClass::Correct) correct = true;
        if (m.status_class == StatusClass::Erroneous) erroneous = true;
    }
    return MetricValue::of((correct ? 1 : 0) + (erroneous ? 1 : 0), 2);
}

MetricValue status_code_coverage(const ApiModel& model, const MatchOutcome& outcome) {
    Observed observed(model, outcome);
    std::int64_t total = 0;
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < model.operations.size(); ++i) {
        for (int code : documented_codes(model.operations[i])) {
            ++total;
            if (observed.per_op[i].statuses.count(code) > 0) ++covered;
        }
    }
    if (total == 0) {
        return MetricValue::not_computable("no operations documenting numeric status codes");
    }
    return MetricValue::of(covered, total);
}

MetricValue response_content_type_coverage(const ApiModel& model, const MatchOutcome& outcome) {
    Observed observed(model, outcome);
    std::int64_t total = 0;
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < model.operations.size(); ++i) {
        MediaTypeSet set = response_media_union(model.operations[i]);
        if (set.empty() || set.has_wildcard) continue;
        for (const auto& mt : set.media_types) {
            ++total;
            if (observed.per_op[i].response_media_types.count(mt) > 0) ++covered;
        }
    }
    if (total == 0) {
        return MetricValue::not_computable("no operations with wildcard-free response content-types");
    }
    return MetricValue::of(covered, total);
}

CoverageReport compute_report(const ApiModel& model, const MatchOutcome& outcome) {
    Observed observed(model, outcome);
    CoverageReport report;
    report.path = path_coverage(model, outcome);
    report.operation = operation_coverage(model, outcome);
    report.parameter = parameter_coverage(model, outcome);
    report.parameter_value = parameter_value_coverage(model, outcome);
    report.request_content_type = request_content_type_coverage(model, outcome);
    report.status_code_class = status_code_class_coverage(outcome);
    report.status_code = status_code_coverage(model, outcome);
    report.response_content_type = response_content_type_coverage(model, outcome);

    for (const auto& u : outcome.unmatched) {
        switch (u.reason) {
            case UnmatchedReason::NoServerPrefix: ++report.diagnostics.unmatched_no_server_prefix; break;
            case UnmatchedReason::NoPath: ++report.diagnostics.unmatched_no_path; break;
            case UnmatchedReason::NoMethod: ++report.diagnostics.unmatched_no_method; break;
        }
    }

    std::vector<std::size_t> order(model.operations.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& oa = model.operations[a];
        const auto& ob = model.operations[b];
        if (oa.path_template != ob.path_template) return oa.path_template < ob.path_template;
        return to_string(oa.method) < to_string(ob.method);
    });

    for (std::size_t i : order) {
        const OperationSpec& op = model.operations[i];
        const OpObserved& obs = observed.per_op[i];
        OperationDetail detail;
        detail.path_template = op.path_template;
        detail.method = op.method;
        detail.operation_id = op.operation_id;
        detail.matched_interactions = obs.matched_count;
        detail.observed_correct = obs.correct;
        detail.observed_erroneous = obs.erroneous;

        for (const auto& param : op.parameters) {
            bool covered = obs.params_supplied.count({param.name, param.location}) > 0;
            detail.parameters.push_back({param.name, param.location, covered});
            if (param.domain.domain_limited()) {
                auto values = obs.param_values.find({param.name, param.location});
                static const std::set<std::string> kEmpty;
                const auto& seen = values == obs.param_values.end() ? kEmpty : values->second;
                for (const auto& literal : param.domain.literals) {
                    detail.parameter_values.push_back(
                        {param.name, literal, value_covers(param.domain, seen, literal)});
                }
            }
        }

        std::vector<int> codes = documented_codes(op);
        for (int code : codes) {
            detail.status_codes.push_back({code, obs.statuses.count(code) > 0});
        }
        for (const auto& response : op.responses) {
            if (!numeric_status_key(response.status_key)) {
                if (std::find(detail.excluded_status_keys.begin(), detail.excluded_status_keys.end(),
                              response.status_key) == detail.excluded_status_keys.end()) {
                    detail.excluded_status_keys.push_back(response.status_key);
                    report.diagnostics.excluded_status_keys.push_back({op.key(), response.status_key});
                }
            }
        }
        for (int status : obs.statuses) {
            if (std::find(codes.begin(), codes.end(), status) == codes.end()) {
                detail.undocumented_status_codes.push_back(status);
                report.diagnostics.undocumented_status_codes.push_back({op.key(), status});
            }
        }

        const auto& request_set = op.request_media_types;
        detail.request_wildcard_excluded = !request_set.empty() && request_set.has_wildcard;
        if (detail.request_wildcard_excluded) {
            report.diagnostics.request_wildcard_operations.push_back(op.key());
        }
        for (const auto& mt : request_set.media_types) {
            detail.request_content_types.push_back({mt, obs.request_media_types.count(mt) > 0});
        }

        MediaTypeSet response_set = response_media_union(op);
        detail.response_wildcard_excluded = !response_set.empty() && response_set.has_wildcard;
        if (detail.response_wildcard_excluded) {
            report.diagnostics.response_wildcard_operations.push_back(op.key());
        }
        for (const auto& mt : response_set.media_types) {
            detail.response_content_types.push_back({mt, obs.response_media_types.count(mt) > 0});
        }

        for (const auto& u : obs.undocumented) {
            report.diagnostics.undocumented_parameters.push_back({op.key(), u.location, u.name});
        }

        report.per_operation.push_back(std::move(detail));
    }

    std::sort(report.diagnostics.undocumented_parameters.begin(),
              report.diagnostics.undocumented_parameters.end());
    std::sort(report.diagnostics.undocumented_status_codes.begin(),
              report.diagnostics.undocumented_status_codes.end());
    std::sort(report.diagnostics.excluded_status_keys.begin(),
              report.diagnostics.excluded_status_keys.end());
    return report;
}

}  // namespace restcov
