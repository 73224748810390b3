#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "restcov/metrics.hpp"

namespace restcov {

enum class OutputFormat { Json, Csv, Table };

std::optional<OutputFormat> output_format_from_string(std::string_view name);

struct RenderOptions {
    bool color = false;  // table format only
};

/// Renders a report deterministically. JSON is the canonical machine format
/// and round-trips through report_from_json.
std::string render(const CoverageReport& report, OutputFormat format, RenderOptions options = {});

std::string render_json(const CoverageReport& report);
std::string render_csv(const CoverageReport& report);
std::string render_table(const CoverageReport& report, bool color = false);

/// Parses the JSON produced by render_json back into a structurally equal report.
/// Throws ParseError on malformed or version-incompatible input.
CoverageReport report_from_json(std::string_view json_text);

inline constexpr int kReportVersion = 1;

/// Exit code for a computed report under CI thresholds: 0 when every
/// thresholded metric is computed and >= its minimum, 2 otherwise.
int threshold_exit_code(const CoverageReport& report, const std::map<std::string, double>& thresholds);

struct RunConfig {
    std::string spec_path;
    std::vector<std::string> log_paths;  // HAR or JSONL, auto-detected
    OutputFormat output_format = OutputFormat::Table;
    std::optional<std::string> output_path;          // stdout when absent
    std::map<std::string, double> thresholds;        // metric name -> minimum ratio
    bool color = false;
};

/// Full pipeline: load spec, concatenate logs, match, compute, render.
/// Returns the process exit code (0 ok, 2 threshold failure); input errors
/// are reported on `err` and yield 1.
int run_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Reads a log file, sniffing HAR vs JSONL from the extension and content.
InteractionLog read_log_file(const std::string& path);

}  // namespace restcov
