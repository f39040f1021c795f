#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lexaudit/audit.hpp"
#include "lexaudit/stats.hpp"

namespace lexaudit {

enum class Format { markdown, csv, json };

std::string_view to_string(Format f) noexcept;
/// "markdown" (or "md"), "csv", "json".
Format parse_format(std::string_view s);
/// "md", "csv", "json".
std::string_view extension(Format f) noexcept;

// Cell formatting. Ratios and p-values drop the leading zero (".541").

/// Three decimals; empty for a missing ratio.
std::string format_ratio(std::optional<double> r);
/// "51/209 (24.4%)"
std::string format_share(const DictShare& s);
/// Two decimals.
std::string format_statistic(double x);
/// Three decimals, or "<.001".
std::string format_p(double p);

/// Short column label: "Masc.", "Fem.", "Neut.", "Neo", "Other".
std::string_view column_label(GenderClass g) noexcept;

/// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(std::string_view s);

nlohmann::json to_json(const AuditReport& r);
/// Inverse of to_json; throws ParseError on a malformed document.
AuditReport audit_report_from_json(const nlohmann::json& j);

/// Columns: Dictionary, Dict. Share, Total Instances, Partition, one frequency
/// column per gender, one ratio column per gender. One row per report row.
std::string render_audit(const AuditReport& r, Format fmt);

struct LabeledChi2 {
  std::string label;
  Chi2Result result;
};

/// One row per test: label, statistic, df, p.
std::string render_chi2(std::span<const LabeledChi2> results, Format fmt);

/// Rank, term, gender, frequency.
std::string render_top_terms(std::span<const TermCount> terms, Format fmt);

struct ReportSection {
  std::string kind;       // "audit", "chi2", "top_terms"
  std::string source_id;  // e.g. the report's file stem
  std::string body;       // already rendered in the document format
};

struct ReportDocument {
  std::string title;
  Format format = Format::markdown;
  std::vector<ReportSection> sections;
};

/// Markdown: headed sections. CSV: sections separated by a blank line.
/// JSON: {"title", "sections": [{"kind", "source", "body"}]} where body is
/// parsed JSON.
std::string render(const ReportDocument& doc);

/// <corpus>_<dictionary>_<profile>.<ext>, with characters outside
/// [A-Za-z0-9._-] replaced by '-'.
std::string output_filename(const AuditReport& r, Format fmt);

}  // namespace lexaudit
