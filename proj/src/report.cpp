#include "lexaudit/report.hpp"

#include <cmath>
#include <cstdio>

#include "lexaudit/error.hpp"

namespace lexaudit {

using nlohmann::json;

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::markdown: return "markdown";
    case Format::csv: return "csv";
    case Format::json: return "json";
  }
  return "markdown";
}

Format parse_format(std::string_view s) {
  if (s == "markdown" || s == "md") return Format::markdown;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ValidationError("unknown output format '" + std::string(s) + "'", "format");
}

std::string_view extension(Format f) noexcept {
  switch (f) {
    case Format::markdown: return "md";
    case Format::csv: return "csv";
    case Format::json: return "json";
  }
  return "md";
}

namespace {

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s = buf;
  if (s == "-0.00" || s == "-0.000") s.erase(0, 1);
  return s;
}

std::string drop_leading_zero(std::string s) {
  if (s.size() > 1 && s[0] == '0' && s[1] == '.') s.erase(0, 1);
  return s;
}

}  // namespace

std::string format_ratio(std::optional<double> r) {
  if (!r) return {};
  return drop_leading_zero(fixed(*r, 3));
}

std::string format_share(const DictShare& s) {
  return std::to_string(s.matched_terms) + "/" + std::to_string(s.total_terms) + " (" + fixed(100.0 * s.fraction, 1) +
         "%)";
}

std::string format_statistic(double x) { return fixed(x, 2); }

std::string format_p(double p) {
  if (p < 0.001) return "<.001";
  return drop_leading_zero(fixed(p, 3));
}

std::string_view column_label(GenderClass g) noexcept {
  switch (g) {
    case GenderClass::masculine: return "Masc.";
    case GenderClass::feminine: return "Fem.";
    case GenderClass::neutral: return "Neut.";
    case GenderClass::neo: return "Neo";
    case GenderClass::other: return "Other";
  }
  return "Other";
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const AuditReport& r) {
  json genders = json::array();
  for (GenderClass g : r.genders) genders.push_back(std::string(to_string(g)));
  json rows = json::array();
  for (const auto& row : r.rows) {
    json freq = json::object(), ratio = json::object();
    for (const auto& [g, f] : row.frequencies) freq[std::string(to_string(g))] = f;
    for (const auto& [g, x] : row.ratios) ratio[std::string(to_string(g))] = x ? json(*x) : json(nullptr);
    rows.push_back({{"label", row.label}, {"frequencies", freq}, {"ratios", ratio}});
  }
  return json{{"corpus", r.corpus_name},
              {"dictionary", r.dictionary_name},
              {"profile", r.profile_name},
              {"share",
               {{"matched_terms", r.share.matched_terms},
                {"total_terms", r.share.total_terms},
                {"fraction", r.share.fraction}}},
              {"genders", genders},
              {"rows", rows},
              {"total_instances", r.total_instances}};
}

AuditReport audit_report_from_json(const json& j) {
  try {
    AuditReport r;
    r.corpus_name = j.at("corpus").get<std::string>();
    r.dictionary_name = j.at("dictionary").get<std::string>();
    r.profile_name = j.at("profile").get<std::string>();
    const auto& s = j.at("share");
    r.share = {s.at("matched_terms").get<std::size_t>(), s.at("total_terms").get<std::size_t>(),
               s.at("fraction").get<double>()};
    for (const auto& g : j.at("genders")) r.genders.push_back(parse_gender(g.get<std::string>()));
    for (const auto& row : j.at("rows")) {
      ReportRow out;
      out.label = row.at("label").get<std::string>();
      for (const auto& [g, f] : row.at("frequencies").items()) out.frequencies[parse_gender(g)] = f.get<std::int64_t>();
      for (const auto& [g, x] : row.at("ratios").items())
        out.ratios[parse_gender(g)] = x.is_null() ? std::nullopt : std::optional<double>(x.get<double>());
      r.rows.push_back(std::move(out));
    }
    r.total_instances = j.at("total_instances").get<std::int64_t>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed audit report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Tables

namespace {

using Table = std::vector<std::vector<std::string>>;  // header first

std::string markdown_table(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    out += '|';
    for (const auto& c : cells) out += ' ' + c + " |";
    out += '\n';
  };
  line(t.front());
  out += '|';
  for (std::size_t i = 0; i < t.front().size(); ++i) out += " --- |";
  out += '\n';
  for (std::size_t i = 1; i < t.size(); ++i) line(t[i]);
  return out;
}

std::string csv_table(const Table& t) {
  std::string out;
  for (const auto& row : t) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

std::string emit(const Table& t, Format fmt) { return fmt == Format::csv ? csv_table(t) : markdown_table(t); }

}  // namespace

std::string render_audit(const AuditReport& r, Format fmt) {
  if (fmt == Format::json) return to_json(r).dump(2) + "\n";

  Table t;
  std::vector<std::string> header{"Dictionary", "Dict. Share", "Total Instances", "Partition"};
  for (GenderClass g : r.genders) header.push_back(std::string(column_label(g)) + " Freq.");
  for (GenderClass g : r.genders) header.push_back(std::string(column_label(g)) + " Ratio");
  t.push_back(std::move(header));

  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    // Markdown names the dictionary once per block, as printed tables do.
    const bool lead = i == 0 || fmt == Format::csv;
    std::vector<std::string> cells{lead ? r.dictionary_name : "", lead ? format_share(r.share) : "",
                                   lead ? std::to_string(r.total_instances) : "", row.label};
    for (GenderClass g : r.genders) {
      auto it = row.frequencies.find(g);
      cells.push_back(std::to_string(it == row.frequencies.end() ? 0 : it->second));
    }
    for (GenderClass g : r.genders) {
      auto it = row.ratios.find(g);
      cells.push_back(format_ratio(it == row.ratios.end() ? std::nullopt : it->second));
    }
    t.push_back(std::move(cells));
  }
  return emit(t, fmt);
}

std::string render_chi2(std::span<const LabeledChi2> results, Format fmt) {
  if (fmt == Format::json) {
    json out = json::array();
    for (const auto& [label, r] : results)
      out.push_back({{"label", label}, {"statistic", r.statistic}, {"df", r.df}, {"p", r.p}, {"yates", r.corrected}});
    return out.dump(2) + "\n";
  }
  Table t{{"Test", "Chi2", "df", "p"}};
  for (const auto& [label, r] : results)
    t.push_back({label, format_statistic(r.statistic), std::to_string(r.df), format_p(r.p)});
  return emit(t, fmt);
}

std::string render_top_terms(std::span<const TermCount> terms, Format fmt) {
  if (fmt == Format::json) {
    json out = json::array();
    for (const auto& t : terms)
      out.push_back({{"term", t.term}, {"gender", std::string(to_string(t.gender))}, {"frequency", t.frequency}});
    return out.dump(2) + "\n";
  }
  Table t{{"Rank", "Term", "Gender", "Frequency"}};
  for (std::size_t i = 0; i < terms.size(); ++i)
    t.push_back({std::to_string(i + 1), terms[i].term, std::string(to_string(terms[i].gender)),
                 std::to_string(terms[i].frequency)});
  return emit(t, fmt);
}

std::string render(const ReportDocument& doc) {
  switch (doc.format) {
    case Format::json: {
      json sections = json::array();
      for (const auto& s : doc.sections) {
        json body;
        try {
          body = json::parse(s.body);
        } catch (const json::parse_error&) {
          body = s.body;
        }
        sections.push_back({{"kind", s.kind}, {"source", s.source_id}, {"body", body}});
      }
      return json{{"title", doc.title}, {"sections", sections}}.dump(2) + "\n";
    }
    case Format::csv: {
      std::string out;
      for (std::size_t i = 0; i < doc.sections.size(); ++i) {
        if (i) out += "\r\n";
        out += doc.sections[i].body;
      }
      return out;
    }
    case Format::markdown: break;
  }
  std::string out = "# " + doc.title + "\n";
  for (const auto& s : doc.sections) out += "\n## " + s.source_id + " (" + s.kind + ")\n\n" + s.body;
  return out;
}

std::string output_filename(const AuditReport& r, Format fmt) {
  std::string name = r.corpus_name + "_" + r.dictionary_name + "_" + r.profile_name;
  for (char& c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
    if (!ok) c = '-';
  }
  return name + "." + std::string(extension(fmt));
}

}  // namespace lexaudit
