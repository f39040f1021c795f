#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexaudit/corpus.hpp"
#include "lexaudit/lexicon.hpp"

namespace lexaudit {

struct Match {
  std::size_t entry_index = 0;  // into MatchSet::dictionary.entries
  std::string term;
  std::string pattern;
  GenderClass gender = GenderClass::neutral;
  Category category = Category::gendered_language;
  Partition partition = Partition::unpartitioned;
  std::string utterance_id;
  std::size_t token_index = 0;
  std::string surface;
  std::string matched_form;  // stem for gendered_language, norm otherwise
  bool ambiguous = false;

  bool operator==(const Match&) const = default;
};

/// Hits of one dictionary over one corpus. `dictionary` is the dictionary as
/// matched, i.e. after AVA removal or flagging.
struct MatchSet {
  std::string corpus_name;
  std::string dictionary_name;
  std::string profile_name;
  std::vector<std::string> exclusions;
  std::vector<Partition> partitions;  // every partition of the corpus
  Dictionary dictionary;
  std::vector<Match> matches;  // sorted by (utterance_id, token_index, entry_index)
};

struct AvaOption {
  std::vector<AvaEntry> entries;
  AvaMode mode = AvaMode::remove;
};

struct AuditOptions {
  std::optional<AvaOption> ava;
  std::vector<std::string> exclusions;  // literal tokens, compared on norms
  unsigned threads = 1;
  const StopWords* stopwords = nullptr;  // defaults to the shipped list
};

/// Throws ConfigError when a dictionary category cannot be matched under the
/// profile: pronouns need stop words kept, gendered language needs stems,
/// marked words and names need unstemmed norms.
void check_compatible(const Dictionary& d, const PipelineProfile& p);

/// {alexa, siri, olly} for names, nothing otherwise.
std::vector<std::string> default_exclusions(Category c);

MatchSet run_audit(const Corpus& c, const Dictionary& d, const PipelineProfile& p,
                   const AuditOptions& options = {});

struct DictShare {
  std::size_t matched_terms = 0;
  std::size_t total_terms = 0;
  double fraction = 0.0;

  bool operator==(const DictShare&) const = default;
};

/// Distinct entries of `d` with at least one match.
DictShare dict_share(const MatchSet& m, const Dictionary& d);
inline DictShare dict_share(const MatchSet& m) { return dict_share(m, m.dictionary); }

struct ReportRow {
  std::string label;  // "overall" or a partition name
  std::map<GenderClass, std::int64_t> frequencies;
  std::map<GenderClass, std::optional<double>> ratios;  // nullopt when the row is empty

  std::int64_t total() const;
  bool operator==(const ReportRow&) const = default;
};

/// rows[0] is the overall row; partition rows follow in label order.
struct AuditReport {
  std::string corpus_name;
  std::string dictionary_name;
  std::string profile_name;
  DictShare share;
  std::vector<GenderClass> genders;  // columns, in enum order
  std::vector<ReportRow> rows;
  std::int64_t total_instances = 0;

  const ReportRow& overall() const { return rows.front(); }
  bool operator==(const AuditReport&) const = default;
};

AuditReport frequency_table(const MatchSet& m);

struct TermCount {
  std::string term;
  GenderClass gender = GenderClass::neutral;
  std::int64_t frequency = 0;

  bool operator==(const TermCount&) const = default;
};

/// Descending frequency; ties by term, then gender.
std::vector<TermCount> top_terms(const MatchSet& m, std::size_t k);

using Table2x2 = std::array<std::array<std::int64_t, 2>, 2>;

/// Rows are the reports, columns the two genders, cells overall frequencies.
/// Throws ValidationError if a gender is missing or a report has no instances.
Table2x2 cross_table(const AuditReport& a, const AuditReport& b,
                     std::array<GenderClass, 2> genders = {GenderClass::masculine, GenderClass::feminine});

/// One JSON object per match: term, gender, category, corpus, partition,
/// utterance_id, index, ambiguous.
std::string matches_to_jsonl(const MatchSet& m);

}  // namespace lexaudit
