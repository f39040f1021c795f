#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexaudit/corpus.hpp"

namespace lexaudit {

enum class GenderClass { masculine, feminine, neutral, neo, other };

inline constexpr GenderClass kAllGenders[] = {GenderClass::masculine, GenderClass::feminine,
                                              GenderClass::neutral, GenderClass::neo,
                                              GenderClass::other};

std::string_view to_string(GenderClass g) noexcept;
/// "m", "f", "n", "o"; neo has no single-letter code and renders as "neo".
std::string_view gender_code(GenderClass g) noexcept;
/// Accepts the one-letter codes and "neo". Throws ValidationError naming the code.
GenderClass parse_gender_code(std::string_view code);
/// Accepts full names ("masculine") and the one-letter codes.
GenderClass parse_gender(std::string_view s);

enum class Category { gendered_language, pronoun, marked_word, name };

std::string_view to_string(Category c) noexcept;
Category parse_category(std::string_view s);

struct DictEntry {
  std::string pattern;  // normalized glob, the form matched against tokens
  std::string term;     // as written in the source
  GenderClass gender = GenderClass::neutral;
  Category category = Category::gendered_language;
  std::string source_id;
  std::optional<double> score;  // 1..7, scored sources only
  bool ambiguous = false;       // set by AVA flag mode

  bool operator==(const DictEntry&) const = default;
};

struct DictionaryMetadata {
  std::string year;
  std::string gendering;
  std::string word_sources;
  std::string categorization;
  std::vector<std::string> sources;

  bool operator==(const DictionaryMetadata&) const = default;
};

/// Entries are unique on (pattern, gender).
struct Dictionary {
  std::string name;
  std::vector<DictEntry> entries;
  DictionaryMetadata metadata;

  std::size_t total() const noexcept { return entries.size(); }
  bool contains(std::string_view pattern, GenderClass g) const;
  /// Distinct categories present, in enum order.
  std::vector<Category> categories() const;
};

enum class DictFormat { categorical_list, scored_csv, gender_tag_json, ava_jsonl, pronoun_lists, name_lists };

std::string_view to_string(DictFormat f) noexcept;
DictFormat parse_dict_format(std::string_view s);

/// Dictionary-side normalization: lowercase, and for gendered_language also
/// Porter2-stem literal patterns. Returns an empty string for gendered_language
/// patterns that are stop words (they are dropped).
std::string normalize_pattern(std::string_view term, Category category,
                              const StopWords& stopwords = StopWords::snowball_english());

struct LoadOptions {
  std::string name;       // defaults to the file stem
  std::string source_id;  // defaults to the name
  std::optional<Category> category;  // overrides the format default
  DictionaryMetadata metadata;
  const StopWords* stopwords = nullptr;  // defaults to the shipped list
};

struct LoadResult {
  Dictionary dictionary;
  std::size_t duplicates = 0;  // records collapsed onto an existing (pattern, gender)
  std::size_t rejected = 0;    // multi-word records and stop-word patterns
};

/// scored_csv files load with their scores and gender `neutral`; classify
/// them with apply_threshold.
LoadResult parse_dictionary(std::istream& in, DictFormat format, LoadOptions options = {});
LoadResult load_dictionary(const std::filesystem::path& path, DictFormat format, LoadOptions options = {});

// ---------------------------------------------------------------------------
// Scored dictionaries

struct ScoredWord {
  std::string word;
  double score = 4.0;
};

/// `word,score` with a header row; scores in [1,7].
std::vector<ScoredWord> parse_scored_csv(std::istream& in);

struct ThresholdPolicy {
  std::string name;
  double fem_bound = 3.0;
  bool fem_inclusive = true;
  double masc_bound = 5.0;
  bool masc_inclusive = true;

  /// fem <= 3, masc >= 5
  static ThresholdPolicy loose();
  /// fem < 2.5, masc > 5.5
  static ThresholdPolicy conservative();

  std::optional<GenderClass> classify(double score) const;
};

ThresholdPolicy threshold_by_name(std::string_view name);

/// Classifies, then normalizes (lowercase, stem, drop stop words, dedup).
/// Throws ValidationError for scores outside [1,7].
Dictionary apply_threshold(std::span<const ScoredWord> scored, const ThresholdPolicy& policy,
                           std::string source_id = "scored",
                           const StopWords& stopwords = StopWords::snowball_english());
Dictionary apply_threshold(const Dictionary& scored, const ThresholdPolicy& policy,
                           const StopWords& stopwords = StopWords::snowball_english());

/// Union keyed on (pattern, gender); the first occurrence of a key wins and
/// an entry flagged ambiguous in any input stays flagged.
Dictionary merge(std::span<const Dictionary> dicts);

// ---------------------------------------------------------------------------
// AVA

struct AvaEntry {
  std::string term;
  GenderClass original_gender = GenderClass::masculine;  // masculine or feminine
  std::map<std::string, std::string> examples;           // corpus name -> snippet
  bool decided_ambiguous = true;
  std::optional<std::string> rationale;

  bool operator==(const AvaEntry&) const = default;
};

/// One JSON object per line: {"term", "gender": "m"|"f", "examples": {...}}
/// plus an optional "rationale".
std::vector<AvaEntry> parse_ava_jsonl(std::istream& in);
std::vector<AvaEntry> load_ava(const std::filesystem::path& path);
std::string to_json_line(const AvaEntry& e);
std::string to_jsonl(std::span<const AvaEntry> entries);

/// Problems found checking AVA entries against their source dictionaries
/// (term must occur in at least one gendered-language source). Empty when valid.
std::vector<std::string> validate_ava(std::span<const AvaEntry> entries,
                                      std::span<const Dictionary> sources,
                                      const StopWords& stopwords = StopWords::snowball_english());

enum class AvaMode { remove, flag };

std::string_view to_string(AvaMode m) noexcept;
AvaMode parse_ava_mode(std::string_view s);

struct SubtractResult {
  Dictionary dictionary;
  std::size_t unmatched_terms = 0;  // AVA terms not present in the dictionary
};

/// remove: drop entries whose pattern equals a normalized AVA term.
/// flag: keep them with `ambiguous` set.
SubtractResult subtract(const Dictionary& d, std::span<const AvaEntry> terms, AvaMode mode,
                        const StopWords& stopwords = StopWords::snowball_english());

}  // namespace lexaudit
