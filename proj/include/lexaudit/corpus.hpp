#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lexaudit {

enum class Partition { train, dev, test, unpartitioned };

std::string_view to_string(Partition p) noexcept;
/// Throws ValidationError naming the value when it is not one of the four partitions.
Partition parse_partition(std::string_view s);

enum class SourceFormat { massive_jsonl, redial_json };

std::string_view to_string(SourceFormat f) noexcept;
SourceFormat parse_source_format(std::string_view s);

struct Utterance {
  std::string id;
  Partition partition = Partition::unpartitioned;
  std::string text;
  std::map<std::string, std::string> meta;

  bool operator==(const Utterance&) const = default;
};

/// Utterances in source-file order. Immutable once parsed.
struct Corpus {
  std::string name;
  SourceFormat source_format = SourceFormat::massive_jsonl;
  std::vector<Utterance> utterances;

  /// Distinct partitions present, in enum order.
  std::vector<Partition> partitions() const;

  bool operator==(const Corpus&) const = default;
};

struct TokenFlags {
  bool is_stopword = false;
  bool is_placeholder = false;

  bool operator==(const TokenFlags&) const = default;
};

struct Token {
  std::string surface;
  std::string norm;
  std::string stem;
  std::string utterance_id;
  std::size_t index = 0;  // position among the utterance's whitespace tokens
  TokenFlags flags;

  bool operator==(const Token&) const = default;
};

struct PipelineProfile {
  std::string name;
  bool lowercase = true;
  bool strip_punctuation = true;
  bool remove_stopwords = true;
  bool stem = true;
  bool drop_placeholders = true;

  static PipelineProfile gendered_language();
  /// Pronouns are stop words, so they are kept.
  static PipelineProfile pronouns();
  static PipelineProfile marked_words();
  static PipelineProfile names();

  bool operator==(const PipelineProfile&) const = default;
};

/// One of the four frozen presets by name; throws ValidationError otherwise.
PipelineProfile profile_by_name(std::string_view name);

/// Versioned stop-word list. File format: one word per line, `#` lines are
/// comments, and `#version X.Y.Z` sets the version.
class StopWords {
 public:
  StopWords() = default;

  static StopWords parse(std::istream& in);
  static StopWords load(const std::filesystem::path& path);
  /// The Snowball English list shipped in data/stopwords, compiled in.
  static const StopWords& snowball_english();

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::string& version() const noexcept { return version_; }
  std::vector<std::string> words() const;

 private:
  std::unordered_set<std::string> words_;
  std::string version_;
};

/// MASSIVE JSONL: one object per non-blank line with id, partition, utt.
/// Throws ParseError (with line number) or ValidationError (bad partition).
Corpus parse_massive(std::istream& in, std::string name = "massive");

/// ReDial JSONL: one dialogue per line with a `messages` array. Every message
/// becomes an utterance tagged with `partition_label`.
Corpus parse_redial(std::istream& in, Partition partition_label, std::string name = "redial");

Corpus load_corpus(const std::filesystem::path& path, SourceFormat format,
                   Partition redial_partition = Partition::train, std::string name = {});

/// True for "@" followed by one or more digits, the ReDial movie placeholder.
bool is_placeholder(std::string_view s) noexcept;

/// Characters stripped from token edges.
inline constexpr std::string_view kEdgePunctuation = ".,!?;:'\"()[]{}@#$%&*-";

/// Normalized form of a whitespace token under `profile`; may be empty.
/// Placeholders keep their leading "@".
std::string normalize_surface(std::string_view surface, const PipelineProfile& profile);

std::vector<Token> tokenize(const Utterance& u, const PipelineProfile& p,
                            const StopWords& stopwords = StopWords::snowball_english());

struct CorpusStats {
  std::size_t total_tokens = 0;      // non-empty norms before stop-word removal
  std::size_t unique_surface = 0;    // distinct norms, stop words included
  std::size_t unique_processed = 0;  // distinct stems after the full pipeline
  std::map<Partition, std::size_t> per_partition_counts;

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(const Corpus& c, const PipelineProfile& p,
                         const StopWords& stopwords = StopWords::snowball_english());

}  // namespace lexaudit
