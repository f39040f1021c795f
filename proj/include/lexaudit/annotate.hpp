#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lexaudit/audit.hpp"
#include "lexaudit/corpus.hpp"
#include "lexaudit/lexicon.hpp"
#include "lexaudit/stats.hpp"

namespace lexaudit {

struct ConcordanceLine {
  std::string corpus;
  std::string utterance_id;
  std::string left_context;
  std::string keyword;
  std::string right_context;

  /// "left keyword right" with single spaces.
  std::string text() const;
  bool operator==(const ConcordanceLine&) const = default;
};

struct ConcordanceOptions {
  PipelineProfile profile = PipelineProfile::gendered_language();
  Category category = Category::gendered_language;  // decides stem vs norm matching
  const StopWords* stopwords = nullptr;
};

/// Keyword-in-context lines for every token matching `pattern`, in corpus
/// order, with up to `window` raw tokens either side. Matching uses the same
/// tokenization and normalization as run_audit, so the line count equals the
/// audit frequency of the same pattern. Throws ValidationError if window < 1.
std::vector<ConcordanceLine> concordance(const Corpus& c, std::string_view pattern, std::size_t window,
                                         const ConcordanceOptions& options = {});

struct CorpusFrequency {
  std::string corpus;
  std::int64_t frequency = 0;

  bool operator==(const CorpusFrequency&) const = default;
};

struct Candidate {
  std::string term;
  GenderClass original_gender = GenderClass::masculine;
  std::vector<std::string> source_dictionaries;
  std::vector<CorpusFrequency> corpora_found;
  std::vector<ConcordanceLine> sample_examples;

  std::int64_t total_frequency() const;
  bool operator==(const Candidate&) const = default;
};

struct CandidateOptions {
  std::size_t samples_per_corpus = 5;
  std::size_t window = 5;
};

/// One candidate per distinct gendered-language (term, gender) hit, by
/// descending total frequency then term. `corpora` supply context for the
/// sample lines and are matched to match sets by corpus name.
std::vector<Candidate> extract_candidates(std::span<const MatchSet> matchsets, std::span<const Corpus> corpora = {},
                                          const CandidateOptions& options = {});

nlohmann::json to_json(const ConcordanceLine& l);
nlohmann::json to_json(const Candidate& c);
Candidate candidate_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Rating sessions

enum class TermStatus { pending, agreed, needs_discussion, resolved };

std::string_view to_string(TermStatus s) noexcept;

struct Rating {
  bool ambiguous = false;
  std::string note;
  std::string example_ref;

  bool operator==(const Rating&) const = default;
};

struct RatingEvent {
  std::string rater;
  std::string term;
  Rating rating;

  bool operator==(const RatingEvent&) const = default;
};

struct Resolution {
  bool decision = false;
  std::string note;

  bool operator==(const Resolution&) const = default;
};

/// Multi-rater ambiguity judgments over a fixed candidate list.
///
/// A term is pending until every rater has rated it, then agreed (all
/// ratings equal) or needs_discussion; it becomes resolved only through
/// resolve(). Re-rating overwrites the current rating and is kept in
/// history; it is refused once the term is resolved.
class Session {
 public:
  Session() = default;
  /// Throws ValidationError on an empty id, no raters, or duplicate raters/terms.
  Session(std::string id, std::vector<Candidate> candidates, std::vector<std::string> raters);

  /// Unknown rater: ValidationError. Unknown term: NotFoundError.
  /// Resolved term: ConflictError.
  void rate(const std::string& rater, const std::string& term, Rating rating);
  /// Only agreed or needs_discussion terms; ConflictError otherwise.
  void resolve(const std::string& term, Resolution resolution);

  TermStatus status(const std::string& term) const;
  /// Agreed value or recorded resolution; nullopt while undecided.
  std::optional<bool> decision(const std::string& term) const;
  /// First term, in candidate order, the rater has not rated yet.
  std::optional<std::string> next_for(const std::string& rater) const;

  const std::string& id() const noexcept { return id_; }
  const std::vector<Candidate>& candidates() const noexcept { return candidates_; }
  const std::vector<std::string>& raters() const noexcept { return raters_; }
  const Candidate& candidate(const std::string& term) const;
  bool has_term(const std::string& term) const;
  bool has_rater(const std::string& rater) const;
  /// Current rating, if any.
  std::optional<Rating> rating(const std::string& rater, const std::string& term) const;
  const std::vector<RatingEvent>& history() const noexcept { return history_; }
  const std::map<std::string, Resolution>& resolutions() const noexcept { return resolutions_; }

  /// term -> rater -> "ambiguous" | "not_ambiguous"
  RatingsMatrix ratings_matrix() const;

  bool operator==(const Session&) const = default;

 private:
  std::string id_;
  std::vector<Candidate> candidates_;
  std::vector<std::string> raters_;
  std::map<std::pair<std::string, std::string>, Rating> ratings_;  // (rater, term)
  std::vector<RatingEvent> history_;
  std::map<std::string, Resolution> resolutions_;
};

Session create_session(std::string id, std::vector<Candidate> candidates, std::vector<std::string> raters);
Session submit_rating(Session s, const std::string& rater, const std::string& term, bool ambiguous,
                      std::string note = {}, std::string example_ref = {});
Session resolve(Session s, const std::string& term, bool decision, std::string note = {});

/// Krippendorff's alpha over all rated terms.
double session_alpha(const Session& s);
/// Alpha restricted to a single term's ratings.
double term_alpha(const Session& s, const std::string& term);

/// AVA records for every term decided ambiguous, ordered by term, with one
/// example snippet per corpus that has a sample line. Throws ValidationError
/// for a decided term without any example.
std::vector<AvaEntry> ava_entries(const Session& s);
std::string export_ava(const Session& s);

// ---------------------------------------------------------------------------
// Event journal

enum class EventType { created, rated, resolved };

std::string_view to_string(EventType t) noexcept;

struct SessionEvent {
  EventType type = EventType::created;
  std::string timestamp;
  nlohmann::json payload;

  bool operator==(const SessionEvent&) const = default;
};

SessionEvent created_event(const Session& s, std::string timestamp);
SessionEvent rated_event(const std::string& session_id, const RatingEvent& r, std::string timestamp);
SessionEvent resolved_event(const std::string& session_id, const std::string& term, const Resolution& r,
                            std::string timestamp);

std::string to_json_line(const SessionEvent& e);
SessionEvent parse_event(std::string_view line);

/// Applies one event to a set of sessions keyed by id.
void apply(std::map<std::string, Session>& sessions, const SessionEvent& e);
std::map<std::string, Session> replay(std::span<const SessionEvent> events);

/// Append-only JSONL file of session events.
class Journal {
 public:
  explicit Journal(std::filesystem::path path);

  void append(const SessionEvent& e);
  std::vector<SessionEvent> read() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace lexaudit
