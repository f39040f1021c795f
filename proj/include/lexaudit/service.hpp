#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexaudit/annotate.hpp"
#include "lexaudit/config.hpp"

namespace httplib {
class Server;
}

namespace lexaudit {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Candidates for rating: gendered-language entries of all dictionaries,
/// merged, audited over every corpus.
std::vector<Candidate> candidates_for(const Workspace& w, const CandidateOptions& options = {});

/// Request handling for the annotation HTTP API, independent of transport.
///
/// Every accepted mutation is appended to the journal before the response is
/// sent; constructing a service over an existing journal replays it. Session
/// mutations are serialized per session.
class AnnotationService {
 public:
  AnnotationService(std::vector<Corpus> corpora, std::vector<Candidate> candidates,
                    std::optional<std::filesystem::path> journal = std::nullopt);

  ApiResponse candidates() const;
  ApiResponse concordance(const std::string& term, const std::string& corpus, const std::string& window) const;
  /// Body: {"raters": [...], "id"?: str, "terms"?: [...]}. Ids default to s1, s2, ...
  ApiResponse create_session(const std::string& body);
  ApiResponse session(const std::string& id) const;
  ApiResponse next(const std::string& id, const std::string& rater) const;
  /// Body: {"rater", "term", "ambiguous", "note"?, "example_ref"?}
  ApiResponse rate(const std::string& id, const std::string& body);
  /// Body: {"term", "decision", "note"?}
  ApiResponse resolve(const std::string& id, const std::string& body);
  ApiResponse alpha(const std::string& id) const;
  /// AVA JSONL of the session's decided-ambiguous terms, under "jsonl".
  ApiResponse export_ava(const std::string& id) const;

  /// Registers the routes on `server`.
  void mount(httplib::Server& server);

  /// Copy of a session's current state.
  std::optional<Session> snapshot(const std::string& id) const;

 private:
  struct Slot {
    mutable std::mutex mutex;
    Session session;
  };

  std::shared_ptr<Slot> find(const std::string& id) const;
  void record(const SessionEvent& e);

  std::vector<Corpus> corpora_;
  std::vector<Candidate> candidates_;
  std::optional<Journal> journal_;
  std::mutex journal_mutex_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::size_t next_id_ = 1;
};

nlohmann::json session_json(const Session& s);

/// Blocks serving on the configured address. Refuses non-loopback binds
/// unless unsafe_bind is set.
void serve(const Config& config, const Workspace& workspace);

}  // namespace lexaudit
