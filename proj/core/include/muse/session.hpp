#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "muse/design.hpp"
#include "muse/planner.hpp"

namespace muse {

enum class SessionState { problem_finding, generated, selected, planned };
std::string_view to_string(SessionState s);
SessionState parse_session_state(std::string_view name);

/// True for the forward edges problem_finding -> generated -> selected ->
/// planned, planned -> planned (re-planning), and any state -> problem_finding.
bool transition_allowed(SessionState from, SessionState to);

struct RankedCandidate {
  Candidate candidate;
  double surprise = 0.0;
  double pleasantness = 0.0;
  double pairing = 0.0;
  double composite = 0.0;
  std::size_t rank = 0;

  bool operator==(const RankedCandidate&) const = default;
};

struct Session {
  std::string id;
  SessionState state = SessionState::problem_finding;
  std::optional<DesignProblem> problem;
  std::vector<RankedCandidate> candidates;  // composite-rank order
  std::optional<std::string> selection;
  std::optional<Recipe> proportions;
  std::optional<Plan> plan;
  std::uint64_t seed = 0;
  std::string created;
  std::string updated;

  const RankedCandidate* find_candidate(const std::string& candidate_id) const;
  bool operator==(const Session&) const = default;
};

/// Moves `session` to `to`, throwing StateConflict when the edge is not allowed.
void transition(Session& session, SessionState to);

nlohmann::json to_json(const RankedCandidate& c);
RankedCandidate ranked_candidate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Session& s);
Session session_from_json(const nlohmann::json& j);

std::string utc_timestamp();

/// One JSON file per session under a directory. Writes go through a temporary
/// file and an atomic rename, so concurrent saves never leave a torn file.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir);

  void save(const Session& session) const;
  /// NotFound for an unknown id; DataError naming the file when it cannot be parsed.
  Session load(const std::string& id) const;
  bool exists(const std::string& id) const;
  std::vector<std::string> list() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& id) const;
  std::filesystem::path dir_;
};

}  // namespace muse
