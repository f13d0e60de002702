#include "muse/session.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "muse/corpus.hpp"

namespace muse {

namespace {

constexpr int kFormatVersion = 1;

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) return false;
  return true;
}

}  // namespace

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::problem_finding: return "problem_finding";
    case SessionState::generated: return "generated";
    case SessionState::selected: return "selected";
    case SessionState::planned: return "planned";
  }
  return "problem_finding";
}

SessionState parse_session_state(std::string_view name) {
  for (auto s : {SessionState::problem_finding, SessionState::generated, SessionState::selected, SessionState::planned})
    if (to_string(s) == name) return s;
  throw DataError("unknown session state '" + std::string(name) + "'");
}

bool transition_allowed(SessionState from, SessionState to) {
  if (to == SessionState::problem_finding) return true;
  if (from == SessionState::planned && to == SessionState::planned) return true;
  return static_cast<int>(to) == static_cast<int>(from) + 1;
}

void transition(Session& session, SessionState to) {
  if (!transition_allowed(session.state, to))
    throw StateConflict("invalid_transition", "cannot move session from " + std::string(to_string(session.state)) +
                                                  " to " + std::string(to_string(to)));
  session.state = to;
}

const RankedCandidate* Session::find_candidate(const std::string& candidate_id) const {
  for (const auto& c : candidates)
    if (c.candidate.id == candidate_id) return &c;
  return nullptr;
}

nlohmann::json to_json(const RankedCandidate& c) {
  auto j = to_json(c.candidate);
  j["surprise"] = c.surprise;
  j["pleasantness"] = c.pleasantness;
  j["pairing"] = c.pairing;
  j["composite"] = c.composite;
  j["rank"] = c.rank;
  return j;
}

RankedCandidate ranked_candidate_from_json(const nlohmann::json& j) {
  RankedCandidate c;
  c.candidate = candidate_from_json(j);
  c.surprise = j.at("surprise").get<double>();
  c.pleasantness = j.at("pleasantness").get<double>();
  c.pairing = j.at("pairing").get<double>();
  c.composite = j.at("composite").get<double>();
  c.rank = j.at("rank").get<std::size_t>();
  return c;
}

nlohmann::json to_json(const Session& s) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : s.candidates) candidates.push_back(to_json(c));
  return {{"version", kFormatVersion},
          {"id", s.id},
          {"state", to_string(s.state)},
          {"problem", s.problem ? to_json(*s.problem) : nlohmann::json()},
          {"candidates", std::move(candidates)},
          {"selection", s.selection ? nlohmann::json(*s.selection) : nlohmann::json()},
          {"proportions", s.proportions ? to_json(*s.proportions) : nlohmann::json()},
          {"plan", s.plan ? to_json(*s.plan) : nlohmann::json()},
          {"seed", s.seed},
          {"created", s.created},
          {"updated", s.updated}};
}

Session session_from_json(const nlohmann::json& j) {
  try {
    if (j.value("version", 0) != kFormatVersion) throw DataError("unsupported session format version");
    Session s;
    s.id = j.at("id").get<std::string>();
    s.state = parse_session_state(j.at("state").get<std::string>());
    if (!j.at("problem").is_null()) s.problem = design_problem_from_json(j.at("problem"));
    for (const auto& c : j.at("candidates")) s.candidates.push_back(ranked_candidate_from_json(c));
    if (!j.at("selection").is_null()) s.selection = j.at("selection").get<std::string>();
    if (!j.at("proportions").is_null()) s.proportions = recipe_from_json(j.at("proportions"), Lexicons{}, nullptr);
    if (!j.at("plan").is_null()) s.plan = plan_from_json(j.at("plan"));
    s.seed = j.at("seed").get<std::uint64_t>();
    s.created = j.at("created").get<std::string>();
    s.updated = j.at("updated").get<std::string>();
    if (s.selection && s.find_candidate(*s.selection) == nullptr)
      throw DataError("selection '" + *s.selection + "' is not among the session candidates");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed session: ") + e.what());
  }
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SessionStore::SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SessionStore::path_for(const std::string& id) const {
  if (!valid_id(id)) throw NotFound("unknown session '" + id + "'");
  return dir_ / (id + ".json");
}

void SessionStore::save(const Session& session) const {
  const auto target = path_for(session.id);
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id() << '.' << std::random_device{}();
  auto tmp = target;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << to_json(session).dump(2) << '\n';
    if (!out) throw DataError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

Session SessionStore::load(const std::string& id) const {
  const auto path = path_for(id);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("unknown session '" + id + "'");
  try {
    auto j = nlohmann::json::parse(in);
    auto s = session_from_json(j);
    if (s.id != id) throw DataError("session id does not match file name");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

bool SessionStore::exists(const std::string& id) const {
  return valid_id(id) && std::filesystem::exists(dir_ / (id + ".json"));
}

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(dir_))
    if (entry.path().extension() == ".json") ids.push_back(entry.path().stem().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace muse
