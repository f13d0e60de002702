#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "muse/engine.hpp"
#include "muse/session.hpp"

namespace muse {

struct ApiRequest {
  std::string method;  // "GET" / "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Transport-independent handler for the mixed-initiative session protocol.
/// Mutations on one session are linearized: a mutation that arrives while
/// another is in flight on the same session gets 409 `session_busy`.
///
/// Every response body carries `engine_version` and `seed`. Errors are
/// `{"error": {"code": <reason>, "message": ...}}`.
class Api {
 public:
  Api(const Engine& engine, SessionStore& store);

  ApiResponse handle(const ApiRequest& request);

 private:
  ApiResponse dispatch(const ApiRequest& request);
  ApiResponse create_session(const ApiRequest& request);
  ApiResponse get_session(const std::string& id);
  ApiResponse ingredients(const ApiRequest& request);
  ApiResponse set_problem(const std::string& id, const ApiRequest& request);
  ApiResponse run_generate(const std::string& id, const ApiRequest& request);
  ApiResponse list_candidates(const std::string& id, const ApiRequest& request);
  ApiResponse select(const std::string& id, const ApiRequest& request);
  ApiResponse make_plan(const std::string& id, const ApiRequest& request);
  ApiResponse reset(const std::string& id);
  ApiResponse suggest_menu(const ApiRequest& request);

  std::shared_ptr<std::mutex> session_lock(const std::string& id);

  const Engine& engine_;
  SessionStore& store_;
  std::mutex locks_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> locks_;
  std::mutex id_mutex_;
  std::uint64_t next_id_ = 0;
};

}  // namespace muse
