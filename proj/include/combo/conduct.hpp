#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "combo/history.hpp"

namespace httplib {
class Server;
}

namespace combo::conduct {

/// Error with a structured detail payload for API responses.
class ApiError : public Error {
 public:
  ApiError(ErrorCode code, const std::string& message, json detail = nullptr)
      : Error(code, message), detail_(std::move(detail)) {}
  const json& detail() const noexcept { return detail_; }

 private:
  json detail_;
};

/// HTTP status for an error code.
int http_status(ErrorCode code) noexcept;
json error_body(const Error& e);

/// Live trial sessions backed by one append-only JSON-lines log per session.
/// Requests on one session are serialized; sessions are independent.
class TrialService {
 public:
  /// Replays every session log found in data_dir.
  explicit TrialService(std::filesystem::path data_dir);
  ~TrialService();

  /// body: {design: id | {id, params...}, J?, K?, config?, seed?}
  json create(const json& body);
  json get(const std::string& id) const;
  /// body: {dose: {j,k}, patients, dlts, idempotency_key?, revision?, override?, note?}
  json post_cohort(const std::string& id, const json& body);
  /// body: {revision?}
  json undo(const std::string& id, const json& body);
  static json designs();

  std::size_t size() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<Session> load(const std::filesystem::path& file);

  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Routes for the conduct API on an httplib server.
void install_routes(httplib::Server& server, TrialService& service);

/// Blocks serving the API; returns false if the port cannot be bound.
bool serve(TrialService& service, const std::string& host, int port);

}  // namespace combo::conduct
