#pragma once

// HTTP+JSON front end for one model and an optional referral store. Routing
// and handlers are transport-independent; server.hpp binds them to httplib.

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdss/model.hpp"

namespace fuzzdss::http {

struct Request {
  std::string method;  // "GET", "POST", ...
  std::string path;
  std::multimap<std::string, std::string> query;
  std::string content_type;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::vector<std::pair<std::string, std::string>> headers;
};

/// Error codes returned in {status, code, message, details}. Closed set.
namespace codes {
inline constexpr const char* parse_error = "parse_error";            // 400 body is not JSON / CSV
inline constexpr const char* bad_request = "bad_request";            // 400 wrong shape or bad query
inline constexpr const char* out_of_universe = "out_of_universe";    // 422
inline constexpr const char* unknown_variable = "unknown_variable";  // 422
inline constexpr const char* missing_variable = "missing_variable";  // 422
inline constexpr const char* bad_grid_request = "bad_grid_request";  // 422
inline constexpr const char* invalid_record = "invalid_record";      // 422
inline constexpr const char* store_locked = "store_locked";          // 409
inline constexpr const char* store_not_configured = "store_not_configured";  // 503
inline constexpr const char* store_error = "store_error";            // 500
inline constexpr const char* not_found = "not_found";                // 404
inline constexpr const char* method_not_allowed = "method_not_allowed";  // 405
inline constexpr const char* internal_error = "internal_error";      // 500
}  // namespace codes

struct ServiceOptions {
  Model model;
  std::optional<std::filesystem::path> store;
  std::optional<std::string> cors_origin;  // e.g. "http://localhost:5173" or "*"
};

class Service {
 public:
  explicit Service(ServiceOptions options);

  /// Routes to one of the handlers below; adds CORS headers; never throws.
  Response handle(const Request& request);

  Response evaluate(const std::string& body) const;
  Response model() const;
  Response surface(const std::multimap<std::string, std::string>& query) const;
  Response post_referrals(const std::string& body, const std::string& content_type);
  Response frequency(const std::multimap<std::string, std::string>& query) const;

  const Model& active_model() const noexcept { return options_.model; }

 private:
  ServiceOptions options_;
  std::string model_json_;  // immutable, rendered once
  std::mutex store_mutex_;
};

}  // namespace fuzzdss::http
