#pragma once

#include <map>
#include <string>

#include "swcat/snapshot.hpp"

namespace swcat {

struct ApiRequest {
  std::string method = "GET";
  std::string path;  // decoded, without query string
  std::map<std::string, std::string> params;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Routes one request against a snapshot. The body depends only on the
/// snapshot and the request. Errors come back as {error_code, message} with
/// 400 for input errors, 404 for NotFound and 500 otherwise.
ApiResponse handle_request(const IndexSnapshot& snap, const ApiRequest& req);

}  // namespace swcat
