#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swcat {

enum class ErrorCode {
  UnreadableFile,
  MalformedRecord,
  InvalidRecord,
  EmptySlug,
  InvalidConfig,
  SelfComparison,
  StoreUnavailable,
  InvalidSnapshot,
  EmptyQuery,
  NoCriteria,
  InvalidQuery,
  InvalidKey,
  NotFound,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure the library reports. The code is what
/// callers branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for errors caused by bad user input (files, flags, queries) as opposed
/// to defects or environment failures.
bool is_input_error(ErrorCode code);

}  // namespace swcat
