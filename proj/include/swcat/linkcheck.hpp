#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swcat/config.hpp"
#include "swcat/corpus.hpp"

namespace swcat {

using Millis = std::chrono::milliseconds;
using SystemTime = std::chrono::system_clock::time_point;

struct CheckPolicy {
  Millis timeout{10'000};
  int retries = 2;
  Millis backoff_base{1'000};  // doubled after every failed attempt
  int global_parallelism = 8;
  std::string user_agent = "swcat-linkcheck/1.0";
  int redirect_limit = 5;

  /// Throws Error(InvalidConfig) unless timeout > 0, 0 <= retries <= 5 and
  /// global_parallelism >= 1.
  void validate() const;
  /// Keys: timeout_ms, retries, backoff_ms, parallelism, user_agent.
  static CheckPolicy from_config(const KeyValueConfig& cfg);
};

enum class Outcome { Alive, Redirected, ClientError, ServerError, Timeout, DnsFailure, InvalidUrl };

std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view s);

struct LinkStatus {
  std::string url;
  SystemTime checked_at{};
  Outcome outcome = Outcome::InvalidUrl;
  std::optional<int> http_code;        // last HTTP status seen, if any
  std::optional<std::string> final_url;  // Redirected only
  Millis latency{0};                   // duration of the last attempt
  int attempts = 1;

  bool operator==(const LinkStatus&) const = default;
};

/// Alive or Redirected.
bool is_reachable(Outcome o);

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;    // lowercase
  int port = 0;
  std::string target;  // path + query, at least "/"

  std::string origin() const;  // scheme://host[:port]
  std::string str() const;
};

/// Absolute http(s) URLs only; nullopt otherwise.
std::optional<ParsedUrl> parse_url(std::string_view url);
/// Resolves a Location header against the URL that produced it.
std::optional<ParsedUrl> resolve_location(const ParsedUrl& base, std::string_view location);

/// Per-host mutual exclusion: at most one request in flight per host.
class HostGate {
 public:
  class Lease {
   public:
    Lease(HostGate& gate, std::string host);
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;
    ~Lease();

   private:
    HostGate& gate_;
    std::string host_;
  };

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::set<std::string> busy_;
};

/// Injection points for tests. Defaults use the system clock and real sleeps.
struct CheckEnvironment {
  std::function<SystemTime()> now = [] { return std::chrono::system_clock::now(); };
  std::function<void(Millis)> sleep;
  HostGate* gate = nullptr;  // shared gate for concurrent checks; a private one if null
};

/// Head request first, full fetch on 405/501; follows up to
/// policy.redirect_limit redirects; retries Timeout, DnsFailure and
/// ServerError with exponential backoff. Never throws for network failures.
LinkStatus check_url(std::string_view url, const CheckPolicy& policy, CheckEnvironment env = {});

/// Append-only history, one line per check:
/// `checked_at url outcome code_or_dash final_url_or_dash latency_ms attempts`.
class StatusStore {
 public:
  explicit StatusStore(std::filesystem::path path);

  /// Latest status per URL. Missing file reads as empty history.
  std::map<std::string, LinkStatus> latest() const;
  std::vector<LinkStatus> history() const;

  /// Opens the file for appending; throws Error(StoreUnavailable).
  void open();
  /// Appends one line with a single write; a short write is rolled back.
  /// Thread-safe. Throws Error(StoreUnavailable).
  void append(const LinkStatus& status);
  void close();
  ~StatusStore();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex mu_;
};

std::string format_status_line(const LinkStatus& s);
LinkStatus parse_status_line(std::string_view line);
std::string format_timestamp(SystemTime t);
std::optional<SystemTime> parse_timestamp(std::string_view s);

struct SweepReport {
  std::map<Outcome, int> counts;
  int checked = 0;
  int skipped = 0;  // records without a homepage
  std::vector<std::string> newly_dead;  // sorted
};

/// Checks every distinct homepage in the catalog with a bounded worker pool,
/// appends each status to the store and diffs against the previous sweep.
SweepReport run_sweep(std::span<const SoftwareRecord> catalog, const CheckPolicy& policy,
                      StatusStore& store, CheckEnvironment env = {});

}  // namespace swcat
