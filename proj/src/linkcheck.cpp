#include "swcat/linkcheck.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <httplib.h>
#include <thread>

#include "swcat/error.hpp"
#include "swcat/text.hpp"

namespace swcat {

void CheckPolicy::validate() const {
  if (timeout.count() <= 0) throw Error(ErrorCode::InvalidConfig, "timeout must be positive");
  if (retries < 0 || retries > 5) throw Error(ErrorCode::InvalidConfig, "retries must be in [0, 5]");
  if (backoff_base.count() < 0) throw Error(ErrorCode::InvalidConfig, "backoff must be >= 0");
  if (global_parallelism < 1) throw Error(ErrorCode::InvalidConfig, "parallelism must be >= 1");
  if (redirect_limit < 0) throw Error(ErrorCode::InvalidConfig, "redirect limit must be >= 0");
}

CheckPolicy CheckPolicy::from_config(const KeyValueConfig& cfg) {
  CheckPolicy p;
  p.timeout = Millis(cfg.get_int("timeout_ms", p.timeout.count()));
  p.retries = static_cast<int>(cfg.get_int("retries", p.retries));
  p.backoff_base = Millis(cfg.get_int("backoff_ms", p.backoff_base.count()));
  p.global_parallelism = static_cast<int>(cfg.get_int("parallelism", p.global_parallelism));
  p.user_agent = cfg.get_or("user_agent", p.user_agent);
  p.validate();
  return p;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Alive: return "Alive";
    case Outcome::Redirected: return "Redirected";
    case Outcome::ClientError: return "ClientError";
    case Outcome::ServerError: return "ServerError";
    case Outcome::Timeout: return "Timeout";
    case Outcome::DnsFailure: return "DnsFailure";
    case Outcome::InvalidUrl: return "InvalidUrl";
  }
  return "InvalidUrl";
}

std::optional<Outcome> parse_outcome(std::string_view s) {
  for (auto o : {Outcome::Alive, Outcome::Redirected, Outcome::ClientError, Outcome::ServerError,
                 Outcome::Timeout, Outcome::DnsFailure, Outcome::InvalidUrl}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

bool is_reachable(Outcome o) { return o == Outcome::Alive || o == Outcome::Redirected; }

std::string ParsedUrl::origin() const {
  std::string out = scheme + "://" + host;
  int default_port = scheme == "https" ? 443 : 80;
  if (port != default_port) out += ":" + std::to_string(port);
  return out;
}

std::string ParsedUrl::str() const { return origin() + target; }

std::optional<ParsedUrl> parse_url(std::string_view url) {
  url = text::trim_view(url);
  ParsedUrl u;
  auto sep = url.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  u.scheme = text::ascii_lower(url.substr(0, sep));
  if (u.scheme != "http" && u.scheme != "https") return std::nullopt;
  std::string_view rest = url.substr(sep + 3);
  std::size_t path_start = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, path_start);
  if (authority.find('@') != std::string_view::npos) return std::nullopt;
  std::string_view host = authority;
  u.port = u.scheme == "https" ? 443 : 80;
  if (auto colon = authority.rfind(':'); colon != std::string_view::npos && authority.front() != '[') {
    host = authority.substr(0, colon);
    std::string_view port = authority.substr(colon + 1);
    if (port.empty() || port.size() > 5) return std::nullopt;
    int n = 0;
    for (char c : port) {
      if (!text::is_ascii_digit(c)) return std::nullopt;
      n = n * 10 + (c - '0');
    }
    if (n < 1 || n > 65535) return std::nullopt;
    u.port = n;
  }
  if (host.empty()) return std::nullopt;
  for (char c : host) {
    if (!(text::is_ascii_alnum(c) || c == '.' || c == '-' || c == '_')) return std::nullopt;
  }
  u.host = text::ascii_lower(host);
  if (path_start == std::string_view::npos) {
    u.target = "/";
  } else {
    std::string_view target = rest.substr(path_start);
    if (auto frag = target.find('#'); frag != std::string_view::npos) target = target.substr(0, frag);
    u.target = std::string(target);
    if (u.target.empty() || u.target.front() != '/') u.target.insert(0, "/");
  }
  for (char c : u.target) {
    if (text::is_space(c) || static_cast<unsigned char>(c) < 0x20) return std::nullopt;
  }
  return u;
}

std::optional<ParsedUrl> resolve_location(const ParsedUrl& base, std::string_view location) {
  location = text::trim_view(location);
  if (location.empty()) return std::nullopt;
  if (location.find("://") != std::string_view::npos) return parse_url(location);
  if (location.substr(0, 2) == "//") return parse_url(base.scheme + ":" + std::string(location));
  ParsedUrl u = base;
  if (location.front() == '/') {
    u.target = std::string(location);
  } else {
    std::string dir = base.target.substr(0, base.target.find('?'));
    dir = dir.substr(0, dir.rfind('/') + 1);
    u.target = dir + std::string(location);
  }
  return parse_url(u.str());
}

HostGate::Lease::Lease(HostGate& gate, std::string host) : gate_(gate), host_(std::move(host)) {
  std::unique_lock lock(gate_.mu_);
  gate_.cv_.wait(lock, [&] { return gate_.busy_.count(host_) == 0; });
  gate_.busy_.insert(host_);
}

HostGate::Lease::~Lease() {
  {
    std::lock_guard lock(gate_.mu_);
    gate_.busy_.erase(host_);
  }
  gate_.cv_.notify_all();
}

namespace {

bool host_resolves(const std::string& host) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  int rc = getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (res != nullptr) freeaddrinfo(res);
  return rc == 0;
}

struct HopResult {
  bool transport_ok = false;
  int status = 0;
  std::string location;
};

HopResult send_request(const ParsedUrl& url, bool full_fetch, const CheckPolicy& policy) {
  httplib::Client client(url.origin());
  auto secs = [](Millis m) { return std::chrono::duration_cast<std::chrono::microseconds>(m); };
  client.set_connection_timeout(secs(policy.timeout));
  client.set_read_timeout(secs(policy.timeout));
  client.set_write_timeout(secs(policy.timeout));
  client.set_follow_location(false);
  client.set_keep_alive(false);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
  client.enable_server_certificate_verification(false);
#endif
  httplib::Headers headers{{"User-Agent", policy.user_agent}, {"Accept", "*/*"}};

  HopResult hop;
  if (!full_fetch) {
    auto res = client.Head(url.target, headers);
    if (res) {
      hop.transport_ok = true;
      hop.status = res->status;
      hop.location = res->get_header_value("Location");
    }
    return hop;
  }
  // Only the status line and headers matter; the body is abandoned.
  bool got_headers = false;
  auto res = client.Get(
      url.target, headers,
      [&](const httplib::Response& r) {
        got_headers = true;
        hop.status = r.status;
        hop.location = r.get_header_value("Location");
        return false;
      },
      [](const char*, std::size_t) { return false; });
  if (res) {
    hop.status = res->status;
    hop.location = res->get_header_value("Location");
    got_headers = true;
  }
  hop.transport_ok = got_headers;
  return hop;
}

struct AttemptResult {
  Outcome outcome = Outcome::Timeout;
  std::optional<int> code;
  std::optional<std::string> final_url;
};

AttemptResult attempt(const ParsedUrl& start, const CheckPolicy& policy, HostGate& gate) {
  AttemptResult r;
  ParsedUrl current = start;
  bool redirected = false;
  bool full_fetch = false;
  // Every request, fallback fetches included, draws from one budget.
  int budget = policy.redirect_limit + 1;
  while (true) {
    if (budget == 0) {
      r.outcome = Outcome::ClientError;  // redirect limit exceeded
      return r;
    }
    if (!host_resolves(current.host)) {
      r.outcome = Outcome::DnsFailure;
      return r;
    }
    HopResult hop;
    {
      HostGate::Lease lease(gate, current.host);
      hop = send_request(current, full_fetch, policy);
    }
    --budget;
    if (!hop.transport_ok) {
      r.outcome = Outcome::Timeout;
      return r;
    }
    r.code = hop.status;
    if (!full_fetch && (hop.status == 405 || hop.status == 501)) {
      full_fetch = true;
      continue;
    }
    if (hop.status >= 300 && hop.status < 400 && hop.status != 304) {
      auto next = resolve_location(current, hop.location);
      if (!next) {
        r.outcome = Outcome::ClientError;
        return r;
      }
      current = *next;
      redirected = true;
      continue;
    }
    if (hop.status >= 200 && hop.status < 300) {
      if (redirected && current.str() != start.str()) {
        r.outcome = Outcome::Redirected;
        r.final_url = current.str();
      } else {
        r.outcome = Outcome::Alive;
      }
    } else if (hop.status >= 500 && hop.status < 600) {
      r.outcome = Outcome::ServerError;
    } else {
      r.outcome = Outcome::ClientError;
    }
    return r;
  }
}

bool retryable(Outcome o) {
  return o == Outcome::Timeout || o == Outcome::DnsFailure || o == Outcome::ServerError;
}

}  // namespace

LinkStatus check_url(std::string_view url, const CheckPolicy& policy, CheckEnvironment env) {
  LinkStatus status;
  status.url = std::string(text::trim_view(url));
  status.checked_at = std::chrono::floor<std::chrono::seconds>(env.now());
  auto parsed = parse_url(status.url);
  if (!parsed) {
    status.outcome = Outcome::InvalidUrl;
    return status;
  }
  HostGate local_gate;
  HostGate& gate = env.gate != nullptr ? *env.gate : local_gate;
  auto sleep = env.sleep ? env.sleep : [](Millis d) { std::this_thread::sleep_for(d); };

  for (int n = 1;; ++n) {
    auto t0 = std::chrono::steady_clock::now();
    AttemptResult r = attempt(*parsed, policy, gate);
    status.latency = std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - t0);
    status.attempts = n;
    status.outcome = r.outcome;
    status.http_code = r.code;
    status.final_url = r.final_url;
    if (!retryable(r.outcome) || n > policy.retries) break;
    sleep(policy.backoff_base * (1LL << (n - 1)));
  }
  return status;
}

std::string format_timestamp(SystemTime t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<SystemTime> parse_timestamp(std::string_view s) {
  std::tm tm{};
  std::string str(s);
  char z = 0;
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                  &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &z) != 7 ||
      z != 'Z' || str.size() != 20) {
    return std::nullopt;
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

std::string format_status_line(const LinkStatus& s) {
  std::string line = format_timestamp(s.checked_at);
  line += '\t' + s.url;
  line += '\t' + std::string(to_string(s.outcome));
  line += '\t' + (s.http_code ? std::to_string(*s.http_code) : std::string("-"));
  line += '\t' + (s.final_url ? *s.final_url : std::string("-"));
  line += '\t' + std::to_string(s.latency.count());
  line += '\t' + std::to_string(s.attempts);
  return line;
}

LinkStatus parse_status_line(std::string_view line) {
  auto f = text::split(line, '\t');
  auto bad = [&] { return Error(ErrorCode::MalformedRecord, "bad status line: " + std::string(line)); };
  if (f.size() != 7) throw bad();
  LinkStatus s;
  auto ts = parse_timestamp(f[0]);
  auto outcome = parse_outcome(f[2]);
  if (!ts || !outcome) throw bad();
  s.checked_at = *ts;
  s.url = f[1];
  s.outcome = *outcome;
  try {
    if (f[3] != "-") s.http_code = std::stoi(f[3]);
    s.latency = Millis(std::stoll(f[5]));
    s.attempts = std::stoi(f[6]);
  } catch (const std::exception&) {
    throw bad();
  }
  if (f[4] != "-") s.final_url = f[4];
  return s;
}

StatusStore::StatusStore(std::filesystem::path path) : path_(std::move(path)) {}

StatusStore::~StatusStore() { close(); }

std::vector<LinkStatus> StatusStore::history() const {
  std::vector<LinkStatus> out;
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) return out;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw Error(ErrorCode::StoreUnavailable, "cannot read status history " + path_.string());
  std::string line;
  while (std::getline(in, line)) {
    if (!text::trim_view(line).empty()) out.push_back(parse_status_line(line));
  }
  return out;
}

std::map<std::string, LinkStatus> StatusStore::latest() const {
  std::map<std::string, LinkStatus> out;
  for (auto& s : history()) out[s.url] = std::move(s);
  return out;
}

void StatusStore::open() {
  std::lock_guard lock(mu_);
  if (fd_ >= 0) return;
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorCode::StoreUnavailable,
                "cannot open status history " + path_.string() + ": " + std::strerror(errno));
  }
}

void StatusStore::close() {
  std::lock_guard lock(mu_);
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void StatusStore::append(const LinkStatus& status) {
  std::string line = format_status_line(status) + '\n';
  std::lock_guard lock(mu_);
  if (fd_ < 0) throw Error(ErrorCode::StoreUnavailable, "status history not open");
  struct stat st{};
  if (::fstat(fd_, &st) != 0) {
    throw Error(ErrorCode::StoreUnavailable, "cannot stat status history");
  }
  ssize_t n = ::write(fd_, line.data(), line.size());
  if (n != static_cast<ssize_t>(line.size())) {
    int err = errno;
    if (n > 0 && ::ftruncate(fd_, st.st_size) != 0) err = errno;
    throw Error(ErrorCode::StoreUnavailable,
                "append to status history failed: " + std::string(std::strerror(n < 0 ? err : EIO)));
  }
}

SweepReport run_sweep(std::span<const SoftwareRecord> catalog, const CheckPolicy& policy,
                      StatusStore& store, CheckEnvironment env) {
  policy.validate();
  const auto previous = store.latest();
  store.open();

  SweepReport report;
  std::set<std::string> urls;
  for (const auto& rec : catalog) {
    if (!rec.homepage || text::trim_view(*rec.homepage).empty()) {
      ++report.skipped;
    } else {
      urls.insert(text::trim(*rec.homepage));
    }
  }

  // Same-host URLs go to one worker in sequence; the gate still guards
  // redirects that cross hosts.
  std::map<std::string, std::vector<std::string>> by_host;
  for (const auto& u : urls) {
    auto parsed = parse_url(u);
    by_host[parsed ? parsed->host : std::string()].push_back(u);
  }
  std::vector<std::vector<std::string>> groups;
  for (auto& [_, g] : by_host) groups.push_back(std::move(g));

  HostGate gate;
  if (env.gate == nullptr) env.gate = &gate;
  std::map<std::string, LinkStatus> results;
  std::mutex results_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;

  auto worker = [&] {
    for (std::size_t g = next++; g < groups.size() && !failed; g = next++) {
      for (const auto& url : groups[g]) {
        if (failed) return;
        LinkStatus s = check_url(url, policy, env);
        try {
          store.append(s);
        } catch (const Error& e) {
          std::lock_guard lock(results_mu);
          if (!failed.exchange(true)) failure = e.what();
          return;
        }
        std::lock_guard lock(results_mu);
        results.emplace(url, std::move(s));
      }
    }
  };
  {
    std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(policy.global_parallelism),
                                          std::max<std::size_t>(groups.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  store.close();
  if (failed) throw Error(ErrorCode::StoreUnavailable, failure);

  for (const auto& [url, s] : results) {
    ++report.counts[s.outcome];
    ++report.checked;
    auto prev = previous.find(url);
    if (prev != previous.end() && is_reachable(prev->second.outcome) && !is_reachable(s.outcome)) {
      report.newly_dead.push_back(url);
    }
  }
  return report;
}

}  // namespace swcat
