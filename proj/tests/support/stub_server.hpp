#pragma once

// Scripted HTTP server for link-checker tests. Runs on 127.0.0.1 with a
// random port and records how many requests were in flight per Host header.

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <thread>

namespace stub {

class Server {
 public:
  Server() {
    srv_.Get("/ok", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      res.status = 200;
      res.set_content("ok", "text/plain");
    });
    srv_.Get("/redirect", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      res.status = 301;
      res.set_header("Location", "/ok");
    });
    srv_.Get("/found-abs", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      res.status = 302;
      res.set_header("Location", base() + "/ok");
    });
    srv_.Get("/loop", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      res.status = 301;
      res.set_header("Location", "/loop");
    });
    srv_.Get("/missing", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      res.status = 404;
    });
    srv_.Get("/error", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      res.status = 500;
    });
    srv_.Get("/nohead", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      res.status = req.method == "HEAD" ? 405 : 200;
    });
    // First request per `id` fails with 500, later ones succeed.
    srv_.Get("/flaky", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      std::lock_guard lock(mu_);
      res.status = flaky_seen_[req.get_param_value("id")]++ == 0 ? 500 : 200;
    });
    // Held briefly so that concurrent requests would overlap.
    srv_.Get("/hold", [this](const httplib::Request& req, httplib::Response& res) {
      Tracked t(*this, req);
      std::this_thread::sleep_for(std::chrono::milliseconds(150));
      res.status = 200;
    });
    // Not tracked: abandoned requests keep sleeping after the client gave up.
    srv_.Get("/slow", [this](const httplib::Request&, httplib::Response& res) {
      slow_hits_++;
      for (int i = 0; i < 100 && !stopping_; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(50));
      res.status = 200;
    });
    port_ = srv_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { srv_.listen_after_bind(); });
    srv_.wait_until_ready();
  }

  ~Server() {
    stopping_ = true;
    srv_.stop();
    thread_.join();
  }

  int port() const { return port_; }
  std::string base(const std::string& host = "127.0.0.1") const {
    return "http://" + host + ":" + std::to_string(port_);
  }
  std::string url(const std::string& path, const std::string& host = "127.0.0.1") const {
    return base(host) + path;
  }

  int max_in_flight(const std::string& host) const {
    std::lock_guard lock(mu_);
    auto it = max_in_flight_.find(host);
    return it == max_in_flight_.end() ? 0 : it->second;
  }
  int max_in_flight_total() const {
    std::lock_guard lock(mu_);
    return max_total_;
  }
  int requests(const std::string& path) const {
    std::lock_guard lock(mu_);
    auto it = requests_.find(path);
    return it == requests_.end() ? 0 : it->second;
  }
  int slow_hits() const { return slow_hits_; }

 private:
  static std::string host_of(const httplib::Request& req) {
    std::string h = req.get_header_value("Host");
    auto colon = h.rfind(':');
    return colon == std::string::npos ? h : h.substr(0, colon);
  }

  struct Tracked {
    Tracked(Server& s, const httplib::Request& req) : s_(s), host_(host_of(req)) {
      std::lock_guard lock(s_.mu_);
      s_.requests_[req.path]++;
      int now = ++s_.in_flight_[host_];
      s_.max_in_flight_[host_] = std::max(s_.max_in_flight_[host_], now);
      s_.max_total_ = std::max(s_.max_total_, ++s_.total_);
    }
    ~Tracked() {
      std::lock_guard lock(s_.mu_);
      --s_.in_flight_[host_];
      --s_.total_;
    }
    Server& s_;
    std::string host_;
  };

  httplib::Server srv_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<int> slow_hits_{0};
  mutable std::mutex mu_;
  std::map<std::string, int> in_flight_;
  std::map<std::string, int> max_in_flight_;
  std::map<std::string, int> requests_;
  std::map<std::string, int> flaky_seen_;
  int total_ = 0;
  int max_total_ = 0;
};

}  // namespace stub
