// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <httplib.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "random_corpus.hpp"
#include "stub_server.hpp"
#include "swcat/cli.hpp"
#include "swcat/error.hpp"
#include "swcat/extraction.hpp"
#include "swcat/fixture.hpp"
#include "swcat/linkcheck.hpp"
#include "swcat/mentions.hpp"
#include "swcat/profiles.hpp"
#include "swcat/server.hpp"
#include "swcat/snapshot.hpp"
#include "swcat/text.hpp"
#include "tempdir.hpp"

using namespace swcat;
using namespace std::chrono_literals;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr double kMinRecall = 0.9;
constexpr double kMinPrecision = 0.8;
constexpr double kExtractSeconds = 5.0;
constexpr int kRandomCorpora = 100;
constexpr std::size_t kMaxRandomPubs = 500;
constexpr double kWorkedExampleTolerance = 1e-12;
constexpr double kPipelineSeconds = 30.0;
constexpr const char* kBuiltAt = "2024-01-01T00:00:00Z";

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      else detail.str("");
      ok = false;
      detail << what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// demo -> ingest -> extract -> curate -> import-portals -> match -> build
bool run_pipeline(const std::filesystem::path& dir, Check& c, const std::string& threads = "0") {
  auto r = cli({"demo", "--out", dir.string()});
  c.require(r.code == 0, "demo failed: " + r.err);
  if (r.code != 0) return false;
  std::string cfg = (dir / "swcat.conf").string();
  for (std::vector<std::string> step : {std::vector<std::string>{"ingest"}, {"extract"}, {"curate"},
                                        {"import-portals"}, {"match"}, {"build", "--built-at", kBuiltAt}}) {
    step.insert(step.begin(), {"--config", cfg, "--threads", threads});
    auto s = cli(step);
    c.require(s.code == 0, step[4] + " failed: " + s.err);
    if (s.code != 0) return false;
  }
  return true;
}

struct FixtureState {
  Fixture fx;
  Corpus corpus;
  RuleConfig rules;
  std::vector<SoftwareRecord> catalog;
  MentionIndex index;
  ProfileMap profiles;
};

FixtureState fixture_state() {
  FixtureState s;
  s.fx = generate_fixture();
  s.corpus = Corpus(s.fx.publications);
  s.rules = RuleConfig::defaults();
  auto cands = merge_candidates(extract_corpus(s.corpus, s.rules));
  s.catalog = import_portal_records(s.fx.portals, apply_curation(cands, s.fx.curation).accepted).catalog;
  auto lex = Lexicon::compile(s.catalog, s.rules.common_words, s.rules.triggers);
  s.index = build_mention_index(s.corpus, lex);
  s.profiles = build_profiles(s.catalog, s.index, s.corpus);
  return s;
}

void extraction_quality(Check& c) {
  testutil::TempDir a, b;
  for (const auto* dir : {&a, &b}) {
    auto r = cli({"demo", "--seed", "42", "--out", dir->path().string()});
    c.require(r.code == 0, "demo failed");
  }
  auto t0 = Clock::now();
  auto r = cli({"--config", (a / "swcat.conf").string(), "extract"});
  double secs = seconds_since(t0);
  c.require(r.code == 0, "extract failed: " + r.err);
  cli({"--config", (b / "swcat.conf").string(), "extract"});

  auto manifest = json::parse(testutil::read_file(a / "manifest.json"));
  std::set<std::string> planted;
  for (const auto& p : manifest.at("planted")) planted.insert(p.at("normalized_name").get<std::string>());
  auto worklist = read_worklist(a / "worklist.tsv");
  int found = 0;
  for (const auto& cand : worklist) found += planted.count(cand.normalized_name) ? 1 : 0;
  double recall = planted.empty() ? 0.0 : static_cast<double>(found) / static_cast<double>(planted.size());
  double precision = worklist.empty() ? 0.0 : static_cast<double>(found) / static_cast<double>(worklist.size());
  bool same = testutil::read_file(a / "worklist.tsv") == testutil::read_file(b / "worklist.tsv") &&
              testutil::read_file(a / "corpus.jsonl") == testutil::read_file(b / "corpus.jsonl");
  c.require(planted.size() == 25, "manifest lists " + std::to_string(planted.size()) + " planted names");
  c.require(recall >= kMinRecall, "recall below limit");
  c.require(precision >= kMinPrecision, "precision below limit");
  c.require(same, "two seeded runs differ");
  c.require(secs < kExtractSeconds, "extract too slow");
  if (c.ok) {
    c.detail << "recall=" << found << "/" << planted.size() << "=" << recall << " precision=" << found << "/"
             << worklist.size() << "=" << precision << " deterministic=yes extract_s=" << secs;
  }
}

void oracle_equivalence(Check& c) {
  auto s = fixture_state();
  auto lex = Lexicon::compile(s.catalog, s.rules.common_words, s.rules.triggers);
  auto got = oracle::as_keys(find_all_mentions(s.corpus, lex));
  auto want = oracle::mentions(s.corpus, s.catalog, s.rules.common_words, s.rules.triggers);
  c.require(got == want, "fixture: automaton " + std::to_string(got.size()) + " vs oracle " +
                             std::to_string(want.size()) + " mentions");
  std::size_t total = 0, largest = 0;
  auto words = randgen::common_words();
  for (int seed = 0; seed < kRandomCorpora; ++seed) {
    randgen::Generator gen(1000 + static_cast<std::uint64_t>(seed));
    auto cat = gen.catalog();
    auto corpus = gen.corpus(cat, kMaxRandomPubs);
    largest = std::max(largest, corpus.size());
    auto l = Lexicon::compile(cat, words, s.rules.triggers);
    auto g = oracle::as_keys(find_all_mentions(corpus, l));
    auto w = oracle::mentions(corpus, cat, words, s.rules.triggers);
    total += w.size();
    c.require(g == w, "random corpus " + std::to_string(seed) + " differs");
  }
  if (c.ok) {
    c.detail << "fixture mentions=" << want.size() << " random corpora=" << kRandomCorpora
             << " (largest " << largest << " pubs) mentions=" << total << " all equal";
  }
}

void profile_arithmetic(Check& c) {
  auto s = fixture_state();
  std::size_t keywords = 0;
  for (const auto& r : s.catalog) {
    const auto& p = s.profiles.at(r.sw_id);
    auto recount = oracle::keyword_counts(r.sw_id, s.index, s.corpus);
    c.require(p.keyword_cloud.size() == std::min<std::size_t>(recount.size(), 50),
              r.sw_id + ": cloud size");
    std::vector<int> cloud_weights, top_weights;
    for (const auto& kw : p.keyword_cloud) {
      auto it = recount.find(oracle::lower(kw.keyword));
      c.require(it != recount.end() && it->second == kw.weight, r.sw_id + ": weight of '" + kw.keyword + "'");
      cloud_weights.push_back(kw.weight);
      ++keywords;
    }
    for (const auto& [_, n] : recount) top_weights.push_back(n);
    std::sort(top_weights.rbegin(), top_weights.rend());
    top_weights.resize(cloud_weights.size());
    c.require(cloud_weights == top_weights, r.sw_id + ": cloud is not the heaviest keywords");
    int by_year = 0;
    for (const auto& [_, n] : p.references_by_year) by_year += n;
    auto refs = static_cast<int>(s.index.publications_of(r.sw_id).size());
    c.require(by_year == p.total_references && p.total_references == refs, r.sw_id + ": reference sums");
  }
  if (c.ok) c.detail << s.catalog.size() << " software, " << keywords << " cloud weights recounted, sums exact";
}

void similarity_properties(Check& c) {
  auto s = fixture_state();
  std::size_t pairs = 0;
  for (const auto& a : s.catalog) {
    for (const auto& b : s.catalog) {
      if (a.sw_id == b.sw_id) {
        bool threw = false;
        try {
          similarity(a.sw_id, b.sw_id, s.index, s.profiles);
        } catch (const Error& e) {
          threw = e.code() == ErrorCode::SelfComparison;
        }
        c.require(threw, a.sw_id + ": self comparison accepted");
        continue;
      }
      double ab = similarity(a.sw_id, b.sw_id, s.index, s.profiles);
      double ba = similarity(b.sw_id, a.sw_id, s.index, s.profiles);
      c.require(ab == ba, a.sw_id + "/" + b.sw_id + ": asymmetric");
      c.require(ab >= 0.0 && ab <= 1.0, a.sw_id + "/" + b.sw_id + ": out of range");
      ++pairs;
    }
    for (const auto& sim : s.profiles.at(a.sw_id).similar) {
      c.require(sim.sw_id != a.sw_id, a.sw_id + " lists itself as similar");
    }
  }
  MentionIndex idx;
  idx.add("swm:a", "p1");
  idx.add("swm:a", "p2");
  idx.add("swm:b", "p2");
  idx.add("swm:b", "p3");
  ProfileMap pm;
  pm["swm:a"].msc_distribution = {{"13", 2}, {"14", 1}};
  pm["swm:b"].msc_distribution = {{"13", 2}, {"14", 1}};
  double v = similarity("swm:a", "swm:b", idx, pm);
  c.require(std::abs(v - 2.0 / 3.0) <= kWorkedExampleTolerance, "worked example gave " + std::to_string(v));
  if (c.ok) {
    c.detail.precision(17);
    c.detail << pairs << " ordered pairs checked; worked example " << v << " (|err| <= 1e-12)";
  }
}

struct LiveServer {
  CatalogServer server;
  int port;
  std::thread thread;
  explicit LiveServer(std::shared_ptr<const IndexSnapshot> snap) : server(std::move(snap)) {
    port = server.bind("127.0.0.1", 0);
    thread = std::thread([this] { server.listen(); });
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
};

json get_json(httplib::Client& client, const std::string& path, int& status) {
  auto res = client.Get(path);
  if (!res) {
    status = 0;
    return json();
  }
  status = res->status;
  return json::parse(res->body);
}

void quality_filter(Check& c) {
  testutil::TempDir dir;
  if (!run_pipeline(dir.path(), c)) return;
  auto snap = std::make_shared<const IndexSnapshot>(load_snapshot(dir / "snapshot.json"));
  auto fx = generate_fixture();
  LiveServer live(snap);
  httplib::Client client("127.0.0.1", live.port);
  int st = 0;
  std::string report_q = text::normalize_name(fx.report_only);
  std::string portal_q = text::normalize_name(fx.portal_only);

  auto hidden = get_json(client, "/api/software?q=" + report_q, st);
  c.require(st == 200 && hidden.at("total") == 0, fx.report_only + " visible in default search");
  auto shown = get_json(client, "/api/software?q=" + report_q + "&include_unfiltered_quality=true", st);
  c.require(st == 200 && shown.at("total") == 1, fx.report_only + " missing with the filter lifted");
  std::string report_id = shown.at("total") == 1 ? shown["results"][0]["sw_id"].get<std::string>() : "";
  auto detail = get_json(client, "/api/software/" + report_id, st);
  c.require(st == 200 && detail.value("quality_ok", true) == false && detail.value("total_references", 0) > 0,
            fx.report_only + " detail should show references and quality_ok=false");

  auto portal = get_json(client, "/api/software?q=" + portal_q, st);
  c.require(st == 200 && portal.at("total") == 1, fx.portal_only + " missing from default search");
  if (portal.at("total") == 1) {
    auto d = get_json(client, "/api/software/" + portal["results"][0]["sw_id"].get<std::string>(), st);
    c.require(d.value("provenance", "") == "PortalListed" && d.value("total_references", -1) == 0 &&
                  d.value("quality_ok", false),
              fx.portal_only + " should be PortalListed with 0 references and pass");
  }
  if (c.ok) {
    c.detail << fx.report_only << " (" << detail.value("total_references", 0)
             << " Report refs) hidden by default, shown on request; " << fx.portal_only
             << " (PortalListed, 0 refs) listed";
  }
}

void link_checker(Check& c) {
  stub::Server s;
  CheckPolicy policy;
  policy.timeout = 2000ms;
  policy.retries = 2;
  policy.backoff_base = 100ms;

  auto alive = check_url(s.url("/ok"), policy);
  c.require(alive.outcome == Outcome::Alive && alive.attempts == 1, "200 not Alive/1");
  auto redir = check_url(s.url("/redirect"), policy);
  c.require(redir.outcome == Outcome::Redirected && redir.final_url == s.url("/ok") && redir.attempts == 1,
            "301->200 not Redirected(final)");
  auto missing = check_url(s.url("/missing"), policy);
  c.require(missing.outcome == Outcome::ClientError && missing.http_code == 404, "404 not ClientError(404)");
  auto t0 = Clock::now();
  auto slow = check_url(s.url("/slow"), policy);
  double slow_s = seconds_since(t0);
  c.require(slow.outcome == Outcome::Timeout && slow.attempts == 3 && s.slow_hits() == 3,
            "5 s delay gave " + std::string(to_string(slow.outcome)) + " attempts=" + std::to_string(slow.attempts));

  // Per-host serialization during a sweep over two host names.
  testutil::TempDir dir;
  std::vector<SoftwareRecord> cat;
  for (int i = 0; i < 8; ++i) {
    for (const char* host : {"127.0.0.1", "localhost"}) {
      SoftwareRecord r;
      r.sw_id = std::string("swm:") + (host[0] == 'l' ? "l" : "n") + std::to_string(i);
      r.name = r.sw_id;
      r.homepage = s.url("/hold?i=" + std::to_string(i), host);
      cat.push_back(r);
    }
  }
  StatusStore store(dir / "history.log");
  policy.global_parallelism = 4;
  auto report = run_sweep(cat, policy, store);
  int max_a = s.max_in_flight("127.0.0.1"), max_b = s.max_in_flight("localhost");
  c.require(report.counts[Outcome::Alive] == 16, "sweep did not reach every URL");
  c.require(max_a == 1 && max_b == 1, "per-host concurrency " + std::to_string(max_a) + "/" + std::to_string(max_b));
  if (c.ok) {
    c.detail << "Alive/1, Redirected(" << *redir.final_url << "), ClientError(404), Timeout attempts=3 in "
             << slow_s << " s; sweep max in-flight per host = 1 (127.0.0.1, localhost), overall "
             << s.max_in_flight_total();
  }
}

#ifdef SWCAT_CLI_PATH
// Runs the CLI binary as a child with stdout on a pipe.
struct Child {
  pid_t pid = -1;
  FILE* out = nullptr;

  explicit Child(const std::vector<std::string>& args) {
    int fds[2];
    if (pipe(fds) != 0) return;
    pid = fork();
    if (pid == 0) {
      dup2(fds[1], STDOUT_FILENO);
      close(fds[0]);
      close(fds[1]);
      std::vector<char*> argv;
      for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
      argv.push_back(nullptr);
      execv(argv[0], argv.data());
      _exit(127);
    }
    close(fds[1]);
    out = fdopen(fds[0], "r");
  }

  std::string read_line() {
    char buf[512];
    if (out == nullptr || std::fgets(buf, sizeof buf, out) == nullptr) return "";
    std::string s(buf);
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
  }

  int terminate() {
    int status = 0;
    kill(pid, SIGTERM);
    waitpid(pid, &status, 0);
    if (out) fclose(out);
    out = nullptr;
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }
};
#endif

void service_end_to_end(Check& c) {
#ifndef SWCAT_CLI_PATH
  c.require(false, "CLI path not configured");
#else
  testutil::TempDir dir;
  auto t0 = Clock::now();
  if (!run_pipeline(dir.path(), c)) return;
  Child child({SWCAT_CLI_PATH, "serve", "--snapshot", (dir / "snapshot.json").string(), "--port", "0"});
  std::string url;
  for (int i = 0; i < 5; ++i) {
    std::string line = child.read_line();
    if (line.rfind("listening=", 0) == 0) {
      url = line.substr(10);
      break;
    }
  }
  c.require(!url.empty(), "serve did not report its address");
  if (url.empty()) {
    child.terminate();
    return;
  }
  httplib::Client client(url);
  client.set_read_timeout(10, 0);
  auto first = client.Get("/api/software?q=singular");
  auto second = client.Get("/api/software?q=singular");
  double secs = seconds_since(t0);
  auto health = client.Get("/api/health");
  int exit_code = child.terminate();

  c.require(first && first->status == 200, "query failed");
  if (!first || first->status != 200) return;
  auto j = json::parse(first->body);
  std::string top = j["results"].empty() ? "" : j["results"][0]["name"].get<std::string>();
  c.require(top == "SINGULAR", "top result is '" + top + "'");
  c.require(second && second->body == first->body, "repeated request body differs");
  auto snap = load_snapshot(dir / "snapshot.json");
  c.require(health && json::parse(health->body)["software_count"] == snap.catalog.size(),
            "health software_count differs from catalog");
  c.require(secs < kPipelineSeconds, "pipeline too slow");
  c.require(exit_code == 0, "serve exited with " + std::to_string(exit_code));
  if (c.ok) {
    c.detail << "top=" << j["results"][0]["sw_id"].get<std::string>() << " of " << j["total"]
             << " hits; identical bodies; demo->query " << secs << " s; serve exit 0";
  }
#endif
}

void reproducibility(Check& c) {
  testutil::TempDir a, b;
  if (!run_pipeline(a.path(), c, "0") || !run_pipeline(b.path(), c, "1")) return;
  auto sa = testutil::read_file(a / "snapshot.json");
  auto sb = testutil::read_file(b / "snapshot.json");
  c.require(!sa.empty() && sa == sb, "snapshots differ");
  if (c.ok) c.detail << "two runs (all threads vs 1 thread) -> identical " << sa.size() << "-byte snapshots";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Check&)> fn;
  };
  const std::vector<Criterion> criteria{
      {1, "extraction quality", extraction_quality},
      {2, "mention oracle equivalence", oracle_equivalence},
      {3, "profile arithmetic", profile_arithmetic},
      {4, "similarity properties", similarity_properties},
      {5, "quality filter through the API", quality_filter},
      {6, "link checker against stub server", link_checker},
      {7, "service end to end", service_end_to_end},
      {8, "pipeline reproducibility", reproducibility},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    try {
      cr.fn(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " [" << cr.id << "] " << cr.name << ": " << c.detail.str()
              << std::endl;
    failed += c.ok ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
