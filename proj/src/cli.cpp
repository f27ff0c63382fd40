#include "swcat/cli.hpp"

#include <csignal>
#include <pthread.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "swcat/corpus.hpp"
#include "swcat/error.hpp"
#include "swcat/extraction.hpp"
#include "swcat/fixture.hpp"
#include "swcat/linkcheck.hpp"
#include "swcat/mentions.hpp"
#include "swcat/profiles.hpp"
#include "swcat/server.hpp"
#include "swcat/snapshot.hpp"

namespace swcat::cli {

namespace fs = std::filesystem;

namespace {

using Opt = std::optional<std::string>;

class Summary {
 public:
  explicit Summary(std::ostream& out) : out_(out) {}
  template <typename T>
  Summary& operator()(std::string_view key, const T& value) {
    out_ << key << '=' << value << '\n';
    return *this;
  }

 private:
  std::ostream& out_;
};

struct Context {
  KeyValueConfig cfg;
  std::optional<LoadMode> mode_flag;
  Parallelism par;
  std::ostream& out;
  std::ostream& err;

  LoadMode mode() const {
    if (mode_flag) return *mode_flag;
    std::string m = cfg.get_or("mode", "strict");
    if (m == "strict") return LoadMode::Strict;
    if (m == "lenient") return LoadMode::Lenient;
    throw Error(ErrorCode::InvalidConfig, "mode must be strict or lenient, got '" + m + "'");
  }

  /// Flag value (relative to the working directory) or config value
  /// (relative to the config file).
  std::optional<fs::path> path(const Opt& flag, std::string_view key) const {
    if (flag) return fs::path(*flag);
    if (auto v = cfg.get(key)) return cfg.resolve_path(*v);
    return std::nullopt;
  }
  fs::path required(const Opt& flag, std::string_view key) const {
    auto p = path(flag, key);
    if (!p) {
      throw Error(ErrorCode::InvalidConfig,
                  "no " + std::string(key) + " path: pass --" + std::string(key) + " or set it in --config");
    }
    return *p;
  }
  fs::path input(const Opt& flag, std::string_view key) const {
    fs::path p = required(flag, key);
    if (!fs::is_regular_file(p)) {
      throw Error(ErrorCode::UnreadableFile, std::string(key) + " file not found: " + p.string());
    }
    return p;
  }
  fs::path output(const Opt& flag, std::string_view key) const {
    fs::path p = required(flag, key);
    fs::path dir = p.parent_path();
    if (!dir.empty() && !fs::is_directory(dir)) {
      throw Error(ErrorCode::UnreadableFile, "output directory does not exist: " + dir.string());
    }
    return p;
  }

  RuleConfig rules(const Opt& flag) const {
    auto p = path(flag, "rules");
    if (!p) return RuleConfig::defaults();
    if (!fs::is_regular_file(*p)) throw Error(ErrorCode::UnreadableFile, "rules file not found: " + p->string());
    return RuleConfig::load(*p);
  }

  CheckPolicy link_policy() const {
    KeyValueConfig sub;
    for (const auto& [k, v] : cfg.entries()) {
      if (k.starts_with("linkcheck.")) sub.set(k.substr(10), v);
    }
    return CheckPolicy::from_config(sub);
  }
};

Corpus load_corpus_reporting(const Context& ctx, const fs::path& path, Summary* sum = nullptr) {
  CorpusLoad load;
  try {
    load = load_corpus(path, ctx.mode(), default_max_year(), ctx.par);
  } catch (const MalformedCorpus& e) {
    for (const auto& issue : e.issues()) ctx.err << path.string() << ":" << issue.line << ": " << issue.reason << '\n';
    throw;
  }
  for (const auto& issue : load.issues) {
    ctx.err << path.string() << ":" << issue.line << ": skipped: " << issue.reason << '\n';
  }
  if (sum) (*sum)("lines", load.lines_read)("skipped", load.issues.size());
  return std::move(load.corpus);
}

int cmd_ingest(const Context& ctx, const Opt& corpus_flag) {
  Summary sum(ctx.out);
  fs::path path = ctx.input(corpus_flag, "corpus");
  Corpus corpus = load_corpus_reporting(ctx, path, &sum);
  int min_year = 0, max_year = 0;
  std::size_t peer = 0;
  std::map<PublicationSource, std::size_t> sources;
  std::set<std::string> sections;
  for (const auto& p : corpus.records()) {
    if (min_year == 0 || p.year < min_year) min_year = p.year;
    if (p.year > max_year) max_year = p.year;
    peer += p.peer_reviewed ? 1 : 0;
    ++sources[p.source];
    for (const auto& c : p.msc_codes) sections.insert(msc_section(c));
  }
  sum("publications", corpus.size())("peer_reviewed", peer);
  for (auto s : {PublicationSource::Reviewed, PublicationSource::Proceedings, PublicationSource::Report}) {
    sum("source." + std::string(to_string(s)), sources[s]);
  }
  sum("msc_sections", sections.size())("year_min", min_year)("year_max", max_year);
  return 0;
}

int cmd_extract(const Context& ctx, const Opt& corpus_flag, const Opt& rules_flag, const Opt& worklist_flag) {
  Summary sum(ctx.out);
  fs::path corpus_path = ctx.input(corpus_flag, "corpus");
  RuleConfig rules = ctx.rules(rules_flag);
  fs::path worklist = ctx.output(worklist_flag, "worklist");
  Corpus corpus = load_corpus_reporting(ctx, corpus_path, &sum);
  auto hits = extract_corpus(corpus, rules, ctx.par);
  auto candidates = merge_candidates(hits);
  write_worklist(worklist, candidates);
  sum("publications", corpus.size())("hits", hits.size())("candidates", candidates.size());
  return 0;
}

int cmd_curate(const Context& ctx, const Opt& worklist_flag, const Opt& curation_flag, const Opt& catalog_flag) {
  Summary sum(ctx.out);
  fs::path worklist = ctx.input(worklist_flag, "worklist");
  fs::path curation = ctx.input(curation_flag, "curation");
  fs::path catalog = ctx.output(catalog_flag, "catalog");
  auto candidates = read_worklist(worklist);
  auto decisions = load_curation(curation);
  auto result = apply_curation(candidates, decisions);
  for (const auto& w : result.warnings) ctx.err << "warning: " << w << '\n';
  write_catalog(catalog, result.accepted);
  sum("candidates", candidates.size())("accepted", result.accepted.size())("rejected", result.rejected.size())(
      "pending", result.pending.size())("warnings", result.warnings.size());
  return 0;
}

int cmd_import(const Context& ctx, const Opt& portals_flag, const Opt& catalog_flag, const Opt& out_flag) {
  Summary sum(ctx.out);
  fs::path portals = ctx.input(portals_flag, "portals");
  fs::path catalog = ctx.input(catalog_flag, "catalog");
  fs::path out = out_flag ? ctx.output(out_flag, "out") : catalog;
  auto records = load_portal_records(portals);
  auto result = import_portal_records(records, load_catalog(catalog));
  for (const auto& c : result.conflicts) {
    ctx.err << "conflict: " << c.sw_id << " keeps " << c.existing_homepage << ", " << c.portal_name
            << " lists " << c.portal_homepage << '\n';
  }
  write_catalog(out, result.catalog);
  sum("portal_records", records.size())("enriched", result.enriched)("created", result.created)(
      "conflicts", result.conflicts.size())("catalog_size", result.catalog.size());
  return 0;
}

int cmd_match(const Context& ctx, const Opt& corpus_flag, const Opt& catalog_flag, const Opt& rules_flag,
              const Opt& mentions_flag, const Opt& dump_flag) {
  Summary sum(ctx.out);
  fs::path corpus_path = ctx.input(corpus_flag, "corpus");
  fs::path catalog_path = ctx.input(catalog_flag, "catalog");
  RuleConfig rules = ctx.rules(rules_flag);
  fs::path mentions = ctx.output(mentions_flag, "mentions");
  std::optional<fs::path> dump;
  if (dump_flag) dump = ctx.output(dump_flag, "dump");

  Corpus corpus = load_corpus_reporting(ctx, corpus_path, &sum);
  auto catalog = load_catalog(catalog_path);
  validate_catalog(catalog);
  Lexicon lexicon = Lexicon::compile(catalog, rules.common_words, rules.triggers);
  auto all = find_all_mentions(corpus, lexicon, ctx.par);
  MentionIndex index;
  for (const auto& m : all) index.add(m.sw_id, m.pub_id);
  write_mention_index(mentions, index);
  if (dump) write_mention_dump(*dump, all);
  sum("patterns", lexicon.entries().size())("mentions", all.size())("pairs", index.pair_count())(
      "software_referenced", index.by_software().size())("publications_referencing", index.by_publication().size());
  return 0;
}

struct BuildFlags {
  Opt corpus, catalog, mentions, snapshot, status_history, built_at, link_template;
  std::optional<int> cloud_size, similar_k;
};

int cmd_build(const Context& ctx, const BuildFlags& f) {
  Summary sum(ctx.out);
  fs::path corpus_path = ctx.input(f.corpus, "corpus");
  fs::path catalog_path = ctx.input(f.catalog, "catalog");
  fs::path mentions_path = ctx.input(f.mentions, "mentions");
  fs::path snapshot_path = ctx.output(f.snapshot, "snapshot");
  auto history = ctx.path(f.status_history, "status_history");

  ProfileOptions opts;
  opts.cloud_size = static_cast<std::size_t>(f.cloud_size.value_or(static_cast<int>(ctx.cfg.get_int("cloud_size", 50))));
  opts.similar_k = static_cast<std::size_t>(f.similar_k.value_or(static_cast<int>(ctx.cfg.get_int("similar_k", 10))));
  if (opts.cloud_size < 1 || opts.similar_k < 1) {
    throw Error(ErrorCode::InvalidConfig, "cloud_size and similar_k must be positive");
  }
  std::string built_at = f.built_at ? *f.built_at
                                    : ctx.cfg.get_or("built_at", format_timestamp(std::chrono::system_clock::now()));
  if (!parse_timestamp(built_at)) {
    throw Error(ErrorCode::InvalidConfig, "built_at must look like 2024-01-31T12:00:00Z: '" + built_at + "'");
  }

  Corpus corpus = load_corpus_reporting(ctx, corpus_path);
  auto catalog = load_catalog(catalog_path);
  validate_catalog(catalog);
  MentionIndex index = read_mention_index(mentions_path);
  ProfileMap profiles = build_profiles(catalog, index, corpus, opts, ctx.par);

  std::map<std::string, LinkStatus> latest;
  if (history && fs::exists(*history)) latest = StatusStore(*history).latest();

  SnapshotInputs in;
  in.catalog = catalog;
  in.corpus = &corpus;
  in.index = &index;
  in.profiles = &profiles;
  in.built_at = built_at;
  in.link_template = f.link_template ? *f.link_template
                                     : ctx.cfg.get_or("link_template", std::string(kDefaultLinkTemplate));
  in.link_status = &latest;
  IndexSnapshot snap = build_snapshot(in);
  save_snapshot(snapshot_path, snap);

  std::size_t quality = 0;
  for (const auto& [_, p] : snap.profiles) quality += p.quality_ok ? 1 : 0;
  sum("software", snap.catalog.size())("quality_ok", quality)("publications", snap.publication_count)(
      "pairs", snap.index.pair_count())("link_statuses", snap.link_status.size())("built_at", snap.built_at);
  return 0;
}

struct LinkFlags {
  Opt catalog, status_history;
  std::optional<int> timeout_ms, retries, backoff_ms, parallelism;
};

int cmd_check_links(const Context& ctx, const LinkFlags& f) {
  Summary sum(ctx.out);
  fs::path catalog_path = ctx.input(f.catalog, "catalog");
  fs::path history = ctx.output(f.status_history, "status_history");
  CheckPolicy policy = ctx.link_policy();
  if (f.timeout_ms) policy.timeout = Millis(*f.timeout_ms);
  if (f.retries) policy.retries = *f.retries;
  if (f.backoff_ms) policy.backoff_base = Millis(*f.backoff_ms);
  if (f.parallelism) policy.global_parallelism = *f.parallelism;
  policy.validate();

  auto catalog = load_catalog(catalog_path);
  StatusStore store(history);
  SweepReport report = run_sweep(catalog, policy, store);
  for (const auto& url : report.newly_dead) ctx.err << "newly dead: " << url << '\n';
  sum("checked", report.checked)("skipped", report.skipped);
  for (auto o : {Outcome::Alive, Outcome::Redirected, Outcome::ClientError, Outcome::ServerError, Outcome::Timeout,
                 Outcome::DnsFailure, Outcome::InvalidUrl}) {
    auto it = report.counts.find(o);
    sum("outcome." + std::string(to_string(o)), it == report.counts.end() ? 0 : it->second);
  }
  sum("newly_dead", report.newly_dead.size());
  return 0;
}

int cmd_serve(const Context& ctx, const Opt& snapshot_flag, const std::string& host, int port) {
  fs::path snapshot_path = ctx.input(snapshot_flag, "snapshot");
  auto snap = std::make_shared<const IndexSnapshot>(load_snapshot(snapshot_path));
  CatalogServer server(snap);

  // Handle SIGINT/SIGTERM on a dedicated thread; server threads inherit
  // the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  int bound = server.bind(host, port);
  std::atomic<bool> signalled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    server.stop();
  });
  Summary(ctx.out)("software", snap->catalog.size())("listening", "http://" + host + ":" + std::to_string(bound));
  ctx.out.flush();
  server.listen();
  if (!signalled) ::kill(::getpid(), SIGTERM);  // release the waiter
  waiter.join();
  return 0;
}

int cmd_export(const Context& ctx, const Opt& snapshot_flag, const Opt& catalog_out, const Opt& profiles_out) {
  Summary sum(ctx.out);
  fs::path snapshot_path = ctx.input(snapshot_flag, "snapshot");
  if (!catalog_out && !profiles_out) {
    throw Error(ErrorCode::InvalidConfig, "export needs --catalog-out and/or --profiles-out");
  }
  std::optional<fs::path> cat_path, prof_path;
  if (catalog_out) cat_path = ctx.output(catalog_out, "catalog-out");
  if (profiles_out) prof_path = ctx.output(profiles_out, "profiles-out");
  IndexSnapshot snap = load_snapshot(snapshot_path);
  if (cat_path) write_catalog(*cat_path, snap.catalog);
  if (prof_path) {
    std::ofstream out(*prof_path, std::ios::binary | std::ios::trunc);
    for (const auto& [_, p] : snap.profiles) out << to_json_line(p) << '\n';
    if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + prof_path->string());
  }
  sum("software", snap.catalog.size())("profiles", prof_path ? snap.profiles.size() : 0);
  return 0;
}

int cmd_demo(const Context& ctx, std::uint64_t seed, const std::string& out_dir, std::size_t usage) {
  FixtureOptions opts;
  opts.seed = seed;
  opts.usage_publications = usage;
  Fixture fx = generate_fixture(opts);
  write_fixture(out_dir, fx);
  Summary(ctx.out)("seed", seed)("publications", fx.publications.size())("planted", fx.planted.size())(
      "distractors", fx.distractor_pub_ids.size())("portal_records", fx.portals.size())("dir", out_dir);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Catalog of mathematical software built from publication metadata.", "swcat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string config_path;
  bool strict = false, lenient = false;
  int threads = 0;
  app.add_option("--config", config_path, "Pipeline config (key = value)");
  auto* strict_opt = app.add_flag("--strict", strict, "Fail on any malformed corpus line (default)");
  app.add_flag("--lenient", lenient, "Skip malformed corpus lines and report them")->excludes(strict_opt);
  app.add_option("--threads", threads, "Worker threads for parallel stages (0 = all cores)")->check(CLI::NonNegativeNumber);

  Opt corpus, rules, worklist, curation, catalog, portals, mentions, dump, import_out, snapshot_flag, catalog_out,
      profiles_out;
  BuildFlags build;
  LinkFlags links;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::uint64_t seed = 42;
  std::string demo_out = "demo";
  std::size_t usage = 100;

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and report statistics");
  ingest->add_option("--corpus", corpus, "Corpus file (JSON lines)");

  auto* extract = app.add_subcommand("extract", "Extract software-name candidates into a curation worklist");
  extract->add_option("--corpus", corpus, "Corpus file");
  extract->add_option("--rules", rules, "Rule config");
  extract->add_option("--worklist", worklist, "Worklist to write");

  auto* curate = app.add_subcommand("curate", "Apply curation decisions to a worklist, producing a catalog");
  curate->add_option("--worklist", worklist, "Worklist file");
  curate->add_option("--curation", curation, "Decisions file");
  curate->add_option("--catalog", catalog, "Catalog to write");

  auto* import = app.add_subcommand("import-portals", "Merge portal listings into the catalog");
  import->add_option("--portals", portals, "Portal records file");
  import->add_option("--catalog", catalog, "Catalog to read");
  import->add_option("--out", import_out, "Catalog to write (default: overwrite --catalog)");

  auto* match = app.add_subcommand("match", "Build the mention index");
  match->add_option("--corpus", corpus, "Corpus file");
  match->add_option("--catalog", catalog, "Catalog file");
  match->add_option("--rules", rules, "Rule config (trigger words, common words)");
  match->add_option("--mentions", mentions, "Mention index to write");
  match->add_option("--dump", dump, "Also write every mention with its span");

  auto* buildc = app.add_subcommand("build", "Build profiles and the index snapshot");
  buildc->add_option("--corpus", build.corpus, "Corpus file");
  buildc->add_option("--catalog", build.catalog, "Catalog file");
  buildc->add_option("--mentions", build.mentions, "Mention index file");
  buildc->add_option("--snapshot", build.snapshot, "Snapshot to write");
  buildc->add_option("--status-history", build.status_history, "Link status history to fold in");
  buildc->add_option("--built-at", build.built_at, "Build timestamp (default: now)");
  buildc->add_option("--link-template", build.link_template, "Publication URL template with {pub_id}");
  buildc->add_option("--cloud-size", build.cloud_size, "Keyword cloud size");
  buildc->add_option("--similar-k", build.similar_k, "Similar software per record");

  auto* check = app.add_subcommand("check-links", "Check every homepage and append to the status history");
  check->add_option("--catalog", links.catalog, "Catalog file");
  check->add_option("--status-history", links.status_history, "Status history file");
  check->add_option("--timeout-ms", links.timeout_ms, "Per-request timeout");
  check->add_option("--retries", links.retries, "Retries after a failed attempt");
  check->add_option("--backoff-ms", links.backoff_ms, "Initial retry backoff");
  check->add_option("--parallelism", links.parallelism, "Concurrent hosts");

  auto* serve = app.add_subcommand("serve", "Serve the catalog HTTP API");
  serve->add_option("--snapshot", snapshot_flag, "Snapshot file");
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str();

  auto* exportc = app.add_subcommand("export", "Write catalog and profiles as JSON lines");
  exportc->add_option("--snapshot", snapshot_flag, "Snapshot file");
  exportc->add_option("--catalog-out", catalog_out, "Catalog file to write");
  exportc->add_option("--profiles-out", profiles_out, "Profiles file to write");

  auto* demo = app.add_subcommand("demo", "Generate the seeded synthetic fixture");
  demo->add_option("--seed", seed, "Seed")->capture_default_str();
  demo->add_option("--out", demo_out, "Output directory")->capture_default_str();
  demo->add_option("--usage-publications", usage, "Publications citing software in abstracts")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    Context ctx{config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path), std::nullopt,
                Parallelism{threads}, out, err};
    if (strict) ctx.mode_flag = LoadMode::Strict;
    if (lenient) ctx.mode_flag = LoadMode::Lenient;

    if (*ingest) return cmd_ingest(ctx, corpus);
    if (*extract) return cmd_extract(ctx, corpus, rules, worklist);
    if (*curate) return cmd_curate(ctx, worklist, curation, catalog);
    if (*import) return cmd_import(ctx, portals, catalog, import_out);
    if (*match) return cmd_match(ctx, corpus, catalog, rules, mentions, dump);
    if (*buildc) return cmd_build(ctx, build);
    if (*check) return cmd_check_links(ctx, links);
    if (*serve) return cmd_serve(ctx, snapshot_flag, host, port);
    if (*exportc) return cmd_export(ctx, snapshot_flag, catalog_out, profiles_out);
    if (*demo) return cmd_demo(ctx, seed, demo_out, usage);
    err << app.help();
    return 1;
  } catch (const MalformedCorpus& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return is_input_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace swcat::cli
