#include <gtest/gtest.h>

#include <sstream>

#include "swcat/cli.hpp"
#include "swcat/snapshot.hpp"
#include "tempdir.hpp"

using testutil::read_file;
using testutil::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = swcat::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (l == line) return true;
  }
  return false;
}

void pipeline(const std::filesystem::path& dir) {
  ASSERT_EQ(run({"demo", "--out", dir.string()}).code, 0);
  std::string cfg = (dir / "swcat.conf").string();
  for (std::vector<std::string> step : {std::vector<std::string>{"ingest"}, {"extract"}, {"curate"}, {"import-portals"},
                                        {"match"}, {"build", "--built-at", "2024-01-01T00:00:00Z"}}) {
    step.insert(step.begin(), {"--config", cfg});
    auto r = run(step);
    ASSERT_EQ(r.code, 0) << step[2] << ": " << r.err;
  }
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"ingest", "--no-such-flag"}).code, 1);
  EXPECT_EQ(run({"--strict", "--lenient", "ingest"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, MissingInputs) {
  EXPECT_EQ(run({"ingest"}).code, 1);
  EXPECT_EQ(run({"ingest", "--corpus", "/nonexistent.jsonl"}).code, 1);
}

TEST(Cli, StrictAndLenientIngest) {
  TempDir dir;
  testutil::write_file(dir / "c.jsonl",
                       R"({"pub_id":"a","title":"t","year":2000,"peer_reviewed":true,"source":"Reviewed"})"
                       "\n{broken\n");
  auto strict = run({"ingest", "--corpus", (dir / "c.jsonl").string()});
  EXPECT_EQ(strict.code, 1);
  EXPECT_NE(strict.err.find(":2"), std::string::npos);
  auto lenient = run({"--lenient", "ingest", "--corpus", (dir / "c.jsonl").string()});
  EXPECT_EQ(lenient.code, 0);
  EXPECT_TRUE(has_line(lenient.out, "publications=1"));
  EXPECT_TRUE(has_line(lenient.out, "skipped=1"));
}

TEST(Cli, FullPipeline) {
  TempDir dir;
  pipeline(dir.path());
  auto snap = swcat::load_snapshot(dir / "snapshot.json");
  EXPECT_EQ(snap.catalog.size(), 26u);
  EXPECT_EQ(snap.built_at, "2024-01-01T00:00:00Z");
  auto worklist = read_file(dir / "worklist.tsv");
  for (auto name : {"singular", "cocoa", "pari/gp", "deal.ii", "z3", "gurobi", "bertini"}) {
    EXPECT_NE(worklist.find(std::string("\n") + name + "\t"), std::string::npos) << name;
  }
  auto exp = run({"export", "--snapshot", (dir / "snapshot.json").string(), "--catalog-out",
                  (dir / "export.jsonl").string(), "--profiles-out", (dir / "profiles.jsonl").string()});
  EXPECT_EQ(exp.code, 0) << exp.err;
  EXPECT_TRUE(has_line(exp.out, "software=26"));
}

TEST(Cli, CurateUnknownNameWarns) {
  TempDir dir;
  pipeline(dir.path());
  std::ofstream(dir / "curation.tsv", std::ios::app) << "nosuch\taccept\tNoSuch\n";
  auto r = run({"--config", (dir / "swcat.conf").string(), "curate"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "warnings=1"));
  EXPECT_NE(r.err.find("nosuch"), std::string::npos);
}

TEST(Cli, ReproducibleSnapshots) {
  TempDir a, b;
  pipeline(a.path());
  pipeline(b.path());
  EXPECT_EQ(read_file(a / "snapshot.json"), read_file(b / "snapshot.json"));
  EXPECT_EQ(read_file(a / "catalog.jsonl"), read_file(b / "catalog.jsonl"));
}

TEST(Cli, BadBuiltAtRejected) {
  TempDir dir;
  pipeline(dir.path());
  auto r = run({"--config", (dir / "swcat.conf").string(), "build", "--built-at", "tuesday"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, CorruptSnapshotIsInputError) {
  TempDir dir;
  testutil::write_file(dir / "s.json", "{\"format_version\": 7}");
  auto r = run({"export", "--snapshot", (dir / "s.json").string(), "--catalog-out", (dir / "c.jsonl").string()});
  EXPECT_EQ(r.code, 1);
}
