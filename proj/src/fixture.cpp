#include "swcat/fixture.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>

#include "swcat/error.hpp"
#include "swcat/text.hpp"

namespace swcat {

namespace {

// Bounded draws built directly on the engine output, which the standard
// pins down bit for bit; the std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t v;
    do {
      v = g_();
    } while (v >= limit);
    return v % n;
  }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 g_;
};

struct Domain {
  std::vector<std::string> msc;
  std::vector<std::string> keywords;
  std::vector<std::string> kinds;     // noun phrases ending in a trigger word
  std::vector<std::string> triggers;  // single trigger words
  std::vector<std::string> topics;    // lowercase, no trigger words
  std::vector<std::string> openers;
};

enum DomainId { Algebra, LinearAlgebra, Pde, Optimization, NumberTheory, Groups, Ode, PolySystems, Logic, Symbolic };

const std::vector<Domain>& domains() {
  static const std::vector<Domain> kDomains = {
      {{"13P10", "13D02", "14Q10", "13F20"},
       {"Groebner bases", "free resolutions", "primary decomposition", "polynomial ideals",
        "commutative algebra", "syzygies"},
       {"computer algebra system", "software package", "program"},
       {"system", "package", "software"},
       {"primary decomposition of ideals", "free resolutions of modules", "standard bases in local rings",
        "syzygies of monomial ideals", "invariants of finite groups"},
       {"We study ideals in polynomial rings over fields.", "Algorithms for standard bases are discussed.",
        "We give new bounds for the regularity of homogeneous ideals."}},
      {{"65F10", "65F15", "65F50", "65Y05"},
       {"eigenvalues", "sparse matrices", "iterative methods", "direct solvers", "parallel computing",
        "preconditioning"},
       {"software library", "solver", "package"},
       {"library", "solver", "package"},
       {"large sparse eigenvalue problems", "dense matrix factorizations", "sparse direct factorization",
        "preconditioned iterative methods", "parallel matrix computations"},
       {"We consider large sparse matrices arising from discretizations.",
        "The numerical stability of the factorization is analysed.",
        "Parallel scalability is studied on distributed memory machines."}},
      {{"65N30", "65M60", "35J25", "74S05"},
       {"finite elements", "adaptivity", "elliptic problems", "mesh refinement", "multiphysics"},
       {"finite element library", "software package", "toolbox"},
       {"library", "software", "toolbox"},
       {"adaptive finite element methods", "automated solution of variational problems",
        "coupled multiphysics simulations", "higher order discretizations"},
       {"We discretize elliptic boundary value problems by finite elements.",
        "Adaptive refinement is driven by residual error estimators.",
        "Convergence rates are confirmed by numerical experiments."}},
      {{"90C11", "90C27", "90C57", "90C10"},
       {"mixed integer programming", "branch and bound", "cutting planes", "combinatorial optimization",
        "heuristics"},
       {"solver", "optimization software", "software framework"},
       {"solver", "software"},
       {"mixed integer linear optimization", "constraint integer programming", "large scale scheduling",
        "branch and cut for network design"},
       {"We model the problem as a mixed integer linear program.",
        "Valid inequalities strengthen the linear relaxation.",
        "Computational results on benchmark instances are reported."}},
      {{"11Y16", "11Y40", "11R29", "11Y05"},
       {"number fields", "class groups", "factorization", "integer arithmetic",
        "algorithmic number theory"},
       {"computer algebra system", "library", "software package"},
       {"system", "library", "package"},
       {"class groups of number fields", "fast polynomial arithmetic", "integer factorization",
        "computations in algebraic number fields"},
       {"We compute class groups of imaginary quadratic fields.",
        "Fast algorithms for multiplication of integer polynomials are described.",
        "Tables of fundamental units are given."}},
      {{"20B40", "20D05", "20C40"},
       {"permutation groups", "group theory", "character tables", "finite groups"},
       {"computer algebra system", "software", "program"},
       {"system", "software"},
       {"permutation group algorithms", "character tables of finite groups",
        "computations with finitely presented groups"},
       {"We determine the maximal subgroups of several simple groups.",
        "Our methods rely on base and strong generating sets.",
        "Character tables are computed for groups of moderate order."}},
      {{"65L05", "65L06", "34A34"},
       {"stiff equations", "initial value problems", "differential-algebraic equations", "time integration"},
       {"solver", "software package", "library"},
       {"solver", "package", "library"},
       {"stiff initial value problems", "differential algebraic equations",
        "sensitivity analysis of dynamical models"},
       {"We integrate stiff systems of ordinary differential equations.",
        "Backward differentiation formulas with variable step size are used.",
        "Error control relies on local truncation error estimates."}},
      {{"65H10", "65H20", "14Q99"},
       {"homotopy continuation", "polynomial systems", "numerical algebraic geometry", "witness sets"},
       {"software package", "solver", "program"},
       {"package", "solver", "software"},
       {"numerical irreducible decomposition", "homotopy continuation for polynomial systems",
        "witness sets of algebraic varieties"},
       {"We track solution paths of polynomial homotopies.",
        "Isolated solutions are certified by alpha theory.",
        "Numerical irreducible decompositions are computed for several examples."}},
      {{"68T15", "03B35", "68Q60"},
       {"satisfiability modulo theories", "automated reasoning", "verification", "decision procedures"},
       {"solver", "constraint solver", "solver for satisfiability"},
       {"solver"},
       {"bounded model checking", "symbolic execution", "decision procedures for arithmetic"},
       {"We reduce verification conditions to satisfiability problems.",
        "Decision procedures for linear arithmetic are combined.",
        "Experiments on industrial benchmarks are reported."}},
      {{"68W30", "33F10"},
       {"symbolic computation", "computer algebra", "special functions", "symbolic manipulation"},
       {"computer algebra system", "library", "software"},
       {"system", "library", "software"},
       {"symbolic summation", "simplification of special functions", "symbolic manipulation of expressions"},
       {"We simplify expressions involving special functions.",
        "Closed forms for definite sums are derived.",
        "The implementation handles rational functions efficiently."}},
  };
  return kDomains;
}

struct PlantSpec {
  const char* name;
  DomainId domain;
  bool mid_title_only;  // capitalized words only count as names mid-title
};

constexpr std::array<PlantSpec, 25> kPlanted = {{
    {"SINGULAR", Algebra, false},     {"CoCoA", Algebra, false},        {"Macaulay2", Algebra, false},
    {"LAPACK", LinearAlgebra, false}, {"ARPACK", LinearAlgebra, false}, {"PARDISO", LinearAlgebra, false},
    {"PETSc", LinearAlgebra, false},  {"deal.II", Pde, false},          {"FEniCS", Pde, false},
    {"COMSOL", Pde, false},           {"SCIP", Optimization, false},    {"CPLEX", Optimization, false},
    {"Gurobi", Optimization, true},   {"PARI/GP", NumberTheory, false}, {"KASH", NumberTheory, false},
    {"NTL", NumberTheory, false},     {"FLINT", NumberTheory, false},   {"GAP", Groups, false},
    {"SUNDIALS", Ode, false},         {"CVODE", Ode, false},            {"Bertini", PolySystems, true},
    {"PHCpack", PolySystems, false},  {"Z3", Logic, false},             {"MuPAD", Symbolic, false},
    {"GiNaC", Symbolic, false},
}};

constexpr const char* kReportOnly = "KASH";
constexpr const char* kPortalOnly = "Maple";

const std::vector<std::string>& distractor_titles() {
  static const std::vector<std::string> kTitles = {
      "On the convergence of gradient descent",
      "A fast solver for sparse linear systems",
      "Stability of explicit schemes for hyperbolic equations",
      "Krylov subspace methods for shifted linear systems",
      "Error bounds for polynomial interpolation at Chebyshev points",
      "Hilbert series of monomial ideals",
      "A note on the Riemann hypothesis for function fields",
      "Lattice reduction and integer relation detection",
      "Adaptive mesh refinement for elliptic problems",
      "Convex relaxations of quadratic programs",
      "Regularity of solutions to the Euler equations",
      "Random walks on finite groups",
      "Spectral methods for the Schrödinger equation",
      "A posteriori error estimates for mixed methods",
      "Counting points on elliptic curves over finite fields",
      "Semidefinite programming bounds for codes",
      "Homotopy methods for eigenvalue problems",
      "Fast multipole methods in three dimensions",
      "The structure of permutation groups of small degree",
      "Sparse grids for high-dimensional integration",
      "Cutting planes for mixed-integer nonlinear programs",
      "On the complexity of deciding satisfiability",
      "Preconditioning saddle point systems",
      "Optimal control of parabolic equations",
      "Interval arithmetic and verified computing",
      "Symbolic summation of hypergeometric terms",
      "Modular forms of half-integral weight",
      "A survey of time integration schemes",
      "Domain decomposition for the Helmholtz equation",
      "Numerical continuation of periodic orbits",
      "Tropical geometry and polynomial systems",
      "A program for teaching calculus",
      "Rounding errors in floating-point summation",
      "Toric ideals of graphs",
      "Resultants and elimination theory",
      "Branching rules for integer programming",
      "Lagrange multipliers in infinite dimensions",
      "Perfectly matched layers for wave propagation",
      "Class groups of quadratic fields",
      "Stiff differential equations and implicit methods",
      "The tool of duality in convex analysis",
      "Low-rank tensor approximation",
      "Graph colouring by local search",
      "Exact arithmetic for computational geometry",
      "Galois groups of trinomials",
      "Mortar methods on nonmatching grids",
      "Inverse problems with sparsity constraints",
      "Newton iterations for matrix roots",
      "Cohomology of arithmetic groups",
      "Discontinuous Galerkin methods for conservation laws",
      "Proof certificates for real algebraic geometry",
      "Iterative refinement in mixed precision",
      "Parallel sorting on distributed memory machines",
      "Smoothed analysis of the simplex method",
      "A system of equations from chemical kinetics",
      "Certified numerics for ordinary differential equations",
  };
  return kTitles;
}

// Titles that look like software announcements but name none.
struct Trap {
  const char* title;
  const char* normalized;
};
constexpr std::array<Trap, 3> kTraps = {{
    {"An FEM code for elastic plates", "fem"},
    {"A GPU library for sparse tensor contractions", "gpu"},
    {"A Galerkin solver for convection problems", "galerkin"},
}};

const std::vector<std::string>& author_pool() {
  static const std::vector<std::string> kAuthors = {
      "Becker, A.",   "Chen, L.",     "Dubois, M.",   "Eriksson, K.", "Fischer, T.",  "Garcia, R.",
      "Hansen, P.",   "Ito, S.",      "Jansen, E.",   "Kowalski, J.", "Lindqvist, O.", "Moreau, C.",
      "Nakamura, Y.", "Olsen, H.",    "Petrov, D.",   "Quinn, F.",    "Rossi, G.",    "Schulz, B.",
      "Tanaka, M.",   "Ulrich, W.",   "Varga, Z.",    "Wagner, S.",   "Xu, Q.",       "Yilmaz, E.",
      "Zhang, W.",    "Müller, J.",   "Nørgaard, I.", "Ortiz, V.",    "Park, J.",     "Richter, N.",
  };
  return kAuthors;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] >= 'a' && s[0] <= 'z' ? s[0] - 'a' + 'A' : s[0]);
  return s;
}

std::string article(const std::string& noun) {
  return std::string("aeiou").find(noun[0]) != std::string::npos ? "an" : "a";
}

class Builder {
 public:
  explicit Builder(std::uint64_t seed) : rng_(seed) {}

  Rng& rng() { return rng_; }

  PublicationRecord make(const std::string& title, DomainId d, PublicationSource source) {
    const Domain& dom = domains()[d];
    PublicationRecord p;
    p.year = rng_.between(1995, 2015);
    p.pub_id = fresh_id(p.year);
    p.title = title;
    p.source = source;
    p.peer_reviewed = source == PublicationSource::Reviewed ||
                      (source == PublicationSource::Proceedings && rng_.chance(50));

    std::vector<std::string> kw = dom.keywords;
    rng_.shuffle(kw);
    kw.resize(static_cast<std::size_t>(rng_.between(2, 4)));
    for (auto& k : kw) {
      if (rng_.chance(15)) k = text::ascii_lower(k);
    }
    p.keywords = kw;

    std::vector<std::string> msc = dom.msc;
    rng_.shuffle(msc);
    msc.resize(static_cast<std::size_t>(rng_.between(1, 2)));
    if (rng_.chance(20)) {
      const std::string& extra = rng_.pick(domains()[rng_.below(domains().size())].msc);
      if (std::find(msc.begin(), msc.end(), extra) == msc.end()) msc.push_back(extra);
    }
    p.msc_codes = msc;

    std::vector<std::string> authors = author_pool();
    rng_.shuffle(authors);
    authors.resize(static_cast<std::size_t>(rng_.between(1, 3)));
    p.authors = authors;
    return p;
  }

  PublicationSource usage_source() {
    auto r = rng_.below(10);
    return r < 7 ? PublicationSource::Reviewed : r < 9 ? PublicationSource::Proceedings : PublicationSource::Report;
  }

 private:
  std::string fresh_id(int year) {
    for (;;) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%04d.%05d", year, rng_.between(10000, 99999));
      if (ids_.insert(buf).second) return buf;
    }
  }

  Rng rng_;
  std::set<std::string> ids_;
};

std::string planted_title(Rng& rng, const PlantSpec& spec, int form) {
  const Domain& dom = domains()[spec.domain];
  const std::string name = spec.name;
  const std::string kind = rng.pick(dom.kinds);
  const std::string topic = rng.pick(dom.topics);
  const std::string trig = rng.pick(dom.triggers);
  switch (form) {
    case 0:
      return name + ": " + article(kind) + " " + kind + " for " + topic;
    case 1:
      return name + " - " + article(kind) + " " + kind + " for " + topic;
    case 2:
      return name + ": " + topic + " with " + article(kind) + " " + kind;
    case 3:
      return capitalize(topic) + " with the " + name + " " + trig;
    case 4:
      return "Solving " + topic + " using " + name + " " + trig;
    default:
      return "On " + topic + " via the " + name + " " + trig;
  }
}

std::string mention_sentence(Rng& rng, const PlantSpec& spec) {
  const Domain& dom = domains()[spec.domain];
  const std::string name = spec.name;
  // Names of at most two characters only match next to a trigger word or
  // a version number.
  const bool needs_context = text::utf8_length(name) <= 2;
  switch (rng.below(needs_context ? 2 : 4)) {
    case 0:
      return "All examples were computed with the " + name + " " + rng.pick(dom.triggers) + ".";
    case 1:
      return "Timings obtained with " + name + " " + std::to_string(rng.between(1, 9)) + "." +
             std::to_string(rng.between(0, 12)) + " are reported.";
    case 2:
      return "Computations were carried out with " + name + ".";
    default:
      return "We compare our implementation with " + name + ".";
  }
}

}  // namespace

Fixture generate_fixture(const FixtureOptions& options) {
  Fixture fx;
  fx.seed = options.seed;
  fx.report_only = kReportOnly;
  fx.portal_only = kPortalOnly;
  Builder b(options.seed);
  Rng& rng = b.rng();
  std::vector<PublicationRecord> pubs;

  for (const auto& spec : kPlanted) {
    const bool report = std::string_view(spec.name) == kReportOnly;
    std::vector<int> forms = spec.mid_title_only ? std::vector<int>{3, 4, 5} : std::vector<int>{0, 1, 2, 3, 4, 5};
    rng.shuffle(forms);
    PlantedName planted{spec.name, text::normalize_name(spec.name), {}};
    for (int i = 0; i < 2; ++i) {
      auto pub = b.make(planted_title(rng, spec, forms[i]), spec.domain,
                        report ? PublicationSource::Report : PublicationSource::Reviewed);
      pub.abstract_text = rng.pick(domains()[spec.domain].openers);
      planted.title_pub_ids.push_back(pub.pub_id);
      pubs.push_back(std::move(pub));
    }
    fx.planted.push_back(std::move(planted));
  }

  std::vector<std::string> titles = distractor_titles();
  rng.shuffle(titles);
  titles.resize(50 - kTraps.size());
  for (const auto& t : kTraps) {
    titles.push_back(t.title);
    fx.trap_names.push_back(t.normalized);
  }
  for (const auto& t : titles) {
    auto d = static_cast<DomainId>(rng.below(domains().size()));
    auto pub = b.make(t, d, b.usage_source());
    pub.abstract_text = rng.pick(domains()[d].openers);
    fx.distractor_pub_ids.push_back(pub.pub_id);
    pubs.push_back(std::move(pub));
  }

  static const std::vector<std::string> kUsageForms = {
      "On {}", "Remarks on {}", "Computational aspects of {}", "Experiments with {}", "New results on {}",
      "Notes on {}"};
  std::vector<const PlantSpec*> by_domain[10];
  for (const auto& spec : kPlanted) {
    if (std::string_view(spec.name) != kReportOnly) by_domain[spec.domain].push_back(&spec);
  }
  for (std::size_t i = 0; i < options.usage_publications; ++i) {
    auto d = static_cast<DomainId>(rng.below(domains().size()));
    std::string form = rng.pick(kUsageForms);
    std::string title = form.replace(form.find("{}"), 2, rng.pick(domains()[d].topics));
    auto pub = b.make(title, d, b.usage_source());

    std::vector<const PlantSpec*> chosen = by_domain[d];
    rng.shuffle(chosen);
    chosen.resize(std::min<std::size_t>(chosen.size(), static_cast<std::size_t>(rng.between(1, 3))));
    if (rng.chance(15)) {
      auto other = static_cast<DomainId>(rng.below(domains().size()));
      const PlantSpec* extra = rng.pick(by_domain[other]);
      if (std::find(chosen.begin(), chosen.end(), extra) == chosen.end()) chosen.push_back(extra);
    }
    std::string abstract = rng.pick(domains()[d].openers);
    for (const PlantSpec* s : chosen) abstract += " " + mention_sentence(rng, *s);
    pub.abstract_text = abstract;
    pubs.push_back(std::move(pub));
  }
  rng.shuffle(pubs);
  fx.publications = std::move(pubs);

  fx.portals = {
      {"Guide to Available Mathematical Software", "Maple", "https://www.maplesoft.com/products/maple/",
       "Commercial computer algebra system for symbolic and numeric computation."},
      {"Guide to Available Mathematical Software", "Singular", "https://www.singular.uni-kl.de/",
       "Computer algebra system for polynomial computations."},
      {"Netlib", "LAPACK", "https://www.netlib.org/lapack/", "Routines for dense numerical linear algebra."},
      {"Guide to Available Mathematical Software", "GAP", "https://www.gap-system.org/",
       "System for computational discrete algebra."},
  };

  for (const auto& p : fx.planted) {
    fx.curation.push_back({p.normalized_name, CurationDecision::Verdict::Accept, p.name});
  }
  for (const auto& t : fx.trap_names) {
    fx.curation.push_back({t, CurationDecision::Verdict::Reject, ""});
  }
  return fx;
}

std::string manifest_json(const Fixture& fx) {
  nlohmann::ordered_json j;
  j["seed"] = fx.seed;
  j["publication_count"] = fx.publications.size();
  j["planted"] = nlohmann::ordered_json::array();
  for (const auto& p : fx.planted) {
    j["planted"].push_back(
        {{"name", p.name}, {"normalized_name", p.normalized_name}, {"title_pub_ids", p.title_pub_ids}});
  }
  j["distractor_pub_ids"] = fx.distractor_pub_ids;
  j["trap_names"] = fx.trap_names;
  j["report_only"] = fx.report_only;
  j["portal_only"] = fx.portal_only;
  return j.dump(2) + "\n";
}

std::string curation_text(const Fixture& fx) {
  std::string out = "# normalized_name\tverdict\tcanonical_name\n";
  for (const auto& d : fx.curation) {
    if (d.verdict == CurationDecision::Verdict::Accept) {
      out += d.normalized_name + "\taccept\t" + d.canonical_name + "\n";
    } else {
      out += d.normalized_name + "\treject\n";
    }
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
}

}  // namespace

void write_fixture(const std::filesystem::path& dir, const Fixture& fx) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::UnreadableFile, "cannot create " + dir.string() + ": " + ec.message());
  write_corpus(dir / "corpus.jsonl", Corpus(fx.publications));
  write_portal_records(dir / "portals.jsonl", fx.portals);
  write_text(dir / "curation.tsv", curation_text(fx));
  write_text(dir / "manifest.json", manifest_json(fx));

  std::string triggers;
  for (const auto& t : RuleConfig::default_triggers().sorted()) {
    triggers += (triggers.empty() ? "" : ", ") + t;
  }
  RuleWeights w;
  char weights[256];
  std::snprintf(weights, sizeof weights, "weight.r1 = %g\nweight.r2 = %g\nweight.r3 = %g\nweight.r4 = %g\n",
                w.colon_pattern, w.trigger_adjacency, w.version_suffix, w.definite_phrase);
  write_text(dir / "rules.conf", "# extraction rules\ntrigger_words = " + triggers + "\n" + weights);

  write_text(dir / "swcat.conf",
             "# demo pipeline\n"
             "corpus = corpus.jsonl\n"
             "portals = portals.jsonl\n"
             "curation = curation.tsv\n"
             "rules = rules.conf\n"
             "worklist = worklist.tsv\n"
             "catalog = catalog.jsonl\n"
             "mentions = mentions.tsv\n"
             "snapshot = snapshot.json\n"
             "status_history = link_status.log\n"
             "cloud_size = 50\n"
             "similar_k = 10\n"
             "link_template = https://zbmath.org/?q=an:{pub_id}\n"
             "linkcheck.timeout_ms = 10000\n"
             "linkcheck.retries = 2\n"
             "linkcheck.backoff_ms = 1000\n"
             "linkcheck.parallelism = 8\n");
}

}  // namespace swcat
