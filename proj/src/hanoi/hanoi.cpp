#include "ontomem/hanoi/hanoi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/turtle/turtle.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::hanoi {

using rdf::Term;
using rdf::Triple;

namespace {

Term h(const std::string& local) { return Term::iri(std::string(kNs) + local); }
Term disk(int i) { return h("disk" + std::to_string(i)); }
Term peg(int p) { return h("peg" + std::to_string(p)); }
Term rdf_type() { return Term::iri(vocab::rdf::type); }

bool valid_peg(int p) { return p >= 0 && p <= 2; }

void check_n(int n) {
  if (n < 1) throw InputError("disk count must be at least 1, got " + std::to_string(n));
}

int parse_peg(std::string_view s) {
  if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'C') return s[0] - 'A';
  if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'c') return s[0] - 'a';
  if (s.empty() || s.size() > 3 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw InputError("bad peg '" + std::string(s) + "'");
  }
  return std::stoi(std::string(s));
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Move random_move(std::mt19937_64& rng) {
  int from = static_cast<int>(rng() % 3);
  int to = (from + 1 + static_cast<int>(rng() % 2)) % 3;
  return {from, to};
}

}  // namespace

HanoiState HanoiState::tower(int n, int p) {
  check_n(n);
  if (!valid_peg(p)) throw InputError("peg must be 0, 1 or 2");
  return {n, std::vector<int>(static_cast<std::size_t>(n), p)};
}

std::optional<int> HanoiState::top(int p) const {
  for (int i = 0; i < n; ++i) {
    if (peg_of[i] == p) return i;
  }
  return std::nullopt;
}

std::string HanoiState::to_string() const {
  std::string out = "[";
  for (int i = 0; i < n; ++i) out += (i ? "," : "") + std::to_string(peg_of[i]);
  return out + "]";
}

std::string Move::to_string() const { return std::to_string(from) + "->" + std::to_string(to); }

std::string plan_to_string(const Plan& plan) {
  std::string out;
  for (const auto& m : plan) out += (out.empty() ? "" : " ") + m.to_string();
  return out;
}

Plan parse_plan(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  Plan plan;
  for (const auto& tok : util::split_ws(s)) {
    auto arrow = tok.find("->");
    if (arrow == std::string::npos) throw InputError("expected 'from->to', got '" + tok + "'");
    plan.push_back({parse_peg(std::string_view(tok).substr(0, arrow)), parse_peg(std::string_view(tok).substr(arrow + 2))});
  }
  return plan;
}

std::string_view to_string(ViolationReason r) {
  switch (r) {
    case ViolationReason::EmptySource: return "EMPTY_SOURCE";
    case ViolationReason::LargerOnSmaller: return "LARGER_ON_SMALLER";
    case ViolationReason::SamePeg: return "SAME_PEG";
    case ViolationReason::Malformed: return "MALFORMED";
    case ViolationReason::GoalMiss: return "GOAL_MISS";
  }
  return "?";
}

std::vector<Move> legal_moves(const HanoiState& s) {
  std::vector<Move> out;
  for (int f = 0; f < 3; ++f) {
    auto tf = s.top(f);
    if (!tf) continue;
    for (int t = 0; t < 3; ++t) {
      if (t == f) continue;
      auto tt = s.top(t);
      if (!tt || *tt > *tf) out.push_back({f, t});
    }
  }
  return out;
}

std::variant<HanoiState, Violation> apply(const HanoiState& s, const Move& m, std::size_t index) {
  if (!valid_peg(m.from) || !valid_peg(m.to)) {
    return Violation{index, ViolationReason::Malformed, "move " + m.to_string() + " names a peg outside 0-2"};
  }
  if (m.from == m.to) return Violation{index, ViolationReason::SamePeg, "move " + m.to_string() + " stays on one peg"};
  auto tf = s.top(m.from);
  if (!tf) return Violation{index, ViolationReason::EmptySource, "peg " + std::to_string(m.from) + " is empty"};
  auto tt = s.top(m.to);
  if (tt && *tt < *tf) {
    return Violation{index, ViolationReason::LargerOnSmaller,
                     "disk " + std::to_string(*tf) + " cannot go on disk " + std::to_string(*tt)};
  }
  HanoiState next = s;
  next.peg_of[static_cast<std::size_t>(*tf)] = m.to;
  return next;
}

std::variant<HanoiState, Violation> verify_plan(const HanoiState& start, const Plan& plan, const HanoiState& goal) {
  if (start.n != goal.n) throw InputError("start and goal have different disk counts");
  HanoiState s = start;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    auto r = apply(s, plan[i], i);
    if (auto* v = std::get_if<Violation>(&r)) return *v;
    s = std::get<HanoiState>(std::move(r));
  }
  if (s != goal) {
    return Violation{plan.size(), ViolationReason::GoalMiss, "plan ends in " + s.to_string() + ", goal is " + goal.to_string()};
  }
  return s;
}

namespace {

void tower_moves(int k, int from, int to, Plan& out) {
  if (k < 0) return;
  int via = 3 - from - to;
  tower_moves(k - 1, from, via, out);
  out.push_back({from, to});
  tower_moves(k - 1, via, to, out);
}

// Gathers disks 0..k onto `to`, updating s as it goes.
void gather(HanoiState& s, int k, int to, Plan& out) {
  if (k < 0) return;
  int at = s.peg_of[static_cast<std::size_t>(k)];
  if (at == to) {
    gather(s, k - 1, to, out);
    return;
  }
  int via = 3 - at - to;
  gather(s, k - 1, via, out);
  out.push_back({at, to});
  s.peg_of[static_cast<std::size_t>(k)] = to;
  tower_moves(k - 1, via, to, out);
  for (int i = 0; i < k; ++i) s.peg_of[static_cast<std::size_t>(i)] = to;
}

}  // namespace

Plan solve_optimal(int n, int from, int to) {
  check_n(n);
  if (!valid_peg(from) || !valid_peg(to)) throw InputError("peg must be 0, 1 or 2");
  Plan out;
  if (from != to) tower_moves(n - 1, from, to, out);
  return out;
}

Plan solve_from(const HanoiState& s, int to) {
  if (!valid_peg(to)) throw InputError("peg must be 0, 1 or 2");
  HanoiState work = s;
  Plan out;
  gather(work, s.n - 1, to, out);
  return out;
}

rdf::Graph state_to_graph(const HanoiState& s) {
  rdf::Graph g;
  for (int p = 0; p < 3; ++p) {
    g.insert(Triple(peg(p), rdf_type(), h("Peg")));
    for (int i = 0; i < s.n; ++i) g.insert(Triple(peg(p), rdf_type(), h("CanHold" + std::to_string(i))));
  }
  for (int i = 0; i < s.n; ++i) {
    int p = s.peg_of[static_cast<std::size_t>(i)];
    g.insert(Triple(disk(i), rdf_type(), h("Disk")));
    g.insert(Triple(disk(i), rdf_type(), h("Size" + std::to_string(i))));
    g.insert(Triple(disk(i), h("size"), Term::integer(i + 1)));
    g.insert(Triple(disk(i), h("onPeg"), peg(p)));
    Term below = peg(p);
    for (int j = i + 1; j < s.n; ++j) {
      if (s.peg_of[static_cast<std::size_t>(j)] == p) {
        below = disk(j);
        break;
      }
    }
    g.insert(Triple(disk(i), h("restsOn"), below));
    for (int j = i + 1; j < s.n; ++j) {
      g.insert(Triple(disk(i), h("smallerThan"), disk(j)));
      g.insert(Triple(disk(j), rdf_type(), h("CanHold" + std::to_string(i))));
    }
  }
  return g;
}

std::vector<shacl::NodeShape> hanoi_shapes(int n) {
  check_n(n);
  std::string ttl =
      "@prefix sh: <http://www.w3.org/ns/shacl#> .\n"
      "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
      "@prefix hanoi: <" + std::string(kNs) + "> .\n"
      "hanoi:DiskShape a sh:NodeShape ; sh:targetClass hanoi:Disk ;\n"
      "  sh:property hanoi:DiskPeg , hanoi:DiskSize , hanoi:DiskBelow .\n"
      "hanoi:DiskPeg sh:path hanoi:onPeg ; sh:minCount 1 ; sh:maxCount 1 ; sh:class hanoi:Peg .\n"
      "hanoi:DiskSize sh:path hanoi:size ; sh:minCount 1 ; sh:maxCount 1 ; sh:datatype xsd:integer .\n"
      "hanoi:DiskBelow sh:path hanoi:restsOn ; sh:minCount 1 ; sh:maxCount 1 .\n"
      "hanoi:MoveShape a sh:NodeShape ; sh:targetClass hanoi:Move ;\n"
      "  sh:property hanoi:MoveDisk , hanoi:MoveFrom , hanoi:MoveTo .\n"
      "hanoi:MoveDisk sh:path hanoi:movedDisk ; sh:minCount 1 ; sh:maxCount 1 ; sh:class hanoi:Disk .\n"
      "hanoi:MoveFrom sh:path hanoi:fromPeg ; sh:minCount 1 ; sh:maxCount 1 ; sh:class hanoi:Peg .\n"
      "hanoi:MoveTo sh:path hanoi:toPeg ; sh:minCount 1 ; sh:maxCount 1 ; sh:class hanoi:Peg .\n";
  for (int i = 0; i < n; ++i) {
    std::string k = std::to_string(i);
    ttl += "hanoi:Size" + k + "Shape a sh:NodeShape ; sh:targetClass hanoi:Size" + k + " ; sh:property hanoi:Size" + k +
           "Below .\nhanoi:Size" + k + "Below sh:path hanoi:restsOn ; sh:class hanoi:CanHold" + k + " .\n";
  }
  return shacl::parse_shapes_or_throw(turtle::parse_turtle_or_throw(ttl, "hanoi shapes").graph);
}

rdf::Graph apply_to_graph(const rdf::Graph& g, int n, const Move& m) {
  rdf::Graph out = g;
  const Term move = h("lastMove");
  for (const auto& t : out.match(move, std::nullopt, std::nullopt)) out.remove(t);

  // Top of a peg as the graph has it: a disk there with no smaller disk there.
  auto top = [&](int p) -> std::optional<Term> {
    std::optional<Term> best;
    for (int i = 0; i < n; ++i) {
      if (!out.contains(Triple(disk(i), h("onPeg"), peg(p)))) continue;
      bool covered = false;
      for (int j = 0; j < n && !covered; ++j) {
        covered = j != i && out.contains(Triple(disk(j), h("onPeg"), peg(p))) &&
                  out.contains(Triple(disk(j), h("smallerThan"), disk(i)));
      }
      if (!covered) best = disk(i);
    }
    return best;
  };

  out.insert(Triple(move, rdf_type(), h("Move")));
  out.insert(Triple(move, h("fromPeg"), peg(m.from)));
  out.insert(Triple(move, h("toPeg"), peg(m.to)));
  auto moved = top(m.from);
  if (!moved) return out;
  Term below = top(m.to).value_or(peg(m.to));
  out.insert(Triple(move, h("movedDisk"), *moved));
  for (const auto& t : out.match(*moved, h("onPeg"), std::nullopt)) out.remove(t);
  for (const auto& t : out.match(*moved, h("restsOn"), std::nullopt)) out.remove(t);
  out.insert(Triple(*moved, h("onPeg"), peg(m.to)));
  out.insert(Triple(*moved, h("restsOn"), below));
  return out;
}

namespace {

class OptimalProposer : public Proposer {
 public:
  std::string id() const override { return "optimal"; }
  Plan propose(int, const HanoiState& start, const HanoiState& goal, const std::vector<Violation>&,
               std::mt19937_64&) override {
    return solve_from(start, goal.peg_of.at(0));
  }
};

class RandomLegalProposer : public Proposer {
 public:
  explicit RandomLegalProposer(int cap) : cap_(cap) {}
  std::string id() const override { return "random_legal"; }
  Plan propose(int, const HanoiState& start, const HanoiState& goal, const std::vector<Violation>&,
               std::mt19937_64& rng) override {
    Plan plan;
    HanoiState s = start;
    while (static_cast<int>(plan.size()) < cap_ && s != goal) {
      auto moves = legal_moves(s);
      Move m = moves[rng() % moves.size()];
      plan.push_back(m);
      s = std::get<HanoiState>(apply(s, m));
    }
    return plan;
  }

 private:
  int cap_;
};

// The optimal continuation with each move swapped for a random one with
// probability p. A repair keeps the legal prefix of the previous plan.
class CorruptedProposer : public Proposer {
 public:
  CorruptedProposer(double p, std::string id) : p_(p), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  Plan propose(int, const HanoiState& start, const HanoiState& goal, const std::vector<Violation>& feedback,
               std::mt19937_64& rng) override {
    Plan plan;
    HanoiState s = start;
    if (!feedback.empty() && last_start_ && *last_start_ == start) {
      std::size_t k = std::min(feedback.back().move_index, last_.size());
      for (std::size_t i = 0; i < k; ++i) {
        auto r = apply(s, last_[i], i);
        if (std::holds_alternative<Violation>(r)) break;
        s = std::get<HanoiState>(std::move(r));
        plan.push_back(last_[i]);
      }
    }
    for (const auto& m : solve_from(s, goal.peg_of.at(0))) plan.push_back(unit(rng) < p_ ? random_move(rng) : m);
    last_start_ = start;
    last_ = plan;
    return plan;
  }

 private:
  double p_;
  std::string id_;
  std::optional<HanoiState> last_start_;
  Plan last_;
};

class TranscriptProposer : public Proposer {
 public:
  explicit TranscriptProposer(std::vector<Plan> plans) : plans_(std::move(plans)) {}
  std::string id() const override { return "transcript"; }
  Plan propose(int, const HanoiState&, const HanoiState&, const std::vector<Violation>&, std::mt19937_64&) override {
    // An exhausted transcript answers with an empty plan.
    return next_ < plans_.size() ? plans_[next_++] : Plan{};
  }

 private:
  std::vector<Plan> plans_;
  std::size_t next_ = 0;
};

std::vector<Plan> read_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TranscriptError("cannot read transcript " + path);
  std::vector<Plan> plans;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = util::trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      plans.push_back(parse_plan(t));
    } catch (const InputError& e) {
      throw TranscriptError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return plans;
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

}  // namespace

ProposerSpec ProposerSpec::parse(std::string_view text) {
  std::string s(util::trim(text));
  auto colon = s.find(':');
  std::string name = util::to_lower(s.substr(0, colon));
  std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  ProposerSpec spec;
  if (name == "optimal" && arg.empty()) {
    spec.kind = ProposerKind::Optimal;
  } else if (name == "random" || name == "random_legal") {
    spec.kind = ProposerKind::RandomLegal;
    if (!arg.empty()) {
      try {
        spec.move_cap = std::stoi(arg);
      } catch (const std::exception&) {
        spec.move_cap = -1;
      }
      if (spec.move_cap < 1) throw ConfigError("random proposer cap must be a positive integer: " + s);
    }
  } else if (name == "corrupted") {
    spec.kind = ProposerKind::Corrupted;
    std::size_t used = 0;
    try {
      spec.p = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (arg.empty() || used != arg.size() || !(spec.p >= 0 && spec.p <= 1)) {
      throw ConfigError("corrupted proposer needs a probability in [0,1]: " + s);
    }
  } else if (name == "transcript" && !arg.empty()) {
    spec.kind = ProposerKind::Transcript;
    spec.transcript_dir = arg;
  } else {
    throw ConfigError("unknown proposer '" + s + "'");
  }
  return spec;
}

std::string ProposerSpec::id() const {
  switch (kind) {
    case ProposerKind::Optimal: return "optimal";
    case ProposerKind::RandomLegal: return "random_legal";
    case ProposerKind::Corrupted: return "corrupted:" + format_p(p);
    case ProposerKind::Transcript: return "transcript";
  }
  return "?";
}

std::unique_ptr<Proposer> make_proposer(const ProposerSpec& spec, int n, int episode) {
  check_n(n);
  switch (spec.kind) {
    case ProposerKind::Optimal: return std::make_unique<OptimalProposer>();
    case ProposerKind::RandomLegal: {
      int cap = spec.move_cap > 0 ? spec.move_cap : 4 * ((1 << std::min(n, 24)) - 1);
      return std::make_unique<RandomLegalProposer>(cap);
    }
    case ProposerKind::Corrupted: return std::make_unique<CorruptedProposer>(spec.p, spec.id());
    case ProposerKind::Transcript: {
      namespace fs = std::filesystem;
      fs::path dir(spec.transcript_dir);
      fs::path per_episode = dir / ("n" + std::to_string(n) + "-" + std::to_string(episode) + ".txt");
      fs::path shared = dir / ("n" + std::to_string(n) + ".txt");
      return std::make_unique<TranscriptProposer>(read_transcript(fs::exists(per_episode) ? per_episode.string()
                                                                                          : shared.string()));
    }
  }
  throw ConfigError("unknown proposer kind");
}

EpisodeResult run_episode(int n, Proposer& proposer, const EpisodeOptions& opts) {
  if (opts.max_repairs < 0) throw ConfigError("max_repairs must be non-negative");
  std::mt19937_64 rng(opts.seed);
  const HanoiState start = HanoiState::tower(n, 0);
  const HanoiState goal = HanoiState::tower(n, 2);
  EpisodeResult res;
  res.proposer_id = proposer.id();

  if (!opts.move_level) {
    for (int round = 0;; ++round) {
      Plan plan = proposer.propose(n, start, goal, res.violations, rng);
      auto r = verify_plan(start, plan, goal);
      res.repair_rounds_used = round;
      if (std::holds_alternative<HanoiState>(r)) {
        res.success = true;
        res.moves_executed = static_cast<int>(plan.size());
        return res;
      }
      res.violations.push_back(std::get<Violation>(r));
      if (round == opts.max_repairs) return res;
    }
  }

  // One move per round; the walk is capped at four optimal lengths.
  const int cap = 4 * ((1 << std::min(n, 24)) - 1);
  HanoiState s = start;
  while (s != goal && res.moves_executed < cap) {
    Plan plan = proposer.propose(n, s, goal, res.violations, rng);
    std::size_t index = static_cast<std::size_t>(res.moves_executed);
    std::optional<Violation> v;
    if (plan.empty()) {
      v = Violation{index, ViolationReason::GoalMiss, "no move proposed in " + s.to_string()};
    } else {
      auto r = apply(s, plan.front(), index);
      if (auto* bad = std::get_if<Violation>(&r)) {
        v = *bad;
      } else {
        s = std::get<HanoiState>(std::move(r));
        ++res.moves_executed;
      }
    }
    if (v) {
      res.violations.push_back(*v);
      if (res.repair_rounds_used == opts.max_repairs) break;
      ++res.repair_rounds_used;
    }
  }
  res.success = s == goal;
  return res;
}

nlohmann::json BenchConfig::to_json() const {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& p : proposers) ids.push_back(p.id());
  return {{"disks", disks},   {"proposers", ids}, {"episodes", episodes},
          {"repairs", repairs}, {"seed", seed},   {"move_level", move_level}};
}

std::vector<BenchCell> summarize(const std::vector<EpisodeRecord>& log) {
  struct Acc {
    int episodes = 0, successes = 0;
    long long moves = 0, repairs = 0;
  };
  std::map<std::tuple<int, std::string, int>, Acc> acc;
  for (const auto& r : log) {
    auto& a = acc[{r.n, r.proposer, r.max_repairs}];
    ++a.episodes;
    a.repairs += r.result.repair_rounds_used;
    if (r.result.success) {
      ++a.successes;
      a.moves += r.result.moves_executed;
    }
  }
  std::vector<BenchCell> cells;
  for (const auto& [key, a] : acc) {
    BenchCell c;
    std::tie(c.n, c.proposer, c.max_repairs) = key;
    c.episodes = a.episodes;
    c.successes = a.successes;
    c.mean_moves = a.successes ? static_cast<double>(a.moves) / a.successes : 0.0;
    c.mean_repairs = static_cast<double>(a.repairs) / a.episodes;
    cells.push_back(std::move(c));
  }
  return cells;
}

BenchReport run_benchmark(const BenchConfig& cfg) {
  if (cfg.episodes < 1) throw ConfigError("episodes must be at least 1");
  if (cfg.disks.empty() || cfg.proposers.empty() || cfg.repairs.empty()) {
    throw ConfigError("benchmark needs disk counts, proposers and repair budgets");
  }
  std::vector<EpisodeRecord> log;
  for (int n : cfg.disks) {
    check_n(n);
    if (n > 20) throw ConfigError("disk counts above 20 are not supported");
    for (const auto& spec : cfg.proposers) {
      for (int repairs : cfg.repairs) {
        for (int e = 0; e < cfg.episodes; ++e) {
          auto proposer = make_proposer(spec, n, e);
          EpisodeOptions opts{repairs, cfg.seed + static_cast<std::uint64_t>(e), cfg.move_level};
          log.push_back({n, spec.id(), repairs, run_episode(n, *proposer, opts)});
        }
      }
    }
  }
  return {cfg, summarize(log)};
}

namespace {

long long tenths_of_percent(double rate) { return std::llround(rate * 1000.0); }

std::string tenths_text(long long t) {
  std::string sign = t < 0 ? "-" : "";
  long long a = t < 0 ? -t : t;
  return sign + std::to_string(a / 10) + "." + std::to_string(a % 10);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_rate(double rate) { return tenths_text(tenths_of_percent(rate)) + "%"; }

nlohmann::json BenchReport::to_json() const {
  nlohmann::json out = {{"config", config.to_json()}, {"cells", nlohmann::json::array()}};
  for (const auto& c : cells) {
    out["cells"].push_back({{"disks", c.n},
                            {"proposer", c.proposer},
                            {"max_repairs", c.max_repairs},
                            {"episodes", c.episodes},
                            {"successes", c.successes},
                            {"success_rate", c.success_rate()},
                            {"success_pct", format_rate(c.success_rate())},
                            {"mean_moves", c.successes ? nlohmann::json(c.mean_moves) : nlohmann::json(nullptr)},
                            {"mean_repairs", c.mean_repairs}});
  }
  return out;
}

std::string render_table(const std::vector<BenchCell>& cells) {
  std::string out =
      "| Disks | Proposer | Repairs | Episodes | Success | Mean moves | Mean repairs |\n"
      "|---|---|---|---|---|---|---|\n";
  for (const auto& c : cells) {
    out += "| " + std::to_string(c.n) + " | " + c.proposer + " | " + std::to_string(c.max_repairs) + " | " +
           std::to_string(c.episodes) + " | " + format_rate(c.success_rate()) + " | " +
           (c.successes ? fixed(c.mean_moves, 1) : std::string("-")) + " | " + fixed(c.mean_repairs, 2) + " |\n";
  }
  return out;
}

std::string render_comparison(const std::vector<BenchCell>& cells, const std::string& proposer, int baseline_repairs,
                              int augmented_repairs) {
  std::map<int, const BenchCell*> base, aug;
  for (const auto& c : cells) {
    if (c.proposer != proposer) continue;
    if (c.max_repairs == baseline_repairs) base[c.n] = &c;
    if (c.max_repairs == augmented_repairs) aug[c.n] = &c;
  }
  std::string out = "| Number of disks | Baseline (repairs=" + std::to_string(baseline_repairs) +
                    ") | Ontology-augmented (repairs=" + std::to_string(augmented_repairs) +
                    ") | Absolute change |\n|---|---|---|---|\n";
  for (const auto& [n, b] : base) {
    auto it = aug.find(n);
    if (it == aug.end()) continue;
    long long tb = tenths_of_percent(b->success_rate());
    long long ta = tenths_of_percent(it->second->success_rate());
    long long d = ta - tb;
    out += "| " + std::to_string(n) + " | " + tenths_text(tb) + "% | " + tenths_text(ta) + "% | " +
           (d > 0 ? "+" : "") + tenths_text(d) + " p.p. |\n";
  }
  return out;
}

}  // namespace ontomem::hanoi
