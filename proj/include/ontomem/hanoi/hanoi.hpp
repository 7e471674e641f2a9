#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ontomem/rdf/graph.hpp"
#include "ontomem/shacl/shacl.hpp"

namespace ontomem::hanoi {

inline constexpr std::string_view kNs = "http://example.org/hanoi#";

// peg_of[i] is the peg of disk i; disk 0 is the smallest. Stack order on a
// peg follows from size, so every assignment is a legal position.
struct HanoiState {
  int n = 0;
  std::vector<int> peg_of;

  // All disks on `peg`.
  static HanoiState tower(int n, int peg);
  // Smallest disk on `peg`.
  std::optional<int> top(int peg) const;
  std::string to_string() const;

  friend auto operator<=>(const HanoiState&, const HanoiState&) = default;
};

struct Move {
  int from = 0;
  int to = 0;

  // "0->2"
  std::string to_string() const;
  friend auto operator<=>(const Move&, const Move&) = default;
};

using Plan = std::vector<Move>;

std::string plan_to_string(const Plan& plan);
// Moves separated by whitespace or commas, each "f->t" with pegs 0-2 or A-C.
// Throws InputError on a malformed token.
Plan parse_plan(std::string_view text);

enum class ViolationReason { EmptySource, LargerOnSmaller, SamePeg, Malformed, GoalMiss };

std::string_view to_string(ViolationReason r);

struct Violation {
  std::size_t move_index = 0;
  ViolationReason reason = ViolationReason::Malformed;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Move> legal_moves(const HanoiState& s);
// The state after `m`, or the rule it breaks.
std::variant<HanoiState, Violation> apply(const HanoiState& s, const Move& m, std::size_t index = 0);
// Final state when every move is legal and it equals `goal`; otherwise the
// first violation, or GOAL_MISS at index plan.size().
std::variant<HanoiState, Violation> verify_plan(const HanoiState& start, const Plan& plan, const HanoiState& goal);

// 2^n - 1 moves.
Plan solve_optimal(int n, int from, int to);
// Shortest plan from any position to the tower on `to`.
Plan solve_from(const HanoiState& s, int to);

// Disks typed hanoi:Disk with hanoi:size, pegs typed hanoi:Peg, hanoi:onPeg,
// hanoi:smallerThan for every smaller/larger pair, and hanoi:restsOn naming
// the disk or peg directly below. Disk i is also typed hanoi:Size<i>, and
// everything that may carry disk i is typed hanoi:CanHold<i>.
rdf::Graph state_to_graph(const HanoiState& s);
// Exactly one onPeg per disk with a Peg value; restsOn must name a CanHold
// node of the disk's size; a move record needs one moved disk.
std::vector<shacl::NodeShape> hanoi_shapes(int n);
// Applies `m` to the graph as written: the top disk of the source peg (by
// the graph) is placed on whatever currently tops the target peg. Records
// the move as a hanoi:Move node.
rdf::Graph apply_to_graph(const rdf::Graph& g, int n, const Move& m);

struct EpisodeResult {
  bool success = false;
  int moves_executed = 0;
  int repair_rounds_used = 0;
  std::vector<Violation> violations;
  std::string proposer_id;
};

class Proposer {
 public:
  virtual ~Proposer() = default;
  virtual std::string id() const = 0;
  // Plan from `start`; `feedback` holds the violations of earlier rounds.
  virtual Plan propose(int n, const HanoiState& start, const HanoiState& goal,
                       const std::vector<Violation>& feedback, std::mt19937_64& rng) = 0;
};

enum class ProposerKind { Optimal, RandomLegal, Corrupted, Transcript };

struct ProposerSpec {
  ProposerKind kind = ProposerKind::Optimal;
  double p = 0.0;
  std::string transcript_dir;
  // Random walk length; 0 means 4 * (2^n - 1).
  int move_cap = 0;

  // "optimal", "random", "corrupted:0.1", "transcript:DIR". Throws ConfigError.
  static ProposerSpec parse(std::string_view text);
  std::string id() const;
};

// A fresh proposer for one episode. Transcript proposers read
// <dir>/n<N>-<episode>.txt, else <dir>/n<N>.txt: one plan per line, line r
// answering round r. Throws TranscriptError when neither file can be read or
// a line does not parse.
std::unique_ptr<Proposer> make_proposer(const ProposerSpec& spec, int n, int episode = 0);

struct EpisodeOptions {
  int max_repairs = 0;
  std::uint64_t seed = 0;
  // Verify and execute one move per round instead of a whole plan.
  bool move_level = false;
};

// Tower on peg 0 to tower on peg 2.
EpisodeResult run_episode(int n, Proposer& proposer, const EpisodeOptions& opts);

struct BenchConfig {
  std::vector<int> disks = {3, 4, 5, 6};
  std::vector<ProposerSpec> proposers = {ProposerSpec{}};
  int episodes = 10;
  std::vector<int> repairs = {0, 3};
  std::uint64_t seed = 42;
  bool move_level = false;

  nlohmann::json to_json() const;
};

struct EpisodeRecord {
  int n = 0;
  std::string proposer;
  int max_repairs = 0;
  EpisodeResult result;
};

struct BenchCell {
  int n = 0;
  std::string proposer;
  int max_repairs = 0;
  int episodes = 0;
  int successes = 0;
  double mean_moves = 0;  // over successful episodes
  double mean_repairs = 0;

  double success_rate() const { return episodes ? static_cast<double>(successes) / episodes : 0.0; }
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchCell> cells;

  nlohmann::json to_json() const;
};

// Cells ordered by n, proposer, repairs. Episode seeds are seed + index, so
// cells that differ only in repairs see the same first proposals.
BenchReport run_benchmark(const BenchConfig& cfg);
std::vector<BenchCell> summarize(const std::vector<EpisodeRecord>& log);

// "26.3%"
std::string format_rate(double rate);
// All cells as a pipe table.
std::string render_table(const std::vector<BenchCell>& cells);
// One row per disk count: baseline repairs vs augmented repairs for one
// proposer, with the change in percentage points between the rounded rates.
std::string render_comparison(const std::vector<BenchCell>& cells, const std::string& proposer, int baseline_repairs,
                              int augmented_repairs);

}  // namespace ontomem::hanoi
