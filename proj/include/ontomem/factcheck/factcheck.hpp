#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ontomem/rdf/graph.hpp"
#include "ontomem/reasoner/reasoner.hpp"
#include "ontomem/turtle/turtle.hpp"

namespace ontomem::factcheck {

enum class Polarity { Asserted, Negated };

struct Claim {
  rdf::Triple statement;
  Polarity polarity = Polarity::Asserted;
  // Qualifiers assumed for the duration of one check, never committed.
  std::vector<rdf::Triple> conditions;
  std::optional<std::string> source_text;
};

enum class Status { Supported, Contradicted, NotFound };
enum class StepKind { MatchedFact, InferenceRule, ConditionCheck, Conflict, Lookup };

std::string_view to_string(Polarity p);
std::string_view to_string(Status s);
std::string_view to_string(StepKind k);

struct TraceStep {
  StepKind kind = StepKind::Lookup;
  std::vector<rdf::Triple> triples;
  std::optional<reasoner::RuleId> rule;
  std::optional<reasoner::Conflict> conflict;
  std::string note;
};

struct Verdict {
  Status status = Status::NotFound;
  std::vector<TraceStep> trace;
  Claim claim;
};

// Evaluates over M = materialize(trusted + conditions). An asserted
// statement is SUPPORTED when it is in M, CONTRADICTED when adding it to M
// raises a conflict, NOT_FOUND otherwise. A negated claim swaps SUPPORTED
// and CONTRADICTED. Throws ConditionInconsistencyError when the conditions
// alone raise a conflict.
Verdict check_claim(const Claim& claim, const rdf::Graph& trusted);

enum class Overall { Supported, Contradicted, Mixed, NotFound };
std::string_view to_string(Overall o);

struct AnswerVerdict {
  Overall overall = Overall::NotFound;
  std::vector<Verdict> verdicts;
};

// Throws InputError for an empty claim list.
AnswerVerdict check_answer(const std::vector<Claim>& claims, const rdf::Graph& trusted);

struct ClaimDiagnostic {
  int line = 0;
  std::string message;
};

struct ClaimParseResult {
  std::vector<Claim> claims;
  std::vector<ClaimDiagnostic> diagnostics;
};

// One JSON object per line:
//   {"subject": "<iri>", "predicate": "ex:p", "object": "\"30\"",
//    "polarity": "ASSERTED", "conditions": [{"subject": ..., ...}],
//    "source_text": "..."}
// Terms use Turtle term syntax; prefixed names resolve against `prefixes`.
// Bad lines are reported and skipped.
ClaimParseResult parse_claims(std::string_view jsonl, const turtle::PrefixMap& prefixes = {});

nlohmann::json to_json(const Claim& c);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const AnswerVerdict& a);

}  // namespace ontomem::factcheck
