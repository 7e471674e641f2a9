#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ontomem/rdf/graph.hpp"

namespace ontomem::reasoner {

enum class RuleId {
  SubclassTrans,
  SubpropTrans,
  TypeViaSubclass,
  DomainTyping,
  RangeTyping,
  InverseOf,
  Symmetric,
  TransitiveProp,
};

struct InferenceRule {
  RuleId id;
  std::string description;
};

const std::vector<InferenceRule>& rule_set();
// "SUBCLASS_TRANS", ...
std::string_view to_string(RuleId id);

struct Derivation {
  RuleId rule;
  std::vector<rdf::Triple> premises;
};

struct MaterializeOptions {
  std::size_t max_firings = 1'000'000;
};

struct Materialization {
  rdf::Graph graph;
  // First derivation found for every inferred triple.
  std::map<rdf::Triple, Derivation> derivations;
  std::size_t firings = 0;
};

// Least fixpoint of the rule set. Input triples keep their provenance;
// inferred ones get source_id "reasoner", origin TOOL_RESULT.
// Throws DivergenceError when rule firings exceed the ceiling.
rdf::Graph materialize(const rdf::Graph& graph, const MaterializeOptions& opts = {});
Materialization materialize_with_trace(const rdf::Graph& graph, const MaterializeOptions& opts = {});

// Derivation steps behind `t`, premises before conclusions; empty when `t`
// was asserted.
std::vector<std::pair<rdf::Triple, Derivation>> explain(const Materialization& m, const rdf::Triple& t);

inline constexpr std::string_view kReasonerSource = "reasoner";

// True when every provenance record of `t` comes from the reasoner.
bool is_inferred(const rdf::Graph& g, const rdf::Triple& t);
// Triples with at least one non-reasoner provenance record, or none at all.
rdf::Graph asserted_only(const rdf::Graph& g);

enum class ConflictKind { DisjointClass, FunctionalProperty, ExplicitNegation };

std::string_view to_string(ConflictKind kind);

struct Conflict {
  ConflictKind kind;
  rdf::Term subject;
  // The data triples that are jointly inconsistent, sorted.
  std::vector<rdf::Triple> detail;
  // The schema axiom or negation marker that makes them so.
  std::vector<rdf::Triple> axioms;

  friend bool operator==(const Conflict&, const Conflict&) = default;
  friend auto operator<=>(const Conflict& a, const Conflict& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.subject <=> b.subject; c != 0) return c;
    if (auto c = a.detail <=> b.detail; c != 0) return c;
    return a.axioms <=> b.axioms;
  }
};

// Reports disjoint-class membership, functional properties with several
// objects, and triples denied by a reified negation:
//   _:st rdf:subject s ; rdf:predicate p ; rdf:object o ; sys:not true .
// Expects a materialized graph. Sorted and duplicate-free.
std::vector<Conflict> check_consistency(const rdf::Graph& graph);

// Deterministic statement node for the negation of `t`.
rdf::Term negation_node(const rdf::Triple& t);
// The four triples that state "not (s p o)".
std::vector<rdf::Triple> negation_triples(const rdf::Triple& t);

nlohmann::json to_json(const std::vector<Conflict>& conflicts);

}  // namespace ontomem::reasoner
