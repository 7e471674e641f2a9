#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ontomem/rdf/graph.hpp"
#include "ontomem/turtle/turtle.hpp"

namespace ontomem::sparql {

enum class QueryForm { Select, Ask };

// A pattern position: a constant term or a variable name (without '?').
struct Slot {
  std::optional<rdf::Term> term;
  std::string var;

  static Slot constant(rdf::Term t) { return Slot{std::move(t), {}}; }
  static Slot variable(std::string name) { return Slot{std::nullopt, std::move(name)}; }
  bool is_var() const { return !term.has_value(); }
};

struct TriplePattern {
  Slot subject;
  Slot predicate;
  Slot object;
  // `iri+`: one or more steps along a constant predicate.
  bool transitive = false;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Comparison {
  std::string lhs;
  CompareOp op = CompareOp::Eq;
  Slot rhs;
};

struct IsIri {
  std::string var;
};

struct RegexMatch {
  std::string var;
  std::string pattern;
};

using FilterExpr = std::variant<Comparison, IsIri, RegexMatch>;

struct Query {
  QueryForm form = QueryForm::Select;
  std::vector<std::string> projection;
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
  std::optional<std::size_t> limit;
};

using Binding = std::map<std::string, rdf::Term>;

struct SolutionSequence {
  QueryForm form = QueryForm::Select;
  std::vector<std::string> vars;
  std::vector<Binding> rows;
  bool ask = false;
};

struct QueryParseResult {
  std::optional<Query> query;
  std::vector<turtle::ParseDiagnostic> diagnostics;

  bool ok() const { return query.has_value(); }
};

// Subset: PREFIX directives, SELECT ?v.. | *, ASK, WHERE { triple patterns
// with ';' ',' and `a`, FILTER(...) }, LIMIT n. FILTER takes comparisons,
// isIRI/isURI, regex(?v, "re") joined by &&. Anything else is reported with
// the construct's name.
QueryParseResult parse_query(std::string_view text);
// Throws InputError carrying the first diagnostic.
Query parse_query_or_throw(std::string_view text);

// Conjunctive evaluation with bag semantics. Rows are ordered by the
// projected variables in term order; LIMIT cuts after ordering.
SolutionSequence evaluate(const Query& query, const rdf::Graph& graph);

// Nodes reachable from `start` in one or more `predicate` steps; `forward`
// false walks edges backwards.
std::vector<rdf::Term> transitive_reach(const rdf::Graph& graph, const rdf::Term& predicate,
                                        const rdf::Term& start, bool forward = true);

// {"vars":[..],"rows":[{"x":"<canonical>"}, ..]} or {"ask":true}.
nlohmann::json to_json(const SolutionSequence& s);

}  // namespace ontomem::sparql
