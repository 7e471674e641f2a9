#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontomem/rdf/graph.hpp"

namespace ontomem::turtle {

// prefix label -> namespace IRI. The empty label is the default prefix.
using PrefixMap = std::map<std::string, std::string>;

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  int line = 1;
  int column = 1;
  std::string message;
  Severity severity = Severity::Error;
};

std::string format_diagnostic(const ParseDiagnostic& d);

struct Document {
  rdf::Graph graph;
  PrefixMap prefixes;
};

// Either a document or at least one ERROR diagnostic. Parsing stops at the
// first error.
struct ParseResult {
  std::optional<Document> document;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return document.has_value(); }
};

// Accepted subset: @prefix / PREFIX directives, prefixed names, absolute
// IRIs, _:labels, short and long string literals with @lang or ^^datatype,
// integer/decimal/double/boolean shorthand, `a`, `;` and `,` lists, `#`
// comments. Collections and [ ] blank nodes are rejected.
ParseResult parse_turtle(std::string_view input);

// Canonical form: sorted @prefix lines, a blank line, then one triple per
// line in canonical term order with blank nodes renumbered _:b0, _:b1, ...
// Output depends only on the triple set and the prefix map.
std::string serialize_turtle(const rdf::Graph& graph, const PrefixMap& prefixes);

// Abbreviate an IRI with the longest matching namespace, or <iri>.
std::string format_iri(const std::string& iri, const PrefixMap& prefixes);
std::string format_term(const rdf::Term& term, const PrefixMap& prefixes);

// Parse one term in canonical text form (<iri>, _:x, "lex"@en, "lex"^^<dt>).
// Prefixed names resolve against `prefixes` when given.
std::optional<rdf::Term> parse_term(std::string_view text, std::string* error = nullptr,
                                    const PrefixMap& prefixes = {});

// Parse and throw InputError on the first diagnostic.
Document parse_turtle_or_throw(std::string_view input, const std::string& origin = "input");

}  // namespace ontomem::turtle
