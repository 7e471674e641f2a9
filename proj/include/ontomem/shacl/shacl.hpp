#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontomem/rdf/graph.hpp"
#include "ontomem/turtle/turtle.hpp"

namespace ontomem::shacl {

struct PropertyShape {
  rdf::Term id = rdf::Term::blank("unset");
  std::string path;
  std::optional<long long> min_count;
  std::optional<long long> max_count;
  std::optional<std::string> datatype;
  std::optional<std::string> value_class;
  std::optional<std::vector<rdf::Term>> value_in;
  std::optional<std::string> pattern;
};

struct NodeShape {
  rdf::Term id = rdf::Term::blank("unset");
  std::optional<std::string> target_class;
  std::vector<PropertyShape> properties;
  bool closed = false;
};

struct ValidationResult {
  rdf::Term focus = rdf::Term::blank("unset");
  std::optional<std::string> path;
  // minCount, maxCount, datatype, class, in, pattern, closed
  std::string constraint;
  std::string message;

  friend bool operator==(const ValidationResult&, const ValidationResult&) = default;
};

struct ValidationReport {
  bool conforms = true;
  std::vector<ValidationResult> results;
};

struct ShapesParseResult {
  std::vector<NodeShape> shapes;
  // Warnings for unrecognised sh: terms; errors for malformed shapes.
  std::vector<turtle::ParseDiagnostic> diagnostics;

  bool ok() const;
};

ShapesParseResult parse_shapes(const rdf::Graph& shapes_graph);
// Throws InputError on the first error diagnostic.
std::vector<NodeShape> parse_shapes_or_throw(const rdf::Graph& shapes_graph);

// Does no inference: focus nodes are subjects with a direct rdf:type edge to
// the target class. Results are sorted by focus, path, constraint.
ValidationReport validate(const rdf::Graph& data, const std::vector<NodeShape>& shapes);

nlohmann::json to_json(const ValidationReport& report);
std::string to_text(const ValidationReport& report);

}  // namespace ontomem::shacl
