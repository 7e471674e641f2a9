#include "ontomem/shacl/shacl.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::shacl {

using rdf::Term;
namespace sh = vocab::sh;

namespace {

const std::set<std::string> kNodeShapeTerms = {sh::targetClass, sh::property, sh::closed};
const std::set<std::string> kPropertyShapeTerms = {sh::path,   sh::minCount, sh::maxCount, sh::datatype,
                                                   sh::class_, sh::in,       sh::pattern};

std::string local_name(const std::string& iri) {
  return util::starts_with(iri, vocab::kSh) ? "sh:" + iri.substr(vocab::kSh.size()) : "<" + iri + ">";
}

class ShapeReader {
 public:
  explicit ShapeReader(const rdf::Graph& g) : g_(g) {}

  ShapesParseResult read() {
    for (const auto& node : g_.subjects(Term::iri(vocab::rdf::type), Term::iri(sh::NodeShape))) {
      try {
        out_.shapes.push_back(read_node_shape(node));
      } catch (const InputError& e) {
        error(e.what());
      }
    }
    return std::move(out_);
  }

 private:
  void warn(std::string msg) { out_.diagnostics.push_back({1, 1, std::move(msg), turtle::Severity::Warning}); }
  void error(std::string msg) { out_.diagnostics.push_back({1, 1, std::move(msg), turtle::Severity::Error}); }

  void warn_unknown(const Term& node, const std::set<std::string>& known) {
    for (const auto& t : g_.match(node, std::nullopt, std::nullopt)) {
      const std::string& p = t.predicate().value();
      if (util::starts_with(p, vocab::kSh) && !known.count(p)) {
        warn("unsupported SHACL term " + local_name(p) + " on " + node.canonical() + " ignored");
      }
    }
  }

  std::optional<Term> single(const Term& node, const std::string& pred) {
    auto values = g_.objects(node, Term::iri(pred));
    if (values.empty()) return std::nullopt;
    if (values.size() > 1) {
      throw InputError("shape " + node.canonical() + " has " + std::to_string(values.size()) + " values for " +
                       local_name(pred));
    }
    return values.front();
  }

  std::optional<std::string> single_iri(const Term& node, const std::string& pred) {
    auto v = single(node, pred);
    if (!v) return std::nullopt;
    if (!v->is_iri()) throw InputError("shape " + node.canonical() + ": " + local_name(pred) + " must be an IRI");
    return v->value();
  }

  std::optional<long long> single_count(const Term& node, const std::string& pred) {
    auto v = single(node, pred);
    if (!v) return std::nullopt;
    long long n = -1;
    if (v->is_literal()) {
      try {
        std::size_t used = 0;
        n = std::stoll(v->value(), &used);
        if (used != v->value().size()) n = -1;
      } catch (const std::exception&) {
        n = -1;
      }
    }
    if (n < 0) throw InputError("shape " + node.canonical() + ": " + local_name(pred) + " must be a non-negative integer");
    return n;
  }

  std::vector<Term> read_list(const Term& owner, Term head) {
    std::vector<Term> items;
    std::set<Term> visited;
    const Term nil = Term::iri(vocab::rdf::nil);
    while (head != nil) {
      if (!visited.insert(head).second) throw InputError("shape " + owner.canonical() + ": sh:in list is cyclic");
      auto first = g_.objects(head, Term::iri(vocab::rdf::first));
      auto rest = g_.objects(head, Term::iri(vocab::rdf::rest));
      if (first.size() != 1 || rest.size() != 1) {
        throw InputError("shape " + owner.canonical() + ": sh:in is not a well-formed RDF list");
      }
      items.push_back(first.front());
      head = rest.front();
    }
    return items;
  }

  PropertyShape read_property_shape(const Term& owner, const Term& node) {
    warn_unknown(node, kPropertyShapeTerms);
    PropertyShape ps;
    ps.id = node;
    auto path = single_iri(node, sh::path);
    if (!path) {
      throw InputError("property shape " + node.canonical() + " of shape " + owner.canonical() +
                       " is missing sh:path");
    }
    ps.path = *path;
    ps.min_count = single_count(node, sh::minCount);
    ps.max_count = single_count(node, sh::maxCount);
    if (ps.min_count && ps.max_count && *ps.min_count > *ps.max_count) {
      throw InputError("property shape " + node.canonical() + " of shape " + owner.canonical() +
                       " has sh:minCount greater than sh:maxCount");
    }
    ps.datatype = single_iri(node, sh::datatype);
    ps.value_class = single_iri(node, sh::class_);
    if (auto list = single(node, sh::in)) ps.value_in = read_list(owner, *list);
    if (auto pat = single(node, sh::pattern)) {
      if (!pat->is_literal()) throw InputError("shape " + node.canonical() + ": sh:pattern must be a literal");
      try {
        std::regex probe(pat->value(), std::regex::ECMAScript);
      } catch (const std::regex_error&) {
        throw InputError("shape " + node.canonical() + ": invalid sh:pattern \"" + pat->value() + "\"");
      }
      ps.pattern = pat->value();
    }
    return ps;
  }

  NodeShape read_node_shape(const Term& node) {
    warn_unknown(node, kNodeShapeTerms);
    NodeShape shape;
    shape.id = node;
    auto targets = g_.objects(node, Term::iri(sh::targetClass));
    if (targets.size() > 1) throw InputError("shape " + node.canonical() + " declares more than one sh:targetClass");
    if (!targets.empty()) {
      if (!targets.front().is_iri()) throw InputError("shape " + node.canonical() + ": sh:targetClass must be an IRI");
      shape.target_class = targets.front().value();
    }
    for (const auto& p : g_.objects(node, Term::iri(sh::property))) {
      if (p.is_literal()) throw InputError("shape " + node.canonical() + ": sh:property must be a node");
      shape.properties.push_back(read_property_shape(node, p));
    }
    if (auto closed = single(node, sh::closed)) shape.closed = closed->is_literal() && closed->value() == "true";
    if (!shape.target_class && shape.properties.empty()) {
      throw InputError("shape " + node.canonical() + " has neither sh:targetClass nor sh:property");
    }
    return shape;
  }

  const rdf::Graph& g_;
  ShapesParseResult out_;
};

std::string plural(long long n, const char* word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

}  // namespace

bool ShapesParseResult::ok() const {
  return std::none_of(diagnostics.begin(), diagnostics.end(),
                      [](const auto& d) { return d.severity == turtle::Severity::Error; });
}

ShapesParseResult parse_shapes(const rdf::Graph& shapes_graph) { return ShapeReader(shapes_graph).read(); }

std::vector<NodeShape> parse_shapes_or_throw(const rdf::Graph& shapes_graph) {
  auto r = parse_shapes(shapes_graph);
  for (const auto& d : r.diagnostics) {
    if (d.severity == turtle::Severity::Error) throw InputError("shapes: " + d.message);
  }
  return std::move(r.shapes);
}

ValidationReport validate(const rdf::Graph& data, const std::vector<NodeShape>& shapes) {
  ValidationReport report;
  const Term type = Term::iri(vocab::rdf::type);
  auto add = [&](const Term& focus, std::optional<std::string> path, std::string code, std::string msg) {
    report.results.push_back({focus, std::move(path), std::move(code), std::move(msg)});
  };
  for (const auto& shape : shapes) {
    if (!shape.target_class) continue;
    auto focus_nodes = data.subjects(type, Term::iri(*shape.target_class));
    std::set<std::string> allowed = {vocab::rdf::type};
    for (const auto& ps : shape.properties) allowed.insert(ps.path);

    std::vector<std::optional<std::regex>> regexes;
    for (const auto& ps : shape.properties) {
      regexes.push_back(ps.pattern ? std::optional<std::regex>(std::regex(*ps.pattern, std::regex::ECMAScript))
                                   : std::nullopt);
    }

    for (const auto& focus : focus_nodes) {
      for (std::size_t i = 0; i < shape.properties.size(); ++i) {
        const auto& ps = shape.properties[i];
        auto values = data.objects(focus, Term::iri(ps.path));
        long long n = static_cast<long long>(values.size());
        if (ps.min_count && n < *ps.min_count) {
          add(focus, ps.path, "minCount",
              "expected at least " + plural(*ps.min_count, "value") + " for <" + ps.path + ">, found " +
                  std::to_string(n));
        }
        if (ps.max_count && n > *ps.max_count) {
          add(focus, ps.path, "maxCount",
              "expected at most " + plural(*ps.max_count, "value") + " for <" + ps.path + ">, found " +
                  std::to_string(n));
        }
        for (const auto& v : values) {
          if (ps.datatype && (!v.is_literal() || v.datatype() != *ps.datatype)) {
            add(focus, ps.path, "datatype", "value " + v.canonical() + " is not a literal of datatype <" + *ps.datatype + ">");
          }
          if (ps.value_class && !data.has_type(v, Term::iri(*ps.value_class))) {
            add(focus, ps.path, "class", "value " + v.canonical() + " is not an instance of <" + *ps.value_class + ">");
          }
          if (ps.value_in && std::find(ps.value_in->begin(), ps.value_in->end(), v) == ps.value_in->end()) {
            add(focus, ps.path, "in", "value " + v.canonical() + " is not in the allowed set");
          }
          if (regexes[i] && (v.is_blank() || !std::regex_search(v.value(), *regexes[i]))) {
            add(focus, ps.path, "pattern", "value " + v.canonical() + " does not match \"" + *ps.pattern + "\"");
          }
        }
      }
      if (shape.closed) {
        std::set<std::string> seen;
        for (const auto& t : data.match(focus, std::nullopt, std::nullopt)) {
          const std::string& p = t.predicate().value();
          if (allowed.count(p) || !seen.insert(p).second) continue;
          add(focus, p, "closed", "predicate <" + p + "> is not allowed by closed shape " + shape.id.canonical());
        }
      }
    }
  }
  std::stable_sort(report.results.begin(), report.results.end(), [](const auto& a, const auto& b) {
    if (a.focus != b.focus) return a.focus < b.focus;
    if (a.path != b.path) return a.path < b.path;
    if (a.constraint != b.constraint) return a.constraint < b.constraint;
    return a.message < b.message;
  });
  report.conforms = report.results.empty();
  return report;
}

nlohmann::json to_json(const ValidationReport& report) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : report.results) {
    results.push_back({{"focus", r.focus.canonical()},
                       {"path", r.path ? nlohmann::json(*r.path) : nlohmann::json(nullptr)},
                       {"constraint", r.constraint},
                       {"message", r.message}});
  }
  return {{"conforms", report.conforms}, {"results", std::move(results)}};
}

std::string to_text(const ValidationReport& report) {
  if (report.conforms) return "conforms: true\n";
  std::string out = "conforms: false (" + plural(static_cast<long long>(report.results.size()), "violation") + ")\n";
  for (const auto& r : report.results) {
    out += "  " + r.focus.canonical() + " " + (r.path ? "<" + *r.path + ">" : std::string("-")) + " [" +
           r.constraint + "] " + r.message + "\n";
  }
  return out;
}

}  // namespace ontomem::shacl
