#include "ontomem/bus/service.hpp"

#include <algorithm>

#include "ontomem/error.hpp"
#include "ontomem/factcheck/factcheck.hpp"
#include "ontomem/reasoner/reasoner.hpp"
#include "ontomem/shacl/shacl.hpp"
#include "ontomem/sparql/sparql.hpp"
#include "ontomem/turtle/turtle.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::bus {

namespace {

std::vector<std::string> lines_of(const rdf::Graph& g) {
  std::vector<std::string> out;
  for (const auto& t : g.triples()) out.push_back(t.canonical());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

nlohmann::json query(const builder::Store& store, const std::string& text, bool inferred) {
  std::string full;
  for (const auto& [label, ns] : store.prefixes()) full += "PREFIX " + label + ": <" + ns + ">\n";
  full += text;
  auto q = sparql::parse_query_or_throw(full);
  if (inferred) return sparql::to_json(sparql::evaluate(q, reasoner::materialize(store.trusted())));
  return sparql::to_json(sparql::evaluate(q, store.trusted()));
}

nlohmann::json validate(const builder::Store& store, const std::optional<std::string>& shapes_path, bool logic) {
  std::vector<shacl::NodeShape> shapes;
  if (shapes_path) {
    shapes = shacl::parse_shapes_or_throw(
        turtle::parse_turtle_or_throw(util::read_file(*shapes_path), *shapes_path).graph);
  } else {
    shapes = store.shapes();
  }
  auto report = shacl::validate(store.trusted(), shapes);
  auto out = shacl::to_json(report);
  if (logic) {
    auto conflicts = reasoner::check_consistency(reasoner::materialize(store.trusted()));
    out["conflicts"] = reasoner::to_json(conflicts);
    out["conforms"] = report.conforms && conflicts.empty();
  }
  return out;
}

nlohmann::json diff(const builder::Store& store, int from, int to, bool inferred) {
  auto a = store.graph_at(from), b = store.graph_at(to);
  if (inferred) {
    a = reasoner::materialize(a);
    b = reasoner::materialize(b);
  }
  auto la = lines_of(a), lb = lines_of(b);
  std::vector<std::string> added, removed;
  std::set_difference(lb.begin(), lb.end(), la.begin(), la.end(), std::back_inserter(added));
  std::set_difference(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(removed));
  return {{"from", from}, {"to", to}, {"added", added}, {"removed", removed}};
}

nlohmann::json check(const builder::Store& store, const std::string& claims_jsonl) {
  auto parsed = factcheck::parse_claims(claims_jsonl, store.prefixes());
  if (!parsed.diagnostics.empty()) {
    std::string msg = "invalid claims:";
    for (const auto& d : parsed.diagnostics) msg += " line " + std::to_string(d.line) + ": " + d.message + ";";
    msg.pop_back();
    throw InputError(msg);
  }
  return factcheck::to_json(factcheck::check_answer(parsed.claims, store.trusted()));
}

nlohmann::json retrieve(const builder::Store& store, const memory::RetrieveRequest& req) {
  return memory::to_json(memory::retrieve(store, req));
}

nlohmann::json bench_hanoi(const hanoi::BenchConfig& cfg, const std::optional<std::string>& out) {
  auto report = hanoi::run_benchmark(cfg).to_json();
  if (out) util::write_file(*out, report.dump(2) + "\n");
  return report;
}

nlohmann::json tools_list() {
  using nlohmann::json;
  auto str = json{{"type", "string"}};
  auto integer = json{{"type", "integer"}};
  auto boolean = json{{"type", "boolean"}};
  auto ints = json{{"type", "array"}, {"items", integer}};
  auto strs = json{{"type", "array"}, {"items", str}};
  auto schema = [](json props, std::vector<std::string> required) {
    return json{{"type", "object"}, {"properties", std::move(props)}, {"required", std::move(required)}};
  };
  json term_triple = schema({{"subject", str}, {"predicate", str}, {"object", str}}, {"subject", "predicate", "object"});
  json claim = term_triple;
  claim["properties"]["polarity"] = json{{"enum", {"ASSERTED", "NEGATED"}}};
  claim["properties"]["conditions"] = json{{"type", "array"}, {"items", term_triple}};
  claim["properties"]["source_text"] = str;

  json methods = json::array();
  methods.push_back({{"name", "graph.query"},
                     {"description", "Evaluate a SPARQL SELECT or ASK query over the trusted graph."},
                     {"params", schema({{"query", str}, {"inferred", boolean}}, {"query"})}});
  methods.push_back({{"name", "graph.validate"},
                     {"description", "Validate the trusted graph against SHACL shapes; optionally check logical consistency."},
                     {"params", schema({{"shapes", str}, {"logic", boolean}}, {})}});
  methods.push_back({{"name", "graph.diff"},
                     {"description", "Triples added and removed between two store versions."},
                     {"params", schema({{"from", integer}, {"to", integer}, {"inferred", boolean}}, {"from", "to"})}});
  methods.push_back({{"name", "fact.check"},
                     {"description", "Check claims against the trusted graph and return verdicts with traces."},
                     {"params", schema({{"claims", json{{"type", "array"}, {"items", claim}}}}, {"claims"})}});
  methods.push_back(
      {{"name", "memory.retrieve"},
       {"description", "Build the fused context bundle from vector, graph, tool and user memory."},
       {"params", schema({{"query", str},
                          {"radius", integer},
                          {"k", integer},
                          {"budget", integer},
                          {"seeds", strs},
                          {"session", str},
                          {"tool_results", json{{"type", "array"}, {"items", schema({{"tool", str}, {"text", str}}, {"tool", "text"})}}}},
                         {"query"})}});
  methods.push_back({{"name", "bench.hanoi.run"},
                     {"description", "Run the Tower of Hanoi propose-check-repair benchmark."},
                     {"params", schema({{"disks", ints},
                                        {"proposers", strs},
                                        {"episodes", integer},
                                        {"repairs", ints},
                                        {"seed", integer},
                                        {"move_level", boolean},
                                        {"out", str}},
                                       {})}});
  methods.push_back({{"name", "tools.list"}, {"description", "This catalog."}, {"params", schema(json::object(), {})}});
  return {{"methods", methods}};
}

}  // namespace ontomem::bus
