#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontomem/util/text.hpp"
#include "test_support.hpp"

namespace oracles {

// One entry per bus method: the request params, the equivalent CLI
// arguments, and the golden file both must reproduce. Mirrors
// tests/golden/regen.sh.
struct BusCase {
  std::string golden;
  std::string method;
  nlohmann::json params;
  std::vector<std::string> cli;
};

inline nlohmann::json claims_array(const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  std::istringstream in(ontomem::util::read_file(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) arr.push_back(nlohmann::json::parse(line));
  }
  return arr;
}

inline std::vector<BusCase> bus_cases() {
  using nlohmann::json;
  using testsupport::fixture;
  return {
      {"graph_query_ask", "graph.query", {{"query", "ASK { inst:heidi prop:worksFor inst:initech }"}},
       {"query", "ASK { inst:heidi prop:worksFor inst:initech }"}},
      {"graph_query_select", "graph.query",
       {{"query", "SELECT ?who WHERE { ?who a schema:Person } LIMIT 5"}, {"inferred", true}},
       {"query", "--inferred", "SELECT ?who WHERE { ?who a schema:Person } LIMIT 5"}},
      {"graph_validate", "graph.validate", {{"logic", true}}, {"validate", "--logic"}},
      {"graph_diff", "graph.diff", {{"from", 1}, {"to", 2}}, {"diff", "1", "2"}},
      {"fact_check", "fact.check", {{"claims", claims_array(fixture("store_claims.jsonl"))}},
       {"check", "--claims", fixture("store_claims.jsonl")}},
      {"memory_retrieve", "memory.retrieve",
       {{"query", "Who does Heidi manage?"},
        {"session", "org-08"},
        {"radius", 2},
        {"k", 3},
        {"budget", 8},
        {"tool_results", {{{"tool", "calendar"}, {"text", "Heidi is out on Friday"}}}}},
       {"retrieve", "--query", "Who does Heidi manage?", "--session", "org-08", "--radius", "2", "--k", "3", "--budget",
        "8", "--tool", "calendar=Heidi is out on Friday"}},
      {"bench_hanoi_run", "bench.hanoi.run",
       {{"disks", {3, 4}}, {"proposers", {"optimal", "corrupted:0.1"}}, {"episodes", 20}, {"repairs", {0, 3}}, {"seed", 42}},
       {"bench", "hanoi", "--disks", "3,4", "--proposer", "optimal,corrupted:0.1", "--episodes", "20", "--repairs", "0,3",
        "--seed", "42"}},
  };
}

// Malformed requests and the code each must produce.
inline std::vector<std::pair<std::string, int>> malformed_requests() {
  return {
      {R"({"jsonrpc":"2.0","id":1})", -32600},
      {R"({"id":1,"method":"tools.list"})", -32600},
      {R"({"jsonrpc":"1.0","id":1,"method":"tools.list"})", -32600},
      {R"({"jsonrpc":"2.0","id":1,"method":""})", -32600},
      {R"({"jsonrpc":"2.0","id":1,"method":7})", -32600},
      {R"({"jsonrpc":"2.0","id":[1],"method":"tools.list"})", -32600},
      {R"({"jsonrpc":"2.0","id":1,"method":"tools.list","params":"x"})", -32600},
      {"[1,2]", -32600},
      {"42", -32600},
      {R"({"jsonrpc":"2.0","id":1,"method":"graph.drop"})", -32601},
      {R"({"jsonrpc":"2.0","id":1,"method":"memory.forget","params":{}})", -32601},
      {R"({"jsonrpc":"2.0","id":1,"method":"graph.query","params":{}})", -32602},
      {R"({"jsonrpc":"2.0","id":1,"method":"graph.query","params":{"query":5}})", -32602},
      {R"({"jsonrpc":"2.0","id":1,"method":"graph.query","params":{"query":"SELECT WHERE"}})", -32602},
      {R"({"jsonrpc":"2.0","id":1,"method":"graph.query","params":["ASK {}"]})", -32602},
      {R"({"jsonrpc":"2.0","id":1,"method":"graph.diff","params":{"from":0,"to":9}})", -32602},
      {R"({"jsonrpc":"2.0","id":1,"method":"fact.check","params":{"claims":[{"subject":"x"}]}})", -32602},
      {R"({"jsonrpc":"2.0","id":1,"method":"memory.retrieve","params":{"query":"q","radius":9}})", -32602},
      {R"({"jsonrpc":"2.0","id":1,"method":"bench.hanoi.run","params":{"proposers":["oracle"]}})", -32602},
      {"{not json", -32700},
  };
}

}  // namespace oracles
