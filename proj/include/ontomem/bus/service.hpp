#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ontomem/builder/store.hpp"
#include "ontomem/hanoi/hanoi.hpp"
#include "ontomem/memory/memory.hpp"

// Operations shared by the command line and the tool bus. Each returns the
// JSON document both front ends emit.
namespace ontomem::bus {

// SPARQL over the trusted graph (or its materialization). The store's
// prefixes are predeclared.
nlohmann::json query(const builder::Store& store, const std::string& text, bool inferred = false);

// {"conforms", "results"} against the given shapes file, else the store's
// shapes; with `logic`, also {"conflicts"} from the materialized graph.
nlohmann::json validate(const builder::Store& store, const std::optional<std::string>& shapes_path, bool logic);

// {"from", "to", "added", "removed"}: canonical N-Triples lines, sorted.
nlohmann::json diff(const builder::Store& store, int from, int to, bool inferred = false);

// Claims as JSON lines. Throws InputError listing every bad line.
nlohmann::json check(const builder::Store& store, const std::string& claims_jsonl);

nlohmann::json retrieve(const builder::Store& store, const memory::RetrieveRequest& req);

// Writes the report to `out` when given.
nlohmann::json bench_hanoi(const hanoi::BenchConfig& cfg, const std::optional<std::string>& out = std::nullopt);

// Method catalog with parameter schemas.
nlohmann::json tools_list();

}  // namespace ontomem::bus
