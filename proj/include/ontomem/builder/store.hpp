#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ontomem/builder/pipeline.hpp"
#include "ontomem/builder/registry.hpp"
#include "ontomem/builder/source.hpp"
#include "ontomem/rdf/graph.hpp"
#include "ontomem/shacl/shacl.hpp"
#include "ontomem/turtle/turtle.hpp"
#include "ontomem/util/config.hpp"

namespace ontomem::builder {

struct OntologyDelta {
  int base_version = 0;
  // Equals base_version when nothing new was accepted.
  int version_id = 0;
  rdf::Graph accepted;
  std::vector<QuarantineEntry> quarantined;

  nlohmann::json to_json() const;
};

// Exclusive ownership of a store directory, held through a `lock` file.
class StoreLock {
 public:
  // Throws IoError when another process holds the lock.
  explicit StoreLock(const std::string& dir);
  ~StoreLock();
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;

 private:
  std::string path_;
};

// Directory layout:
//   ontomem.conf       key = value configuration
//   version            current version number
//   trusted.ttl        trusted graph, canonical Turtle
//   provenance.jsonl   provenance records of trusted triples
//   delta-N.ttl        triples added by version N
//   quarantine.jsonl   rejected candidates, append-only
//   registry.ttl       entity registry
//   chunks.jsonl       ingested chunks (vector memory payloads)
//   shapes.ttl         shapes used by the gate, when configured
class Store {
 public:
  static util::KeyValueConfig default_config();
  // Creates the layout. Throws IoError when `dir` already holds a store.
  static Store init(const std::string& dir, const util::KeyValueConfig& cfg = default_config());
  // Throws IoError when `dir` is not a store.
  static Store open(const std::string& dir);

  const std::string& dir() const { return dir_; }
  int version() const { return version_; }
  const rdf::Graph& trusted() const { return trusted_; }
  const util::KeyValueConfig& config() const { return config_; }
  turtle::PrefixMap prefixes() const;
  EntityRegistry& registry() { return registry_; }
  const EntityRegistry& registry() const { return registry_; }

  std::vector<shacl::NodeShape> shapes() const;
  // Parses, checks and stores the shapes document.
  void set_shapes(const std::string& turtle_text);

  // Writes the accepted triples that are new to the trusted graph as the
  // next version and appends quarantined entries to the log. An empty delta
  // keeps the version. Throws VersionConflictError when the store moved past
  // `base_version`.
  OntologyDelta commit(const GateResult& gate, int base_version);

  // Trusted graph as of `version`, rebuilt from the delta files.
  rdf::Graph graph_at(int version) const;
  std::vector<nlohmann::json> quarantine_log() const;

  std::vector<Chunk> chunks() const;
  // Replaces stored chunks of the same documents.
  void save_chunks(const std::vector<Chunk>& chunks);
  void save_registry() const;

 private:
  explicit Store(std::string dir) : dir_(std::move(dir)) {}
  std::string path(const std::string& name) const;
  int read_version() const;
  void load();

  std::string dir_;
  int version_ = 0;
  rdf::Graph trusted_;
  util::KeyValueConfig config_;
  EntityRegistry registry_;
};

// Writes through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace ontomem::builder
