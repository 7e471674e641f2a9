#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontomem/builder/extract.hpp"
#include "ontomem/builder/registry.hpp"
#include "ontomem/rdf/graph.hpp"
#include "ontomem/shacl/shacl.hpp"
#include "ontomem/util/config.hpp"

namespace ontomem::builder {

struct NormalizeConfig {
  std::string schema_ns = "http://example.org/schema#";
  std::string property_ns = "http://example.org/prop#";
  // Predicate label -> IRI.
  std::map<std::string, std::string> predicates;

  // namespace.schema, namespace.property and predicate.<label> entries.
  static NormalizeConfig from_config(const util::KeyValueConfig& cfg);
};

// Expands `prefix:local` using the prefix.<name> entries of `cfg`.
std::string expand_config_iri(const std::string& value, const util::KeyValueConfig& cfg);

// Registers `alias.<text> = <iri> [<iri> ...]` entries; an alias given
// several IRIs is ambiguous.
void seed_aliases(EntityRegistry& registry, const util::KeyValueConfig& cfg);

// Provenance context of the document a record came from.
struct DocContext {
  std::int64_t received_at = 0;
  rdf::Origin origin = rdf::Origin::SourceDocument;
};

struct CanonicalRelation {
  rdf::Triple triple;
  std::optional<std::string> subject_type;
  std::optional<std::string> object_type;
  rdf::Provenance provenance;
};

struct QuarantineEntry {
  // Canonical triple text, or "subject predicate object" mentions when no
  // triple could be formed.
  std::string candidate;
  std::optional<rdf::Triple> triple;
  // "ambiguous alias", "conflict" or "shape violation".
  std::string reason;
  nlohmann::json detail;
  std::vector<rdf::Provenance> provenance;
};

nlohmann::json to_json(const QuarantineEntry& q);
nlohmann::json to_json(const rdf::Provenance& p);
rdf::Provenance provenance_from_json(const nlohmann::json& j);

struct NormalizeResult {
  std::vector<CanonicalRelation> relations;
  std::vector<QuarantineEntry> quarantined;
};

// Object mentions that read as a "quoted string", date, integer, decimal or
// boolean become literals; anything else typed "literal" becomes a string.
std::optional<rdf::Term> literal_for(const std::string& mention, const std::string& type_guess);

NormalizeResult normalize(const std::vector<ExtractionRecord>& records, EntityRegistry& registry,
                          const NormalizeConfig& cfg, const std::map<std::string, DocContext>& docs = {});

struct Candidate {
  rdf::Triple triple;
  std::vector<rdf::Provenance> provenance;
  // Pinned candidates (schema axioms) are blamed for a conflict only when no
  // unpinned candidate takes part in it.
  bool pinned = false;
  // Candidates sharing a non-empty group are quarantined together.
  std::string group;

  double confidence() const;
};

// One triple per relation plus an rdf:type triple per typed endpoint; equal
// triples merge their provenance. Sorted by triple.
std::vector<Candidate> construct_triples(const std::vector<CanonicalRelation>& relations);

struct GateResult {
  std::vector<Candidate> accepted;
  std::vector<QuarantineEntry> quarantined;
};

// Trial graph = trusted + candidates, materialized. Candidates behind a new
// conflict are removed greedily, lowest confidence first, one per conflict
// per round. Then candidates whose subject gains a new shape violation (in
// the asserted or the materialized trial) are removed. Repeats until clean.
GateResult validate_gate(std::vector<Candidate> candidates, const rdf::Graph& trusted,
                         const std::vector<shacl::NodeShape>& shapes);

}  // namespace ontomem::builder
