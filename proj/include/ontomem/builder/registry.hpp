#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontomem/rdf/graph.hpp"

namespace ontomem::builder {

struct RegistryEntry {
  std::string iri;
  std::string label;
  std::set<std::string> aliases;
  std::set<std::string> types;
  rdf::Provenance first_seen;

  friend bool operator==(const RegistryEntry&, const RegistryEntry&) = default;
};

enum class ResolutionKind { Exact, Folded, Minted, Ambiguous };

struct Resolution {
  ResolutionKind kind = ResolutionKind::Minted;
  // Empty when ambiguous.
  std::string iri;
  // Competing IRIs when ambiguous.
  std::vector<std::string> candidates;
};

class EntityRegistry {
 public:
  explicit EntityRegistry(std::string instance_ns = "http://example.org/inst/");

  const std::string& instance_namespace() const { return instance_ns_; }

  // Exact alias when it names one IRI, then a case and whitespace folded
  // match, otherwise a fresh IRI: namespace + slug, with "-2", "-3", ... on
  // collision. Does not modify the registry.
  Resolution lookup(const std::string& mention) const;
  // As lookup, but records a minted IRI (label = mention) and adds the
  // mention as an alias of a folded hit.
  Resolution resolve(const std::string& mention, const rdf::Provenance& seen);

  // Registers `alias` for an existing entry; an alias shared by two IRIs is
  // flagged ambiguous. Unknown IRIs get a new entry.
  void add_alias(const std::string& iri, const std::string& alias, const rdf::Provenance& seen = {});
  void add_type(const std::string& iri, const std::string& type_iri);

  bool is_ambiguous(const std::string& alias) const { return ambiguous_.count(alias) > 0; }
  const std::set<std::string>& ambiguous_aliases() const { return ambiguous_; }
  const RegistryEntry* find(const std::string& iri) const;
  const std::map<std::string, RegistryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // IRIs whose aliases contain `alias` exactly.
  std::set<std::string> iris_for_alias(const std::string& alias) const;

  rdf::Graph to_graph() const;
  static EntityRegistry from_graph(const rdf::Graph& g, std::string instance_ns);

  friend bool operator==(const EntityRegistry&, const EntityRegistry&) = default;

 private:
  RegistryEntry& entry(const std::string& iri, const rdf::Provenance& seen);
  std::string mint_iri(const std::string& mention) const;

  std::string instance_ns_;
  std::map<std::string, RegistryEntry> entries_;
  std::map<std::string, std::set<std::string>> by_alias_;
  std::map<std::string, std::set<std::string>> by_folded_;
  std::set<std::string> ambiguous_;
};

}  // namespace ontomem::builder
