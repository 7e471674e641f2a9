#include "ontomem/builder/registry.hpp"

#include <cstdio>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::builder {

using rdf::Term;
using rdf::Triple;

EntityRegistry::EntityRegistry(std::string instance_ns) : instance_ns_(std::move(instance_ns)) {}

std::string EntityRegistry::mint_iri(const std::string& mention) const {
  std::string slug = util::slugify(mention);
  if (slug.empty()) slug = "entity";
  std::string iri = instance_ns_ + slug;
  for (int n = 2; entries_.count(iri); ++n) iri = instance_ns_ + slug + "-" + std::to_string(n);
  return iri;
}

Resolution EntityRegistry::lookup(const std::string& mention) const {
  if (auto it = by_alias_.find(mention); it != by_alias_.end() && !it->second.empty()) {
    if (it->second.size() == 1 && !ambiguous_.count(mention)) return {ResolutionKind::Exact, *it->second.begin(), {}};
    return {ResolutionKind::Ambiguous, "", {it->second.begin(), it->second.end()}};
  }
  if (auto it = by_folded_.find(util::fold(mention)); it != by_folded_.end() && !it->second.empty()) {
    if (it->second.size() == 1) return {ResolutionKind::Folded, *it->second.begin(), {}};
    return {ResolutionKind::Ambiguous, "", {it->second.begin(), it->second.end()}};
  }
  return {ResolutionKind::Minted, mint_iri(mention), {}};
}

Resolution EntityRegistry::resolve(const std::string& mention, const rdf::Provenance& seen) {
  Resolution r = lookup(mention);
  if (r.kind == ResolutionKind::Minted) {
    entry(r.iri, seen).label = mention;
    add_alias(r.iri, mention, seen);
  } else if (r.kind == ResolutionKind::Folded) {
    add_alias(r.iri, mention, seen);
  }
  return r;
}

RegistryEntry& EntityRegistry::entry(const std::string& iri, const rdf::Provenance& seen) {
  auto [it, fresh] = entries_.try_emplace(iri);
  if (fresh) {
    it->second.iri = iri;
    it->second.first_seen = seen;
  }
  return it->second;
}

void EntityRegistry::add_alias(const std::string& iri, const std::string& alias, const rdf::Provenance& seen) {
  auto& e = entry(iri, seen);
  if (e.label.empty()) e.label = alias;
  e.aliases.insert(alias);
  auto& owners = by_alias_[alias];
  owners.insert(iri);
  if (owners.size() > 1) ambiguous_.insert(alias);
  by_folded_[util::fold(alias)].insert(iri);
}

void EntityRegistry::add_type(const std::string& iri, const std::string& type_iri) {
  entry(iri, {}).types.insert(type_iri);
}

const RegistryEntry* EntityRegistry::find(const std::string& iri) const {
  auto it = entries_.find(iri);
  return it == entries_.end() ? nullptr : &it->second;
}

std::set<std::string> EntityRegistry::iris_for_alias(const std::string& alias) const {
  auto it = by_alias_.find(alias);
  return it == by_alias_.end() ? std::set<std::string>{} : it->second;
}

rdf::Graph EntityRegistry::to_graph() const {
  namespace sys = vocab::sys;
  rdf::Graph g;
  auto add = [&](const Term& s, const std::string& p, Term o) { g.insert(Triple(s, Term::iri(p), std::move(o))); };
  for (const auto& [iri, e] : entries_) {
    Term s = Term::iri(iri);
    if (!e.label.empty()) add(s, vocab::rdfs::label, Term::literal(e.label));
    for (const auto& a : e.aliases) add(s, sys::alias, Term::literal(a));
    for (const auto& t : e.types) add(s, sys::entityType, Term::iri(t));
    add(s, sys::firstSeenSource, Term::literal(e.first_seen.source_id));
    if (e.first_seen.chunk_id) add(s, sys::firstSeenChunk, Term::literal(*e.first_seen.chunk_id));
    add(s, sys::firstSeenAt, Term::integer(e.first_seen.extracted_at));
    char conf[32];
    std::snprintf(conf, sizeof conf, "%.6g", e.first_seen.confidence);
    add(s, sys::firstSeenConfidence, Term::literal(conf, vocab::xsd::decimal));
    add(s, sys::firstSeenOrigin, Term::literal(std::string(rdf::to_string(e.first_seen.origin))));
  }
  for (const auto& a : ambiguous_) add(Term::iri(sys::registry), sys::ambiguousAlias, Term::literal(a));
  return g;
}

EntityRegistry EntityRegistry::from_graph(const rdf::Graph& g, std::string instance_ns) {
  namespace sys = vocab::sys;
  EntityRegistry reg(std::move(instance_ns));
  auto one = [&](const Term& s, const std::string& p) -> std::optional<Term> {
    auto v = g.objects(s, Term::iri(p));
    if (v.empty()) return std::nullopt;
    return v.front();
  };
  for (const auto& s : g.nodes()) {
    if (!s.is_iri() || s.value() == sys::registry) continue;
    auto src = one(s, sys::firstSeenSource);
    if (!src) continue;
    rdf::Provenance seen;
    seen.source_id = src->value();
    if (auto c = one(s, sys::firstSeenChunk)) seen.chunk_id = c->value();
    if (auto at = one(s, sys::firstSeenAt)) seen.extracted_at = std::stoll(at->value());
    if (auto c = one(s, sys::firstSeenConfidence)) seen.confidence = std::stod(c->value());
    if (auto o = one(s, sys::firstSeenOrigin)) seen.origin = rdf::origin_from_string(o->value());
    auto& e = reg.entry(s.value(), seen);
    if (auto l = one(s, vocab::rdfs::label)) e.label = l->value();
    for (const auto& a : g.objects(s, Term::iri(sys::alias))) reg.add_alias(s.value(), a.value(), seen);
    for (const auto& t : g.objects(s, Term::iri(sys::entityType))) reg.add_type(s.value(), t.value());
  }
  for (const auto& a : g.objects(Term::iri(sys::registry), Term::iri(sys::ambiguousAlias))) {
    reg.ambiguous_.insert(a.value());
  }
  return reg;
}

}  // namespace ontomem::builder
