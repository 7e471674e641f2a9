#include "ontomem/builder/pipeline.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "ontomem/error.hpp"
#include "ontomem/reasoner/reasoner.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::builder {

using nlohmann::json;
using rdf::Term;
using rdf::Triple;

std::string expand_config_iri(const std::string& value, const util::KeyValueConfig& cfg) {
  std::string iri = value;
  if (auto colon = value.find(':'); colon != std::string::npos && value.find("://") == std::string::npos) {
    if (auto ns = cfg.get("prefix." + value.substr(0, colon))) iri = *ns + value.substr(colon + 1);
  }
  if (iri.find(':') == std::string::npos) throw ConfigError("'" + value + "' is not an IRI");
  return iri;
}

NormalizeConfig NormalizeConfig::from_config(const util::KeyValueConfig& cfg) {
  NormalizeConfig out;
  out.schema_ns = cfg.get_or("namespace.schema", out.schema_ns);
  out.property_ns = cfg.get_or("namespace.property", out.property_ns);
  for (const auto& [k, v] : cfg.entries()) {
    if (util::starts_with(k, "predicate.")) out.predicates[k.substr(10)] = expand_config_iri(v, cfg);
  }
  return out;
}

void seed_aliases(EntityRegistry& registry, const util::KeyValueConfig& cfg) {
  rdf::Provenance seen{"config", std::nullopt, 0, 1.0, rdf::Origin::SourceDocument};
  for (const auto& [k, v] : cfg.entries()) {
    if (!util::starts_with(k, "alias.")) continue;
    for (const auto& iri : util::split_ws(v)) registry.add_alias(expand_config_iri(iri, cfg), k.substr(6), seen);
  }
}

json to_json(const rdf::Provenance& p) {
  return {{"source_id", p.source_id},
          {"chunk_id", p.chunk_id ? json(*p.chunk_id) : json(nullptr)},
          {"extracted_at", p.extracted_at},
          {"confidence", p.confidence},
          {"origin", std::string(rdf::to_string(p.origin))}};
}

rdf::Provenance provenance_from_json(const json& j) {
  rdf::Provenance p;
  p.source_id = j.at("source_id").get<std::string>();
  if (j.contains("chunk_id") && !j["chunk_id"].is_null()) p.chunk_id = j["chunk_id"].get<std::string>();
  p.extracted_at = j.value("extracted_at", std::int64_t{0});
  p.confidence = j.value("confidence", 1.0);
  p.origin = rdf::origin_from_string(j.value("origin", "SOURCE_DOCUMENT"));
  p.validate();
  return p;
}

json to_json(const QuarantineEntry& q) {
  json provs = json::array();
  for (const auto& p : q.provenance) provs.push_back(to_json(p));
  return {{"triple", q.candidate}, {"reason", q.reason}, {"detail", q.detail}, {"provenance", std::move(provs)}};
}

std::optional<Term> literal_for(const std::string& mention, const std::string& type_guess) {
  static const std::regex date(R"(\d{4}-(0[1-9]|1[0-2])-(0[1-9]|[12]\d|3[01]))");
  static const std::regex integer(R"([+-]?\d+)");
  static const std::regex decimal(R"([+-]?\d*\.\d+)");
  if (mention.size() >= 2 && mention.front() == '"' && mention.back() == '"') {
    return Term::literal(mention.substr(1, mention.size() - 2));
  }
  if (std::regex_match(mention, date)) return Term::literal(mention, vocab::xsd::date);
  if (std::regex_match(mention, integer)) return Term::literal(mention, vocab::xsd::integer);
  if (std::regex_match(mention, decimal)) return Term::literal(mention, vocab::xsd::decimal);
  if (mention == "true" || mention == "false") return Term::literal(mention, vocab::xsd::boolean);
  if (util::to_lower(type_guess) == "literal") return Term::literal(mention);
  return std::nullopt;
}

namespace {

bool is_type_label(const std::string& label) { return label == "a" || label == "rdf:type" || label == vocab::rdf::type; }

std::string predicate_iri(const std::string& label, const NormalizeConfig& cfg) {
  if (is_type_label(label)) return vocab::rdf::type;
  if (auto it = cfg.predicates.find(label); it != cfg.predicates.end()) return it->second;
  if (label.find("://") != std::string::npos || util::starts_with(label, "urn:")) return label;
  std::string local = util::lower_camel(label);
  if (local.empty()) throw InputError("predicate label '" + label + "' has no word characters");
  return cfg.property_ns + local;
}

std::optional<std::string> class_iri(const std::string& type_guess, const NormalizeConfig& cfg) {
  if (type_guess.empty() || util::to_lower(type_guess) == "literal") return std::nullopt;
  std::string local = util::upper_camel(type_guess);
  if (local.empty()) return std::nullopt;
  return cfg.schema_ns + local;
}

}  // namespace

NormalizeResult normalize(const std::vector<ExtractionRecord>& records, EntityRegistry& registry,
                          const NormalizeConfig& cfg, const std::map<std::string, DocContext>& docs) {
  NormalizeResult out;
  for (const auto& rec : records) {
    rec.validate();
    DocContext ctx;
    if (auto it = docs.find(rec.doc_id); it != docs.end()) ctx = it->second;
    rdf::Provenance base{rec.doc_id, rec.doc_id + "#" + std::to_string(rec.chunk_index), ctx.received_at, 1.0,
                         ctx.origin};

    std::set<std::string> referenced;
    std::set<std::string> iri_needed;
    for (const auto& rel : rec.relations) {
      referenced.insert(rel.subject);
      referenced.insert(rel.object);
      iri_needed.insert(rel.subject);
      if (!is_type_label(rel.predicate) && !literal_for(rel.object, rec.entity(rel.object)->type_guess)) {
        iri_needed.insert(rel.object);
      }
    }

    std::map<std::string, Resolution> resolved;
    for (const auto& e : rec.entities) {
      if (!iri_needed.count(e.mention) && (referenced.count(e.mention) || literal_for(e.mention, e.type_guess))) {
        continue;
      }
      Resolution r = registry.resolve(e.mention, base);
      if (r.kind != ResolutionKind::Ambiguous) {
        for (const auto& a : e.aliases) registry.add_alias(r.iri, a, base);
        if (auto cls = class_iri(e.type_guess, cfg)) registry.add_type(r.iri, *cls);
      }
      resolved[e.mention] = std::move(r);
    }

    for (const auto& rel : rec.relations) {
      rdf::Provenance prov = base;
      prov.confidence = rel.confidence;
      std::string pred = predicate_iri(rel.predicate, cfg);
      const EntityMention* se = rec.entity(rel.subject);
      const EntityMention* oe = rec.entity(rel.object);

      auto ambiguous = [&](const std::string& mention) {
        const auto& r = resolved.at(mention);
        out.quarantined.push_back({rel.subject + " " + rel.predicate + " " + rel.object,
                                   std::nullopt,
                                   "ambiguous alias",
                                   {{"mention", mention}, {"candidates", r.candidates}},
                                   {prov}});
      };

      const Resolution& sr = resolved.at(rel.subject);
      if (sr.kind == ResolutionKind::Ambiguous) {
        ambiguous(rel.subject);
        continue;
      }
      CanonicalRelation cr{Triple(Term::iri(sr.iri), Term::iri(pred), Term::iri(sr.iri)), class_iri(se->type_guess, cfg),
                           std::nullopt, prov};
      Term object = Term::iri(sr.iri);
      if (pred == vocab::rdf::type) {
        auto cls = class_iri(rel.object, cfg);
        if (!cls) continue;
        object = Term::iri(*cls);
      } else if (auto lit = literal_for(rel.object, oe->type_guess)) {
        object = *lit;
      } else {
        const Resolution& orr = resolved.at(rel.object);
        if (orr.kind == ResolutionKind::Ambiguous) {
          ambiguous(rel.object);
          continue;
        }
        object = Term::iri(orr.iri);
        cr.object_type = class_iri(oe->type_guess, cfg);
      }
      cr.triple = Triple(cr.triple.subject(), cr.triple.predicate(), object);
      out.relations.push_back(std::move(cr));
    }
  }
  return out;
}

double Candidate::confidence() const {
  double c = 0.0;
  for (const auto& p : provenance) c = std::max(c, p.confidence);
  return provenance.empty() ? 1.0 : c;
}

std::vector<Candidate> construct_triples(const std::vector<CanonicalRelation>& relations) {
  std::map<Triple, std::vector<rdf::Provenance>> merged;
  auto add = [&](const Triple& t, const rdf::Provenance& p) {
    auto& list = merged[t];
    if (std::find(list.begin(), list.end(), p) == list.end()) list.push_back(p);
  };
  const Term type = Term::iri(vocab::rdf::type);
  for (const auto& r : relations) {
    add(r.triple, r.provenance);
    if (r.subject_type) add(Triple(r.triple.subject(), type, Term::iri(*r.subject_type)), r.provenance);
    if (r.object_type && !r.triple.object().is_literal()) {
      add(Triple(r.triple.object(), type, Term::iri(*r.object_type)), r.provenance);
    }
  }
  std::vector<Candidate> out;
  for (auto& [t, provs] : merged) out.push_back({t, std::move(provs), false, ""});
  return out;
}

namespace {

json results_json(const std::vector<shacl::ValidationResult>& results) {
  shacl::ValidationReport report{results.empty(), results};
  return shacl::to_json(report);
}

struct ResultKey {
  std::string focus, path, constraint, message;
  friend auto operator<=>(const ResultKey&, const ResultKey&) = default;
};

ResultKey key_of(const shacl::ValidationResult& r) {
  return {r.focus.canonical(), r.path.value_or(""), r.constraint, r.message};
}

std::vector<shacl::ValidationResult> violations(const rdf::Graph& asserted, const rdf::Graph& materialized,
                                                const std::vector<shacl::NodeShape>& shapes) {
  std::map<ResultKey, shacl::ValidationResult> all;
  for (const auto* g : {&asserted, &materialized}) {
    for (auto& r : shacl::validate(*g, shapes).results) all.emplace(key_of(r), std::move(r));
  }
  std::vector<shacl::ValidationResult> out;
  for (auto& [_, r] : all) out.push_back(std::move(r));
  return out;
}

}  // namespace

GateResult validate_gate(std::vector<Candidate> candidates, const rdf::Graph& trusted,
                         const std::vector<shacl::NodeShape>& shapes) {
  // Merge duplicate candidates.
  std::map<Triple, std::size_t> index;
  std::vector<Candidate> cands;
  for (auto& c : candidates) {
    auto [it, fresh] = index.try_emplace(c.triple, cands.size());
    if (fresh) {
      cands.push_back(std::move(c));
      continue;
    }
    auto& into = cands[it->second];
    for (const auto& p : c.provenance) {
      if (std::find(into.provenance.begin(), into.provenance.end(), p) == into.provenance.end()) {
        into.provenance.push_back(p);
      }
    }
    into.pinned = into.pinned && c.pinned;
    if (into.group.empty()) into.group = c.group;
  }

  GateResult result;
  std::set<std::size_t> active;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (trusted.contains(cands[i].triple)) {
      result.accepted.push_back(cands[i]);
    } else {
      active.insert(i);
    }
  }

  rdf::Graph base_m = reasoner::materialize(trusted);
  auto base_conflict_list = reasoner::check_consistency(base_m);
  std::set<reasoner::Conflict> base_conflicts(base_conflict_list.begin(), base_conflict_list.end());
  std::set<ResultKey> base_results;
  for (const auto& r : violations(trusted, base_m, shapes)) base_results.insert(key_of(r));

  auto quarantine = [&](std::size_t i, const std::string& reason, const json& detail, std::set<std::size_t>& removed) {
    std::vector<std::size_t> members = {i};
    if (!cands[i].group.empty()) {
      for (std::size_t j : active) {
        if (j != i && cands[j].group == cands[i].group) members.push_back(j);
      }
    }
    for (std::size_t j : members) {
      if (!removed.insert(j).second) continue;
      result.quarantined.push_back(
          {cands[j].triple.canonical(), cands[j].triple, reason, detail, cands[j].provenance});
    }
  };
  // Unpinned first, then lowest confidence. Ties go against the candidate
  // with fewer provenance records, then the most recently extracted one.
  auto latest = [&](std::size_t i) {
    std::int64_t t = 0;
    for (const auto& p : cands[i].provenance) t = std::max(t, p.extracted_at);
    return t;
  };
  auto blame_order = [&](std::size_t a, std::size_t b) {
    if (cands[a].pinned != cands[b].pinned) return !cands[a].pinned;
    if (cands[a].confidence() != cands[b].confidence()) return cands[a].confidence() < cands[b].confidence();
    if (cands[a].provenance.size() != cands[b].provenance.size()) {
      return cands[a].provenance.size() < cands[b].provenance.size();
    }
    if (latest(a) != latest(b)) return latest(a) > latest(b);
    return cands[b].triple < cands[a].triple;
  };

  while (!active.empty()) {
    rdf::Graph trial = trusted;
    std::map<Triple, std::size_t> active_by_triple;
    for (std::size_t i : active) {
      trial.insert(cands[i].triple, std::span<const rdf::Provenance>(cands[i].provenance));
      active_by_triple[cands[i].triple] = i;
    }
    auto m = reasoner::materialize_with_trace(trial);

    std::set<std::size_t> removed;
    bool unattributed = false;
    for (const auto& conflict : reasoner::check_consistency(m.graph)) {
      if (base_conflicts.count(conflict)) continue;
      std::set<std::size_t> participants;
      std::vector<Triple> roots = conflict.detail;
      roots.insert(roots.end(), conflict.axioms.begin(), conflict.axioms.end());
      for (const auto& root : roots) {
        std::vector<Triple> support = {root};
        for (const auto& [t, d] : reasoner::explain(m, root)) {
          support.insert(support.end(), d.premises.begin(), d.premises.end());
        }
        for (const auto& t : support) {
          if (auto it = active_by_triple.find(t); it != active_by_triple.end()) participants.insert(it->second);
        }
      }
      if (participants.empty()) {
        unattributed = true;
        continue;
      }
      if (std::any_of(participants.begin(), participants.end(), [&](std::size_t i) { return removed.count(i); })) {
        continue;
      }
      std::size_t victim = *std::min_element(participants.begin(), participants.end(), blame_order);
      quarantine(victim, "conflict", reasoner::to_json({conflict}).at(0), removed);
    }

    if (removed.empty() && !unattributed) {
      std::map<Term, std::vector<shacl::ValidationResult>> by_focus;
      for (auto& r : violations(trial, m.graph, shapes)) {
        if (!base_results.count(key_of(r))) by_focus[r.focus].push_back(std::move(r));
      }
      if (by_focus.empty()) break;
      std::vector<std::size_t> hit;
      for (int pass = 0; pass < 2 && hit.empty(); ++pass) {
        for (std::size_t i : active) {
          const Term& end = pass == 0 ? cands[i].triple.subject() : cands[i].triple.object();
          if (by_focus.count(end)) hit.push_back(i);
        }
      }
      if (std::any_of(hit.begin(), hit.end(), [&](std::size_t i) { return !cands[i].pinned; })) {
        hit.erase(std::remove_if(hit.begin(), hit.end(), [&](std::size_t i) { return cands[i].pinned; }), hit.end());
      }
      if (hit.empty()) hit.push_back(*std::min_element(active.begin(), active.end(), blame_order));
      for (std::size_t i : hit) {
        auto it = by_focus.find(cands[i].triple.subject());
        if (it == by_focus.end()) it = by_focus.find(cands[i].triple.object());
        json detail = it != by_focus.end() ? results_json(it->second) : results_json(by_focus.begin()->second);
        quarantine(i, "shape violation", detail, removed);
      }
    }

    if (removed.empty()) {
      // A new conflict none of whose support is a candidate: blame the
      // weakest remaining candidate so the loop still makes progress.
      std::size_t victim = *std::min_element(active.begin(), active.end(), blame_order);
      quarantine(victim, "conflict", json::object(), removed);
    }
    for (std::size_t i : removed) active.erase(i);
  }

  for (std::size_t i : active) result.accepted.push_back(cands[i]);
  std::sort(result.accepted.begin(), result.accepted.end(),
            [](const Candidate& a, const Candidate& b) { return a.triple < b.triple; });
  return result;
}

}  // namespace ontomem::builder
