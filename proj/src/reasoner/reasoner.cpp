#include "ontomem/reasoner/reasoner.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::reasoner {

using rdf::Term;
using rdf::Triple;

namespace {

struct Vocab {
  Term type = Term::iri(vocab::rdf::type);
  Term sub_class = Term::iri(vocab::rdfs::subClassOf);
  Term sub_prop = Term::iri(vocab::rdfs::subPropertyOf);
  Term domain = Term::iri(vocab::rdfs::domain);
  Term range = Term::iri(vocab::rdfs::range);
  Term inverse = Term::iri(vocab::owl::inverseOf);
  Term symmetric = Term::iri(vocab::owl::SymmetricProperty);
  Term transitive = Term::iri(vocab::owl::TransitiveProperty);
  Term functional = Term::iri(vocab::owl::FunctionalProperty);
  Term disjoint = Term::iri(vocab::owl::disjointWith);
  Term rdf_subject = Term::iri(vocab::rdf::subject);
  Term rdf_predicate = Term::iri(vocab::rdf::predicate);
  Term rdf_object = Term::iri(vocab::rdf::object);
  Term sys_not = Term::iri(vocab::sys::not_);
};

const Vocab& V() {
  static const Vocab v;
  return v;
}

rdf::Provenance reasoner_provenance() {
  return rdf::Provenance{std::string(kReasonerSource), std::nullopt, 0, 1.0, rdf::Origin::ToolResult};
}

class Materializer {
 public:
  Materializer(const rdf::Graph& input, const MaterializeOptions& opts) : opts_(opts) {
    out_.graph = input;
    for (const auto& t : input.triples()) queue_.push_back(t);
  }

  Materialization run() {
    while (!queue_.empty()) {
      Triple t = queue_.front();
      queue_.pop_front();
      apply(t);
    }
    return std::move(out_);
  }

 private:
  const rdf::Graph& g() const { return out_.graph; }

  void derive(RuleId rule, const Term& s, const Term& p, const Term& o, std::vector<Triple> premises) {
    if (s.is_literal()) return;
    if (++out_.firings > opts_.max_firings) {
      throw DivergenceError("rule firings exceeded the ceiling of " + std::to_string(opts_.max_firings));
    }
    Triple t(s, p, o);
    if (out_.graph.contains(t)) return;
    out_.graph.insert(t, reasoner_provenance());
    out_.derivations.emplace(t, Derivation{rule, std::move(premises)});
    queue_.push_back(t);
  }

  void transitive_step(RuleId rule, const Triple& t) {
    const Term &x = t.subject(), &p = t.predicate(), &y = t.object();
    for (const auto& z : g().objects(y, p)) derive(rule, x, p, z, {t, Triple(y, p, z)});
    if (x.is_literal()) return;
    for (const auto& w : g().subjects(p, x)) derive(rule, w, p, y, {Triple(w, p, x), t});
  }

  void apply(const Triple& t) {
    const Vocab& v = V();
    const Term &s = t.subject(), &p = t.predicate(), &o = t.object();

    if (p == v.sub_class) {
      transitive_step(RuleId::SubclassTrans, t);
      for (const auto& x : g().subjects(v.type, s)) {
        derive(RuleId::TypeViaSubclass, x, v.type, o, {Triple(x, v.type, s), t});
      }
    }
    if (p == v.sub_prop) transitive_step(RuleId::SubpropTrans, t);
    if (p == v.type) {
      for (const auto& b : g().objects(o, v.sub_class)) {
        derive(RuleId::TypeViaSubclass, s, v.type, b, {t, Triple(o, v.sub_class, b)});
      }
    }

    // Schema axioms: join against every use of the property.
    if (p == v.domain && s.is_iri()) {
      for (const auto& u : g().match(std::nullopt, s, std::nullopt)) {
        derive(RuleId::DomainTyping, u.subject(), v.type, o, {t, u});
      }
    }
    if (p == v.range && s.is_iri()) {
      for (const auto& u : g().match(std::nullopt, s, std::nullopt)) {
        derive(RuleId::RangeTyping, u.object(), v.type, o, {t, u});
      }
    }
    if (p == v.inverse && s.is_iri() && o.is_iri()) {
      for (const auto& u : g().match(std::nullopt, s, std::nullopt)) {
        derive(RuleId::InverseOf, u.object(), o, u.subject(), {t, u});
      }
      for (const auto& u : g().match(std::nullopt, o, std::nullopt)) {
        derive(RuleId::InverseOf, u.object(), s, u.subject(), {t, u});
      }
    }
    if (p == v.type && o == v.symmetric && s.is_iri()) {
      for (const auto& u : g().match(std::nullopt, s, std::nullopt)) {
        derive(RuleId::Symmetric, u.object(), s, u.subject(), {t, u});
      }
    }
    if (p == v.type && o == v.transitive && s.is_iri()) {
      for (const auto& u : g().match(std::nullopt, s, std::nullopt)) {
        for (const auto& z : g().objects(u.object(), s)) {
          derive(RuleId::TransitiveProp, u.subject(), s, z, {t, u, Triple(u.object(), s, z)});
        }
      }
    }

    // Data triple: join against axioms about its predicate.
    for (const auto& c : g().objects(p, v.domain)) derive(RuleId::DomainTyping, s, v.type, c, {Triple(p, v.domain, c), t});
    for (const auto& c : g().objects(p, v.range)) derive(RuleId::RangeTyping, o, v.type, c, {Triple(p, v.range, c), t});
    for (const auto& q : g().objects(p, v.inverse)) {
      if (q.is_iri()) derive(RuleId::InverseOf, o, q, s, {Triple(p, v.inverse, q), t});
    }
    for (const auto& q : g().subjects(v.inverse, p)) {
      if (q.is_iri()) derive(RuleId::InverseOf, o, q, s, {Triple(q, v.inverse, p), t});
    }
    if (g().contains(Triple(p, v.type, v.symmetric))) {
      derive(RuleId::Symmetric, o, p, s, {Triple(p, v.type, v.symmetric), t});
    }
    if (g().contains(Triple(p, v.type, v.transitive))) {
      const Triple axiom(p, v.type, v.transitive);
      for (const auto& z : g().objects(o, p)) derive(RuleId::TransitiveProp, s, p, z, {axiom, t, Triple(o, p, z)});
      for (const auto& w : g().subjects(p, s)) derive(RuleId::TransitiveProp, w, p, o, {axiom, Triple(w, p, s), t});
    }
  }

  MaterializeOptions opts_;
  Materialization out_;
  std::deque<Triple> queue_;
};

void explain_into(const Materialization& m, const Triple& t, std::set<Triple>& seen,
                  std::vector<std::pair<Triple, Derivation>>& out) {
  auto it = m.derivations.find(t);
  if (it == m.derivations.end() || !seen.insert(t).second) return;
  for (const auto& premise : it->second.premises) explain_into(m, premise, seen, out);
  out.emplace_back(t, it->second);
}

}  // namespace

const std::vector<InferenceRule>& rule_set() {
  static const std::vector<InferenceRule> rules = {
      {RuleId::SubclassTrans, "A subClassOf B, B subClassOf C => A subClassOf C"},
      {RuleId::SubpropTrans, "p subPropertyOf q, q subPropertyOf r => p subPropertyOf r"},
      {RuleId::TypeViaSubclass, "x type A, A subClassOf B => x type B"},
      {RuleId::DomainTyping, "p domain C, x p y => x type C"},
      {RuleId::RangeTyping, "p range C, x p y => y type C (y not a literal)"},
      {RuleId::InverseOf, "p inverseOf q, x p y => y q x; x q y => y p x"},
      {RuleId::Symmetric, "p type SymmetricProperty, x p y => y p x"},
      {RuleId::TransitiveProp, "p type TransitiveProperty, x p y, y p z => x p z"},
  };
  return rules;
}

std::string_view to_string(RuleId id) {
  switch (id) {
    case RuleId::SubclassTrans: return "SUBCLASS_TRANS";
    case RuleId::SubpropTrans: return "SUBPROP_TRANS";
    case RuleId::TypeViaSubclass: return "TYPE_VIA_SUBCLASS";
    case RuleId::DomainTyping: return "DOMAIN_TYPING";
    case RuleId::RangeTyping: return "RANGE_TYPING";
    case RuleId::InverseOf: return "INVERSE_OF";
    case RuleId::Symmetric: return "SYMMETRIC";
    case RuleId::TransitiveProp: return "TRANSITIVE_PROP";
  }
  return "?";
}

std::string_view to_string(ConflictKind kind) {
  switch (kind) {
    case ConflictKind::DisjointClass: return "DISJOINT_CLASS";
    case ConflictKind::FunctionalProperty: return "FUNCTIONAL_PROPERTY";
    case ConflictKind::ExplicitNegation: return "EXPLICIT_NEGATION";
  }
  return "?";
}

Materialization materialize_with_trace(const rdf::Graph& graph, const MaterializeOptions& opts) {
  return Materializer(graph, opts).run();
}

rdf::Graph materialize(const rdf::Graph& graph, const MaterializeOptions& opts) {
  return materialize_with_trace(graph, opts).graph;
}

std::vector<std::pair<Triple, Derivation>> explain(const Materialization& m, const Triple& t) {
  std::set<Triple> seen;
  std::vector<std::pair<Triple, Derivation>> out;
  explain_into(m, t, seen, out);
  return out;
}

bool is_inferred(const rdf::Graph& g, const Triple& t) {
  const auto& provs = g.provenance(t);
  return !provs.empty() && std::all_of(provs.begin(), provs.end(), [](const rdf::Provenance& p) {
    return p.source_id == kReasonerSource;
  });
}

rdf::Graph asserted_only(const rdf::Graph& g) {
  rdf::Graph out;
  for (const auto& t : g.triples()) {
    if (is_inferred(g, t)) continue;
    std::vector<rdf::Provenance> keep;
    for (const auto& p : g.provenance(t)) {
      if (p.source_id != kReasonerSource) keep.push_back(p);
    }
    out.insert(t, keep);
  }
  return out;
}

Term negation_node(const Triple& t) {
  return Term::iri(vocab::kSys + "neg-" + util::hex64(util::fnv1a64(t.canonical())));
}

std::vector<Triple> negation_triples(const Triple& t) {
  const Vocab& v = V();
  Term node = negation_node(t);
  return {Triple(node, v.rdf_subject, t.subject()), Triple(node, v.rdf_predicate, t.predicate()),
          Triple(node, v.rdf_object, t.object()), Triple(node, v.sys_not, Term::boolean(true))};
}

std::vector<Conflict> check_consistency(const rdf::Graph& graph) {
  const Vocab& v = V();
  std::set<Conflict> found;

  std::set<std::tuple<Term, Term, Term>> disjoint_seen;
  for (const auto& axiom : graph.match(std::nullopt, v.disjoint, std::nullopt)) {
    const Term& a = axiom.subject();
    const Term& b = axiom.object();
    const Term& lo = std::min(a, b);
    const Term& hi = std::max(a, b);
    for (const auto& x : graph.subjects(v.type, a)) {
      if (!graph.contains(Triple(x, v.type, b))) continue;
      if (!disjoint_seen.emplace(x, lo, hi).second) continue;
      std::vector<Triple> detail = {Triple(x, v.type, lo)};
      if (hi != lo) detail.emplace_back(x, v.type, hi);
      found.insert(Conflict{ConflictKind::DisjointClass, x, detail, {axiom}});
    }
  }

  for (const auto& p : graph.subjects(v.type, v.functional)) {
    if (!p.is_iri()) continue;
    const Triple axiom(p, v.type, v.functional);
    std::optional<Term> current;
    std::vector<Triple> group;
    auto flush = [&]() {
      if (group.size() > 1) found.insert(Conflict{ConflictKind::FunctionalProperty, *current, group, {axiom}});
      group.clear();
    };
    for (const auto& t : graph.match_using(rdf::IndexOrder::Pos, std::nullopt, p, std::nullopt)) {
      if (!current || *current != t.subject()) {
        if (current) flush();
        current = t.subject();
      }
      group.push_back(t);
    }
    if (current) flush();
  }

  for (const auto& marker : graph.match(std::nullopt, v.sys_not, Term::boolean(true))) {
    const Term& node = marker.subject();
    auto subjects = graph.objects(node, v.rdf_subject);
    auto predicates = graph.objects(node, v.rdf_predicate);
    auto objects = graph.objects(node, v.rdf_object);
    for (const auto& s : subjects) {
      if (s.is_literal()) continue;
      for (const auto& p : predicates) {
        if (!p.is_iri()) continue;
        for (const auto& o : objects) {
          Triple denied(s, p, o);
          if (!graph.contains(denied)) continue;
          found.insert(Conflict{ConflictKind::ExplicitNegation, s, {denied},
                                {Triple(node, v.rdf_subject, s), Triple(node, v.rdf_predicate, p),
                                 Triple(node, v.rdf_object, o), marker}});
        }
      }
    }
  }
  return {found.begin(), found.end()};
}

nlohmann::json to_json(const std::vector<Conflict>& conflicts) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : conflicts) {
    nlohmann::json detail = nlohmann::json::array();
    for (const auto& t : c.detail) detail.push_back(t.canonical());
    nlohmann::json axioms = nlohmann::json::array();
    for (const auto& t : c.axioms) axioms.push_back(t.canonical());
    out.push_back({{"kind", to_string(c.kind)},
                   {"subject", c.subject.canonical()},
                   {"detail", std::move(detail)},
                   {"axioms", std::move(axioms)}});
  }
  return out;
}

}  // namespace ontomem::reasoner
