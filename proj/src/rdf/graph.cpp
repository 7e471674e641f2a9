#include "ontomem/rdf/graph.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::rdf {

namespace {

bool add_to(std::map<Term, std::map<Term, std::set<Term>>>& idx, const Term& a,
            const Term& b, const Term& c) {
  return idx[a][b].insert(c).second;
}

void erase_from(std::map<Term, std::map<Term, std::set<Term>>>& idx, const Term& a,
                const Term& b, const Term& c) {
  auto it = idx.find(a);
  if (it == idx.end()) return;
  auto jt = it->second.find(b);
  if (jt == it->second.end()) return;
  jt->second.erase(c);
  if (jt->second.empty()) it->second.erase(jt);
  if (it->second.empty()) idx.erase(it);
}

const std::vector<Provenance> kNoProvenance;

}  // namespace

InsertOutcome Graph::insert(const Triple& t, const std::optional<Provenance>& prov) {
  if (prov) {
    return insert(t, std::span<const Provenance>(&*prov, 1));
  }
  return insert(t, std::span<const Provenance>{});
}

InsertOutcome Graph::insert(const Triple& t, std::span<const Provenance> provs) {
  for (const auto& p : provs) p.validate();
  const bool fresh = add_to(spo_, t.subject(), t.predicate(), t.object());
  if (fresh) {
    add_to(pos_, t.predicate(), t.object(), t.subject());
    add_to(osp_, t.object(), t.subject(), t.predicate());
    ++size_;
  }
  if (!provs.empty()) {
    auto& list = provenance_[t];
    for (const auto& p : provs) {
      if (std::find(list.begin(), list.end(), p) == list.end()) list.push_back(p);
    }
  }
  return {fresh};
}

bool Graph::remove(const Triple& t) {
  if (!contains(t)) return false;
  erase_from(spo_, t.subject(), t.predicate(), t.object());
  erase_from(pos_, t.predicate(), t.object(), t.subject());
  erase_from(osp_, t.object(), t.subject(), t.predicate());
  provenance_.erase(t);
  --size_;
  return true;
}

void Graph::clear() {
  spo_.clear();
  pos_.clear();
  osp_.clear();
  provenance_.clear();
  size_ = 0;
}

bool Graph::contains(const Triple& t) const {
  auto it = spo_.find(t.subject());
  if (it == spo_.end()) return false;
  auto jt = it->second.find(t.predicate());
  if (jt == it->second.end()) return false;
  return jt->second.count(t.object()) != 0;
}

void Graph::scan(const Index& idx, const TermPattern& a, const TermPattern& b,
                 const TermPattern& c, std::vector<std::array<const Term*, 3>>& out) {
  auto visit_level2 = [&](const Term& ka, const Level2& l2) {
    auto visit_leaf = [&](const Term& kb, const std::set<Term>& leaf) {
      if (c) {
        auto it = leaf.find(*c);
        if (it != leaf.end()) out.push_back({&ka, &kb, &*it});
      } else {
        for (const auto& kc : leaf) out.push_back({&ka, &kb, &kc});
      }
    };
    if (b) {
      auto it = l2.find(*b);
      if (it != l2.end()) visit_leaf(it->first, it->second);
    } else {
      for (const auto& [kb, leaf] : l2) visit_leaf(kb, leaf);
    }
  };
  if (a) {
    auto it = idx.find(*a);
    if (it != idx.end()) visit_level2(it->first, it->second);
  } else {
    for (const auto& [ka, l2] : idx) visit_level2(ka, l2);
  }
}

std::vector<Triple> Graph::match_using(IndexOrder index, const TermPattern& s,
                                       const TermPattern& p, const TermPattern& o) const {
  std::vector<std::array<const Term*, 3>> raw;
  std::vector<Triple> out;
  switch (index) {
    case IndexOrder::Spo:
      scan(spo_, s, p, o, raw);
      out.reserve(raw.size());
      for (const auto& r : raw) out.emplace_back(*r[0], *r[1], *r[2]);
      return out;  // already canonical
    case IndexOrder::Pos:
      scan(pos_, p, o, s, raw);
      out.reserve(raw.size());
      for (const auto& r : raw) out.emplace_back(*r[2], *r[0], *r[1]);
      break;
    case IndexOrder::Osp:
      scan(osp_, o, s, p, raw);
      out.reserve(raw.size());
      for (const auto& r : raw) out.emplace_back(*r[1], *r[2], *r[0]);
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Triple> Graph::match(const TermPattern& s, const TermPattern& p,
                                 const TermPattern& o) const {
  // Most-bound leading position wins.
  if (s) return match_using(IndexOrder::Spo, s, p, o);
  if (p) return match_using(IndexOrder::Pos, s, p, o);
  if (o) return match_using(IndexOrder::Osp, s, p, o);
  return match_using(IndexOrder::Spo, s, p, o);
}

std::vector<Term> Graph::objects(const Term& s, const Term& p) const {
  std::vector<Term> out;
  auto it = spo_.find(s);
  if (it == spo_.end()) return out;
  auto jt = it->second.find(p);
  if (jt == it->second.end()) return out;
  out.assign(jt->second.begin(), jt->second.end());
  return out;
}

std::vector<Term> Graph::subjects(const Term& p, const Term& o) const {
  std::vector<Term> out;
  auto it = pos_.find(p);
  if (it == pos_.end()) return out;
  auto jt = it->second.find(o);
  if (jt == it->second.end()) return out;
  out.assign(jt->second.begin(), jt->second.end());
  return out;
}

bool Graph::has_type(const Term& node, const Term& cls) const {
  if (node.is_literal()) return false;
  static const Term type = Term::iri(vocab::rdf::type);
  return contains(Triple(node, type, cls));
}

std::vector<Triple> Graph::triples() const {
  std::vector<Triple> out;
  out.reserve(size_);
  for_each([&](const Term& s, const Term& p, const Term& o) { out.emplace_back(s, p, o); });
  return out;
}

std::set<Term> Graph::nodes() const {
  std::set<Term> out;
  for (const auto& [s, _] : spo_) out.insert(s);
  for (const auto& [o, _] : osp_) out.insert(o);
  return out;
}

const std::vector<Provenance>& Graph::provenance(const Triple& t) const {
  auto it = provenance_.find(t);
  return it == provenance_.end() ? kNoProvenance : it->second;
}

void Graph::add_provenance(const Triple& t, const Provenance& prov) {
  if (!contains(t)) throw StructuralError("provenance for absent triple " + t.canonical());
  prov.validate();
  auto& list = provenance_[t];
  if (std::find(list.begin(), list.end(), prov) == list.end()) list.push_back(prov);
}

void Graph::merge(const Graph& other) {
  other.for_each([&](const Term& s, const Term& p, const Term& o) {
    Triple t(s, p, o);
    insert(t, std::span<const Provenance>(other.provenance(t)));
  });
}

bool Graph::indexes_consistent() const {
  std::set<std::array<Term, 3>> from_spo, from_pos, from_osp;
  for (const auto& [a, l2] : spo_)
    for (const auto& [b, leaf] : l2)
      for (const auto& c : leaf) from_spo.insert({a, b, c});
  for (const auto& [a, l2] : pos_)
    for (const auto& [b, leaf] : l2)
      for (const auto& c : leaf) from_pos.insert({c, a, b});
  for (const auto& [a, l2] : osp_)
    for (const auto& [b, leaf] : l2)
      for (const auto& c : leaf) from_osp.insert({b, c, a});
  return from_spo.size() == size_ && from_spo == from_pos && from_spo == from_osp;
}

std::uint64_t Graph::content_hash() const {
  std::uint64_t h = util::fnv1a64("");
  for_each([&](const Term& s, const Term& p, const Term& o) {
    Triple t(s, p, o);
    h = util::fnv1a64(t.canonical(), h);
    for (const auto& pr : provenance(t)) {
      h = util::fnv1a64(pr.source_id, h);
      h = util::fnv1a64(pr.chunk_id.value_or("-"), h);
      h = util::fnv1a64(std::to_string(pr.extracted_at), h);
      h = util::fnv1a64(std::to_string(pr.confidence), h);
      h = util::fnv1a64(to_string(pr.origin), h);
    }
  });
  return h;
}

GraphDiff diff(const Graph& before, const Graph& after) {
  GraphDiff d;
  after.for_each([&](const Term& s, const Term& p, const Term& o) {
    Triple t(s, p, o);
    if (!before.contains(t)) d.added.push_back(std::move(t));
  });
  before.for_each([&](const Term& s, const Term& p, const Term& o) {
    Triple t(s, p, o);
    if (!after.contains(t)) d.removed.push_back(std::move(t));
  });
  return d;
}

void apply_diff(Graph& g, const GraphDiff& d) {
  for (const auto& t : d.removed) g.remove(t);
  for (const auto& t : d.added) g.insert(t);
}

namespace {

struct BlankView {
  std::vector<Term> blanks;
  std::vector<Triple> ground;
  std::vector<Triple> nonground;
};

BlankView split_blanks(const Graph& g) {
  BlankView v;
  std::set<Term> seen;
  for (const auto& t : g.triples()) {
    bool has_blank = false;
    for (const Term* x : {&t.subject(), &t.object()}) {
      if (x->is_blank()) {
        has_blank = true;
        seen.insert(*x);
      }
    }
    (has_blank ? v.nonground : v.ground).push_back(t);
  }
  v.blanks.assign(seen.begin(), seen.end());
  return v;
}

// Role-and-neighbour multiset; blank neighbours are anonymised.
std::vector<std::string> signature(const Term& b, const std::vector<Triple>& nonground) {
  std::vector<std::string> sig;
  for (const auto& t : nonground) {
    if (t.subject() == b) {
      std::string other = t.object() == b ? "self" : t.object().is_blank() ? "_" : t.object().canonical();
      sig.push_back("S " + t.predicate().canonical() + " " + other);
    }
    if (t.object() == b && t.subject() != b) {
      std::string other = t.subject().is_blank() ? "_" : t.subject().canonical();
      sig.push_back("O " + t.predicate().canonical() + " " + other);
    }
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

class IsoSearch {
 public:
  IsoSearch(const BlankView& a, const BlankView& b) {
    target_.insert(b.nonground.begin(), b.nonground.end());
    std::map<Term, std::vector<std::string>> sig_b;
    for (const auto& x : b.blanks) sig_b[x] = signature(x, b.nonground);
    for (const auto& x : a.blanks) {
      auto sa = signature(x, a.nonground);
      std::vector<Term> cands;
      for (const auto& [y, sb] : sig_b) {
        if (sa == sb) cands.push_back(y);
      }
      candidates_[x] = std::move(cands);
    }
    order_ = a.blanks;
    std::stable_sort(order_.begin(), order_.end(), [&](const Term& l, const Term& r) {
      return candidates_[l].size() < candidates_[r].size();
    });
    for (const auto& t : a.nonground) {
      if (t.subject().is_blank()) touching_[t.subject()].push_back(&t);
      if (t.object().is_blank() && t.object() != t.subject()) touching_[t.object()].push_back(&t);
    }
  }

  bool run() { return assign(0); }

 private:
  Term mapped(const Term& x) const {
    if (!x.is_blank()) return x;
    return mapping_.at(x);
  }

  bool assign(std::size_t i) {
    if (i == order_.size()) return true;
    const Term& x = order_[i];
    for (const auto& y : candidates_[x]) {
      if (used_.count(y)) continue;
      mapping_.emplace(x, y);
      used_.insert(y);
      if (consistent(x) && assign(i + 1)) return true;
      mapping_.erase(x);
      used_.erase(y);
    }
    return false;
  }

  bool consistent(const Term& x) const {
    auto it = touching_.find(x);
    if (it == touching_.end()) return true;
    for (const Triple* t : it->second) {
      const bool s_ready = !t->subject().is_blank() || mapping_.count(t->subject());
      const bool o_ready = !t->object().is_blank() || mapping_.count(t->object());
      if (!s_ready || !o_ready) continue;
      if (!target_.count(Triple(mapped(t->subject()), t->predicate(), mapped(t->object())))) {
        return false;
      }
    }
    return true;
  }

  std::set<Triple> target_;
  std::map<Term, std::vector<Term>> candidates_;
  std::map<Term, std::vector<const Triple*>> touching_;
  std::vector<Term> order_;
  std::map<Term, Term> mapping_;
  std::set<Term> used_;
};

}  // namespace

bool isomorphic(const Graph& g1, const Graph& g2) {
  if (g1.size() > kIsomorphismMaxTriples || g2.size() > kIsomorphismMaxTriples) {
    throw CapacityError("isomorphism check limited to " +
                        std::to_string(kIsomorphismMaxTriples) + " triples");
  }
  auto a = split_blanks(g1);
  auto b = split_blanks(g2);
  if (a.blanks.size() > kIsomorphismMaxBlanks || b.blanks.size() > kIsomorphismMaxBlanks) {
    throw CapacityError("isomorphism check limited to " +
                        std::to_string(kIsomorphismMaxBlanks) + " blank nodes");
  }
  if (g1.size() != g2.size() || a.blanks.size() != b.blanks.size()) return false;
  if (a.ground != b.ground || a.nonground.size() != b.nonground.size()) return false;
  if (a.blanks.empty()) return true;
  return IsoSearch(a, b).run();
}

}  // namespace ontomem::rdf
