#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "ontomem/rdf/term.hpp"

namespace ontomem::rdf {

struct InsertOutcome {
  bool was_new = false;
};

// A wildcard is an empty optional.
using TermPattern = std::optional<Term>;

enum class IndexOrder : std::uint8_t { Spo, Pos, Osp };

// In-memory triple store with set semantics, three permutation indexes and
// per-triple multi-valued provenance kept beside the triples.
//
// Graph is a regular value type: copies are deep, and a const Graph is an
// immutable snapshot. Concurrent const access is safe; mutation requires
// exclusive access (see SharedGraph in store code).
class Graph {
 public:
  Graph() = default;

  // Appends prov (when given) even if the triple already existed.
  InsertOutcome insert(const Triple& t, const std::optional<Provenance>& prov = std::nullopt);
  InsertOutcome insert(const Triple& t, std::span<const Provenance> provs);
  // Removes the triple and its provenance. Returns whether it was present.
  bool remove(const Triple& t);
  void clear();

  bool contains(const Triple& t) const;
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // Matching triples in canonical (subject, predicate, object) order.
  std::vector<Triple> match(const TermPattern& s, const TermPattern& p,
                            const TermPattern& o) const;
  // Same contract, but forces the scan through one specific index.
  std::vector<Triple> match_using(IndexOrder index, const TermPattern& s,
                                  const TermPattern& p, const TermPattern& o) const;

  std::vector<Term> objects(const Term& s, const Term& p) const;
  std::vector<Term> subjects(const Term& p, const Term& o) const;
  bool has_type(const Term& node, const Term& cls) const;

  // Every triple, in canonical order.
  std::vector<Triple> triples() const;
  // Distinct subject and object terms, sorted.
  std::set<Term> nodes() const;

  const std::vector<Provenance>& provenance(const Triple& t) const;
  void add_provenance(const Triple& t, const Provenance& prov);

  // Set union; provenance lists merge, equal records kept once.
  void merge(const Graph& other);

  // Full-scan check that all three indexes hold exactly the triple set.
  bool indexes_consistent() const;

  // Stable digest over triples and provenance.
  std::uint64_t content_hash() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [s, by_p] : spo_)
      for (const auto& [p, objs] : by_p)
        for (const auto& o : objs) fn(s, p, o);
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.size_ == b.size_ && a.spo_ == b.spo_;
  }

 private:
  using Level2 = std::map<Term, std::set<Term>>;
  using Index = std::map<Term, Level2>;

  static void scan(const Index& idx, const TermPattern& a, const TermPattern& b,
                   const TermPattern& c, std::vector<std::array<const Term*, 3>>& out);

  Index spo_;
  Index pos_;
  Index osp_;
  std::map<Triple, std::vector<Provenance>> provenance_;
  std::size_t size_ = 0;
};

struct GraphDiff {
  std::vector<Triple> added;
  std::vector<Triple> removed;
};

GraphDiff diff(const Graph& before, const Graph& after);
// Applies removed then added.
void apply_diff(Graph& g, const GraphDiff& d);

inline constexpr std::size_t kIsomorphismMaxTriples = 10000;
inline constexpr std::size_t kIsomorphismMaxBlanks = 12;

// Blank-node isomorphism by exhaustive search with degree-signature pruning.
// Throws CapacityError beyond kIsomorphismMaxTriples triples or
// kIsomorphismMaxBlanks blank nodes per graph.
bool isomorphic(const Graph& g1, const Graph& g2);

}  // namespace ontomem::rdf
