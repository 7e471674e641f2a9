#include "ontomem/memory/memory.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "ontomem/builder/store.hpp"
#include "ontomem/error.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::memory {

using rdf::Term;
using rdf::Triple;

EmbeddingVector embed(std::string_view text, std::size_t dim) {
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
  EmbeddingVector v(dim, 0.0);
  for (const auto& tok : util::tokenize_words(text)) {
    std::uint64_t h = util::fnv1a64(tok);
    // Low bits pick the slot, the top bit the sign.
    v[h % dim] += (h >> 63) ? -1.0 : 1.0;
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  if (norm == 0) return v;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) throw StructuralError("cosine over vectors of different dimension");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

VectorStore::VectorStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
}

void VectorStore::add(const std::string& id, const std::string& payload, const rdf::Provenance& prov) {
  add(VectorEntry{id, embed(payload, dim_), payload, prov});
}

void VectorStore::add(VectorEntry entry) {
  if (entry.vector.size() != dim_) {
    throw StructuralError("vector for '" + entry.id + "' has dimension " + std::to_string(entry.vector.size()) +
                          ", store expects " + std::to_string(dim_));
  }
  for (auto& e : entries_) {
    if (e.id == entry.id) {
      e = std::move(entry);
      return;
    }
  }
  entries_.push_back(std::move(entry));
}

std::vector<VectorHit> vector_search(const VectorStore& store, std::string_view query, std::size_t k) {
  auto q = embed(query, store.dim());
  std::vector<VectorHit> hits;
  hits.reserve(store.size());
  for (const auto& e : store.entries()) hits.push_back({e.id, e.payload, cosine(q, e.vector)});
  std::sort(hits.begin(), hits.end(), [](const VectorHit& a, const VectorHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

std::vector<GraphFact> graph_retrieve(const rdf::Graph& graph, const std::vector<Term>& seeds, int radius,
                                      int max_radius) {
  if (radius < 0 || radius > max_radius) {
    throw ConfigError("radius " + std::to_string(radius) + " outside [0, " + std::to_string(max_radius) + "]");
  }
  std::map<Term, int> dist;
  std::deque<Term> queue;
  for (const auto& s : seeds) {
    if (dist.emplace(s, 0).second) queue.push_back(s);
  }
  std::map<Triple, int> reached;
  while (!queue.empty()) {
    Term node = queue.front();
    queue.pop_front();
    int d = dist.at(node);
    if (d > radius || node.is_literal()) continue;
    auto visit = [&](const Triple& t, const Term& other) {
      reached.emplace(t, d);
      if (dist.emplace(other, d + 1).second) queue.push_back(other);
    };
    for (const auto& t : graph.match(node, std::nullopt, std::nullopt)) visit(t, t.object());
    for (const auto& t : graph.match(std::nullopt, std::nullopt, node)) visit(t, t.subject());
  }
  std::vector<GraphFact> out;
  for (const auto& [t, hop] : reached) out.push_back({t, hop});
  std::sort(out.begin(), out.end(), [](const GraphFact& a, const GraphFact& b) {
    if (a.hop != b.hop) return a.hop < b.hop;
    return a.triple.canonical() < b.triple.canonical();
  });
  return out;
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::Graph: return "graph";
    case Channel::Vect: return "vect";
    case Channel::Tool: return "tool";
    case Channel::User: return "user";
  }
  return "?";
}

FusionWeights FusionWeights::from_config(const util::KeyValueConfig& cfg) {
  FusionWeights w;
  w.graph = cfg.get_double("fusion.weight.graph", 1.0);
  w.vect = cfg.get_double("fusion.weight.vect", 1.0);
  w.tool = cfg.get_double("fusion.weight.tool", 1.0);
  w.user = cfg.get_double("fusion.weight.user", 1.0);
  return w;
}

double FusionWeights::of(Channel c) const {
  switch (c) {
    case Channel::Graph: return graph;
    case Channel::Vect: return vect;
    case Channel::Tool: return tool;
    case Channel::User: return user;
  }
  return 0;
}

namespace {

// 12 decimals, so ties survive multiplying every weight by a constant.
double quantize(double x) { return std::round(x * 1e12) / 1e12; }

void normalize_into(std::vector<FusedItem>& out, std::vector<std::pair<std::string, double>> raw, Channel c,
                    double scale) {
  if (raw.empty()) return;
  auto [lo, hi] = std::minmax_element(raw.begin(), raw.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
  double min = lo->second, max = hi->second;
  for (auto& [text, x] : raw) {
    double norm = max > min ? (x - min) / (max - min) : 1.0;
    out.push_back({std::move(text), c, quantize(norm * scale)});
  }
}

}  // namespace

ContextBundle fuse(std::vector<VectorHit> vector_hits, std::vector<GraphFact> graph_facts,
                   std::vector<ToolResult> tool_results, std::vector<Triple> user_mem, const FusionWeights& weights,
                   int budget) {
  const Channel channels[] = {Channel::Graph, Channel::Vect, Channel::Tool, Channel::User};
  double wmax = 0;
  for (Channel c : channels) {
    double w = weights.of(c);
    if (!(w >= 0) || !std::isfinite(w)) {
      throw ConfigError("fusion weight for " + std::string(to_string(c)) + " must be a non-negative number");
    }
    wmax = std::max(wmax, w);
  }
  if (wmax == 0) throw ConfigError("fusion weights are all zero");
  if (budget < 1) throw ConfigError("fusion budget must be at least 1");

  std::vector<FusedItem> items;
  {
    std::vector<std::pair<std::string, double>> raw;
    for (const auto& f : graph_facts) raw.emplace_back(f.triple.canonical(), 1.0 / (1.0 + f.hop));
    normalize_into(items, std::move(raw), Channel::Graph, weights.graph / wmax);
  }
  {
    std::vector<std::pair<std::string, double>> raw;
    for (const auto& h : vector_hits) raw.emplace_back(h.payload, h.score);
    normalize_into(items, std::move(raw), Channel::Vect, weights.vect / wmax);
  }
  {
    std::vector<std::pair<std::string, double>> raw;
    for (const auto& r : tool_results) raw.emplace_back(r.text, 1.0);
    normalize_into(items, std::move(raw), Channel::Tool, weights.tool / wmax);
  }
  {
    std::vector<std::pair<std::string, double>> raw;
    for (const auto& t : user_mem) raw.emplace_back(t.canonical(), 1.0);
    normalize_into(items, std::move(raw), Channel::User, weights.user / wmax);
  }

  auto before = [](const FusedItem& a, const FusedItem& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.channel != b.channel) return a.channel < b.channel;
    return a.text < b.text;
  };
  std::sort(items.begin(), items.end(), before);
  std::set<std::string> seen;
  ContextBundle out;
  for (auto& it : items) {
    if (static_cast<int>(out.fused.size()) == budget) break;
    if (seen.insert(it.text).second) out.fused.push_back(std::move(it));
  }
  out.vector_hits = std::move(vector_hits);
  out.graph_facts = std::move(graph_facts);
  out.tool_results = std::move(tool_results);
  out.user_memory = std::move(user_mem);
  return out;
}

std::vector<Triple> user_memory(const rdf::Graph& graph, const std::string& session_id) {
  std::vector<Triple> out;
  if (session_id.empty()) return out;
  for (const auto& t : graph.triples()) {
    const auto& provs = graph.provenance(t);
    if (std::any_of(provs.begin(), provs.end(), [&](const rdf::Provenance& p) {
          return p.origin == rdf::Origin::Dialogue && p.source_id == session_id;
        })) {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<Term> seeds_from_query(const builder::EntityRegistry& registry, std::string_view query) {
  auto q = util::tokenize_words(query);
  auto occurs = [&](const std::string& name) {
    auto toks = util::tokenize_words(name);
    if (toks.empty() || toks.size() > q.size()) return false;
    return std::search(q.begin(), q.end(), toks.begin(), toks.end()) != q.end();
  };
  std::set<Term> seeds;
  for (const auto& [iri, entry] : registry.entries()) {
    bool hit = occurs(entry.label);
    for (auto it = entry.aliases.begin(); !hit && it != entry.aliases.end(); ++it) hit = occurs(*it);
    if (hit) seeds.insert(Term::iri(iri));
  }
  return {seeds.begin(), seeds.end()};
}

ContextBundle retrieve(const builder::Store& store, const RetrieveRequest& req) {
  const auto& cfg = store.config();
  int radius = req.radius.value_or(static_cast<int>(cfg.get_int("retrieve.radius", 1)));
  int k = req.k.value_or(static_cast<int>(cfg.get_int("retrieve.k", 5)));
  int budget = req.budget.value_or(static_cast<int>(cfg.get_int("retrieve.budget", 10)));
  int max_radius = static_cast<int>(cfg.get_int("retrieve.max_radius", kDefaultMaxRadius));
  if (k < 1) throw ConfigError("k must be at least 1");

  VectorStore vs(static_cast<std::size_t>(cfg.get_int("embedding.dim", kDefaultDim)));
  for (const auto& c : store.chunks()) vs.add(c.id(), c.text, rdf::Provenance{c.doc_id, c.id(), 0, 1.0, {}});
  auto hits = vector_search(vs, req.query, static_cast<std::size_t>(k));

  auto seeds = req.seeds.empty() ? seeds_from_query(store.registry(), req.query) : req.seeds;
  auto facts = graph_retrieve(store.trusted(), seeds, radius, max_radius);
  return fuse(std::move(hits), std::move(facts), req.tool_results, user_memory(store.trusted(), req.session),
              FusionWeights::from_config(cfg), budget);
}

nlohmann::json to_json(const ContextBundle& b) {
  nlohmann::json j = {{"vector_hits", nlohmann::json::array()},
                      {"graph_facts", nlohmann::json::array()},
                      {"tool_results", nlohmann::json::array()},
                      {"user_memory", nlohmann::json::array()},
                      {"fused", nlohmann::json::array()}};
  for (const auto& h : b.vector_hits) j["vector_hits"].push_back({{"id", h.id}, {"payload", h.payload}, {"score", h.score}});
  for (const auto& f : b.graph_facts) j["graph_facts"].push_back({{"triple", f.triple.canonical()}, {"hop", f.hop}});
  for (const auto& r : b.tool_results) j["tool_results"].push_back({{"tool", r.tool}, {"result", r.text}});
  for (const auto& t : b.user_memory) j["user_memory"].push_back(t.canonical());
  for (const auto& f : b.fused) {
    j["fused"].push_back({{"item", f.text}, {"channel", to_string(f.channel)}, {"score", f.score}});
  }
  return j;
}

}  // namespace ontomem::memory
