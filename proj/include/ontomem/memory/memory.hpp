#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontomem/builder/registry.hpp"
#include "ontomem/rdf/graph.hpp"
#include "ontomem/util/config.hpp"

namespace ontomem::builder {
class Store;
}

namespace ontomem::memory {

inline constexpr std::size_t kDefaultDim = 256;
inline constexpr int kDefaultMaxRadius = 4;

using EmbeddingVector = std::vector<double>;

// Feature hashing over lowercased alphanumeric tokens, L2-normalized.
// Empty (token-free) text gives the zero vector.
EmbeddingVector embed(std::string_view text, std::size_t dim = kDefaultDim);
// 0 when either side is the zero vector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

struct VectorEntry {
  std::string id;
  EmbeddingVector vector;
  std::string payload;
  rdf::Provenance provenance;
};

class VectorStore {
 public:
  explicit VectorStore(std::size_t dim = kDefaultDim);

  std::size_t dim() const { return dim_; }
  // Embeds the payload. Replaces an entry with the same id.
  void add(const std::string& id, const std::string& payload, const rdf::Provenance& prov = {});
  // Throws StructuralError on a dimension mismatch.
  void add(VectorEntry entry);
  const std::vector<VectorEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::size_t dim_;
  std::vector<VectorEntry> entries_;
};

struct VectorHit {
  std::string id;
  std::string payload;
  double score = 0;

  friend bool operator==(const VectorHit&, const VectorHit&) = default;
};

// Exact top-k by cosine; equal scores ordered by id.
std::vector<VectorHit> vector_search(const VectorStore& store, std::string_view query, std::size_t k);

struct GraphFact {
  rdf::Triple triple;
  int hop = 0;

  friend bool operator==(const GraphFact&, const GraphFact&) = default;
};

// Undirected BFS from the seeds. A triple touching a node at distance d is
// reported at hop d (its nearer endpoint); its other endpoint is then at
// distance d + 1. Literals end a path. Ordered by hop, then canonical text.
// Throws ConfigError when radius is negative or above max_radius.
std::vector<GraphFact> graph_retrieve(const rdf::Graph& graph, const std::vector<rdf::Term>& seeds, int radius,
                                      int max_radius = kDefaultMaxRadius);

struct ToolResult {
  std::string tool;
  std::string text;

  friend bool operator==(const ToolResult&, const ToolResult&) = default;
};

// Tie order in the fused ranking follows declaration order.
enum class Channel { Graph, Vect, Tool, User };

std::string_view to_string(Channel c);

struct FusionWeights {
  double graph = 1.0;
  double vect = 1.0;
  double tool = 1.0;
  double user = 1.0;

  static FusionWeights from_config(const util::KeyValueConfig& cfg);
  double of(Channel c) const;
};

struct FusedItem {
  std::string text;
  Channel channel = Channel::Graph;
  double score = 0;

  friend bool operator==(const FusedItem&, const FusedItem&) = default;
};

struct ContextBundle {
  std::vector<VectorHit> vector_hits;
  std::vector<GraphFact> graph_facts;
  std::vector<ToolResult> tool_results;
  std::vector<rdf::Triple> user_memory;
  std::vector<FusedItem> fused;
};

// Per channel: min-max normalize (a constant channel normalizes to 1), scale
// by weight / max weight and round to 12 decimals. Then keep the best entry
// per text, sort by score, then channel, then text, and cut to budget.
// Throws ConfigError on negative or all-zero weights and on budget < 1.
ContextBundle fuse(std::vector<VectorHit> vector_hits, std::vector<GraphFact> graph_facts,
                   std::vector<ToolResult> tool_results, std::vector<rdf::Triple> user_memory,
                   const FusionWeights& weights, int budget);

// Triples with a DIALOGUE provenance record from `session_id`.
std::vector<rdf::Triple> user_memory(const rdf::Graph& graph, const std::string& session_id);

// Registry entries whose label or an alias occurs in the query as a whole
// token sequence. Sorted.
std::vector<rdf::Term> seeds_from_query(const builder::EntityRegistry& registry, std::string_view query);

struct RetrieveRequest {
  std::string query;
  // Unset fields fall back to the store configuration.
  std::optional<int> radius;
  std::optional<int> k;
  std::optional<int> budget;
  std::vector<rdf::Term> seeds;
  std::string session;
  std::vector<ToolResult> tool_results;
};

// Vector memory over the stored chunks, graph memory over the trusted graph.
// Explicit seeds replace registry matching.
ContextBundle retrieve(const builder::Store& store, const RetrieveRequest& req);

nlohmann::json to_json(const ContextBundle& bundle);

}  // namespace ontomem::memory
