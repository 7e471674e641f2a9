#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontomem/builder/store.hpp"
#include "ontomem/factcheck/factcheck.hpp"

namespace ontomem::builder {

enum class ExtractorKind { Rule, Transcript };

struct BuildOptions {
  // Empty for a schema-only build.
  std::string sources_dir;
  std::optional<std::string> shapes_path;
  std::optional<std::string> schema_path;
  // Extra `pattern.*` / `predicate.*` entries layered over the store config.
  std::optional<std::string> patterns_path;
  ExtractorKind extractor = ExtractorKind::Rule;
  std::optional<std::string> transcript_path;
};

struct BuildReport {
  std::size_t documents = 0;
  std::size_t chunks = 0;
  std::size_t relations = 0;
  std::size_t candidates = 0;
  OntologyDelta delta;

  nlohmann::json to_json() const;
};

// Blank nodes become urn:ontomem:skolem: IRIs so the trusted graph stays
// blank-free and provenance keys survive reloads.
rdf::Graph skolemize(const rdf::Graph& g);

// ingest -> extract -> normalize -> construct -> gate -> commit. Schema
// triples join the batch as pinned candidates.
BuildReport run_build(Store& store, const BuildOptions& opts);

// Claims re-enter the pipeline as candidates with origin ANSWER_FEEDBACK.
// A negated claim becomes its reified negation.
std::vector<Candidate> feedback_candidates(const std::vector<factcheck::Claim>& claims, const std::string& source_id,
                                           std::int64_t at);
OntologyDelta run_feedback(Store& store, const std::vector<factcheck::Claim>& claims, const std::string& source_id,
                           std::int64_t at);

}  // namespace ontomem::builder
