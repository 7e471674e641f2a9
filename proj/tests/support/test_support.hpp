#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ontomem/rdf/graph.hpp"
#include "ontomem/util/text.hpp"

namespace testsupport {

using ontomem::rdf::Graph;
using ontomem::rdf::Term;
using ontomem::rdf::Triple;

inline std::string fixture(const std::string& rel) { return std::string(ONTOMEM_FIXTURES) + "/" + rel; }
inline std::string golden(const std::string& rel) { return std::string(ONTOMEM_GOLDEN) + "/" + rel; }

inline Term ex(const std::string& local) { return Term::iri("http://ex.org/" + local); }

inline Triple tr(const std::string& s, const std::string& p, const std::string& o) {
  return Triple(ex(s), ex(p), ex(o));
}

// Random term drawn from small pools so that collisions are frequent.
inline Term random_term(std::mt19937_64& rng, bool allow_literal, bool allow_blank = true) {
  std::uniform_int_distribution<int> kind(0, allow_literal ? 9 : 7);
  std::uniform_int_distribution<int> pick(0, 7);
  int k = kind(rng);
  if (k <= 5 || (!allow_blank && k <= 7)) return ex("n" + std::to_string(pick(rng)));
  if (k <= 7) return Term::blank("x" + std::to_string(pick(rng)));
  if (k == 8) return Term::literal("v" + std::to_string(pick(rng)));
  return Term::integer(pick(rng));
}

inline Triple random_triple(std::mt19937_64& rng, bool allow_blank = true) {
  std::uniform_int_distribution<int> pick(0, 3);
  Term s = random_term(rng, false, allow_blank);
  Term p = ex("p" + std::to_string(pick(rng)));
  Term o = random_term(rng, true, allow_blank);
  return Triple(s, p, o);
}

inline Graph random_graph(std::mt19937_64& rng, std::size_t n, bool allow_blank = true) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.insert(random_triple(rng, allow_blank));
  return g;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ontomem-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
