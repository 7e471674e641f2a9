#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "ontomem/shacl/shacl.hpp"
#include "ontomem/turtle/turtle.hpp"
#include "ontomem/util/text.hpp"
#include "shacl_oracle.hpp"

namespace oracles {

// A fixture holds shapes and data in one document. Header lines
//   # expect: ex:focus ex:path constraint
// list every result; "# expect: conforms" means none.
struct DirectedCase {
  std::string name;
  std::string constraint;
  std::vector<Key> expected;
  std::vector<Key> actual;
};

inline std::vector<DirectedCase> load_directed_cases(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".ttl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  auto expand = [](const std::string& curie) { return "http://ex.org/" + curie.substr(3); };
  std::vector<DirectedCase> out;
  for (const auto& f : files) {
    DirectedCase c;
    c.name = f.stem().string();
    c.constraint = c.name.substr(0, c.name.rfind('-'));
    std::string text = util::read_file(f.string());
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (line.rfind("# expect: ", 0) != 0) continue;
      std::istringstream fields(line.substr(10));
      std::string focus, path, constraint;
      fields >> focus >> path >> constraint;
      if (focus == "conforms") continue;
      c.expected.emplace_back(Term::iri(expand(focus)), expand(path), constraint);
    }
    std::sort(c.expected.begin(), c.expected.end());
    auto g = turtle::parse_turtle_or_throw(text).graph;
    c.actual = keys(validate(g, parse_shapes_or_throw(g)));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace oracles
