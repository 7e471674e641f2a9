#include "ontomem/builder/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <map>
#include <set>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::builder {

namespace fs = std::filesystem;
using nlohmann::json;
using rdf::Triple;

json OntologyDelta::to_json() const {
  json quarantine = json::array();
  for (const auto& q : quarantined) quarantine.push_back(builder::to_json(q));
  json accepted_json = json::array();
  for (const auto& t : accepted.triples()) accepted_json.push_back(t.canonical());
  return {{"base_version", base_version},
          {"version_id", version_id},
          {"accepted", std::move(accepted_json)},
          {"quarantined", std::move(quarantine)}};
}

void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  util::write_file(tmp, content);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path + ": " + ec.message());
}

StoreLock::StoreLock(const std::string& dir) : path_((fs::path(dir) / "lock").string()) {
  int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) throw IoError("store is locked by another process (remove " + path_ + " if stale)");
    throw IoError("cannot create " + path_ + ": " + std::strerror(errno));
  }
  std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

StoreLock::~StoreLock() { ::unlink(path_.c_str()); }

util::KeyValueConfig Store::default_config() {
  return util::KeyValueConfig::parse(R"(namespace.instance = http://example.org/inst/
namespace.schema = http://example.org/schema#
namespace.property = http://example.org/prop#
prefix.inst = http://example.org/inst/
prefix.schema = http://example.org/schema#
prefix.prop = http://example.org/prop#
chunk.max_chars = 1000
embedding.dim = 256
extractor.confidence = 0.9
fusion.weight.graph = 1.0
fusion.weight.vect = 1.0
fusion.weight.tool = 1.0
fusion.weight.user = 1.0
retrieve.k = 5
retrieve.radius = 1
retrieve.max_radius = 4
retrieve.budget = 10
)");
}

std::string Store::path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

turtle::PrefixMap Store::prefixes() const {
  turtle::PrefixMap p = {{"rdf", vocab::kRdf}, {"rdfs", vocab::kRdfs}, {"owl", vocab::kOwl}, {"xsd", vocab::kXsd}};
  for (const auto& [k, v] : config_.entries()) {
    if (util::starts_with(k, "prefix.")) p[k.substr(7)] = v;
  }
  return p;
}

Store Store::init(const std::string& dir, const util::KeyValueConfig& cfg) {
  if (fs::exists(fs::path(dir) / "version")) throw IoError("a store already exists at " + dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  Store s(dir);
  s.config_ = cfg;
  s.registry_ = EntityRegistry(cfg.get_or("namespace.instance", "http://example.org/inst/"));
  util::write_file(s.path("ontomem.conf"), cfg.dump());
  util::write_file(s.path("trusted.ttl"), turtle::serialize_turtle(rdf::Graph(), s.prefixes()));
  util::write_file(s.path("provenance.jsonl"), "");
  util::write_file(s.path("quarantine.jsonl"), "");
  util::write_file(s.path("chunks.jsonl"), "");
  s.save_registry();
  util::write_file(s.path("version"), "0\n");
  return s;
}

Store Store::open(const std::string& dir) {
  if (!fs::exists(fs::path(dir) / "version")) throw IoError("no store at " + dir + " (run init first)");
  Store s(dir);
  s.load();
  return s;
}

int Store::read_version() const {
  std::string text(util::trim(util::read_file(path("version"))));
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw IoError("corrupt version file in " + dir_);
}

namespace {

Triple parse_canonical_triple(const std::string& text) {
  auto doc = turtle::parse_turtle_or_throw(text, "provenance");
  auto ts = doc.graph.triples();
  if (ts.size() != 1) throw IoError("expected one triple, got: " + text);
  return ts.front();
}

}  // namespace

void Store::load() {
  config_ = util::KeyValueConfig::load(path("ontomem.conf"));
  version_ = read_version();
  trusted_ = turtle::parse_turtle_or_throw(util::read_file(path("trusted.ttl")), path("trusted.ttl")).graph;
  int line_no = 0;
  for (const auto& line : util::split(util::read_file(path("provenance.jsonl")), '\n')) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    try {
      auto j = json::parse(line);
      Triple t = parse_canonical_triple(j.at("triple").get<std::string>());
      if (!trusted_.contains(t)) throw IoError("provenance for a triple missing from trusted.ttl");
      for (const auto& p : j.at("provenance")) trusted_.add_provenance(t, provenance_from_json(p));
    } catch (const std::exception& e) {
      throw IoError("provenance.jsonl:" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::string ns = config_.get_or("namespace.instance", "http://example.org/inst/");
  auto reg = turtle::parse_turtle_or_throw(util::read_file(path("registry.ttl")), path("registry.ttl"));
  registry_ = EntityRegistry::from_graph(reg.graph, ns);
}

std::vector<shacl::NodeShape> Store::shapes() const {
  if (!fs::exists(path("shapes.ttl"))) return {};
  auto doc = turtle::parse_turtle_or_throw(util::read_file(path("shapes.ttl")), path("shapes.ttl"));
  return shacl::parse_shapes_or_throw(doc.graph);
}

void Store::set_shapes(const std::string& turtle_text) {
  auto doc = turtle::parse_turtle_or_throw(turtle_text, "shapes");
  shacl::parse_shapes_or_throw(doc.graph);
  write_atomic(path("shapes.ttl"), turtle_text);
}

void Store::save_registry() const {
  write_atomic(path("registry.ttl"), turtle::serialize_turtle(registry_.to_graph(), prefixes()));
}

OntologyDelta Store::commit(const GateResult& gate, int base_version) {
  StoreLock lock(dir_);
  int disk = read_version();
  if (disk != base_version || version_ != base_version) {
    throw VersionConflictError("store is at version " + std::to_string(disk) + " but the delta was gated against version " +
                               std::to_string(base_version));
  }
  OntologyDelta delta;
  delta.base_version = base_version;
  delta.version_id = base_version;
  delta.quarantined = gate.quarantined;
  for (const auto& c : gate.accepted) {
    if (c.triple.subject().is_blank() || c.triple.object().is_blank()) {
      throw InputError("blank nodes cannot enter the trusted graph: " + c.triple.canonical());
    }
    if (!trusted_.contains(c.triple)) delta.accepted.insert(c.triple, std::span<const rdf::Provenance>(c.provenance));
  }

  std::string log;
  for (const auto& q : gate.quarantined) {
    json j = to_json(q);
    j["version"] = base_version;
    log += j.dump() + "\n";
  }
  if (!log.empty()) util::append_file(path("quarantine.jsonl"), log);
  save_registry();
  if (delta.accepted.empty()) return delta;

  int v = base_version + 1;
  auto pm = prefixes();
  write_atomic(path("delta-" + std::to_string(v) + ".ttl"), turtle::serialize_turtle(delta.accepted, pm));
  trusted_.merge(delta.accepted);
  write_atomic(path("trusted.ttl"), turtle::serialize_turtle(trusted_, pm));
  std::string prov;
  for (const auto& t : trusted_.triples()) {
    json provs = json::array();
    for (const auto& p : trusted_.provenance(t)) provs.push_back(to_json(p));
    prov += json{{"triple", t.canonical()}, {"provenance", std::move(provs)}}.dump() + "\n";
  }
  write_atomic(path("provenance.jsonl"), prov);
  write_atomic(path("version"), std::to_string(v) + "\n");
  version_ = v;
  delta.version_id = v;
  return delta;
}

rdf::Graph Store::graph_at(int version) const {
  if (version < 0 || version > version_) {
    throw InputError("version " + std::to_string(version) + " does not exist (store is at " + std::to_string(version_) +
                     ")");
  }
  rdf::Graph g;
  for (int v = 1; v <= version; ++v) {
    std::string file = path("delta-" + std::to_string(v) + ".ttl");
    if (!fs::exists(file)) throw IoError("missing " + file);
    g.merge(turtle::parse_turtle_or_throw(util::read_file(file), file).graph);
  }
  return g;
}

std::vector<json> Store::quarantine_log() const {
  std::vector<json> out;
  for (const auto& line : util::split(util::read_file(path("quarantine.jsonl")), '\n')) {
    if (!util::trim(line).empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::vector<Chunk> Store::chunks() const {
  std::vector<Chunk> out;
  if (!fs::exists(path("chunks.jsonl"))) return out;
  for (const auto& line : util::split(util::read_file(path("chunks.jsonl")), '\n')) {
    if (util::trim(line).empty()) continue;
    auto j = json::parse(line);
    out.push_back({j.at("doc_id").get<std::string>(), j.at("index").get<std::size_t>(), j.at("start").get<std::size_t>(),
                   j.at("end").get<std::size_t>(), j.at("text").get<std::string>()});
  }
  return out;
}

void Store::save_chunks(const std::vector<Chunk>& chunks) {
  std::map<std::pair<std::string, std::size_t>, Chunk> all;
  std::set<std::string> replaced;
  for (const auto& c : chunks) replaced.insert(c.doc_id);
  for (auto& c : this->chunks()) {
    if (!replaced.count(c.doc_id)) all[{c.doc_id, c.index}] = std::move(c);
  }
  for (const auto& c : chunks) all[{c.doc_id, c.index}] = c;
  std::string out;
  for (const auto& [_, c] : all) {
    out += json{{"doc_id", c.doc_id}, {"index", c.index}, {"start", c.start}, {"end", c.end}, {"text", c.text}}.dump() +
           "\n";
  }
  write_atomic(path("chunks.jsonl"), out);
}

}  // namespace ontomem::builder
