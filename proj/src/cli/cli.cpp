#include "ontomem/cli/cli.hpp"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "ontomem/builder/build.hpp"
#include "ontomem/bus/server.hpp"
#include "ontomem/bus/service.hpp"
#include "ontomem/error.hpp"
#include "ontomem/factcheck/factcheck.hpp"
#include "ontomem/turtle/turtle.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::cli {

using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void print_query(const json& r, std::ostream& out) {
  if (r.contains("ask")) {
    out << (r["ask"].get<bool>() ? "true" : "false") << "\n";
    return;
  }
  std::string header;
  for (const auto& v : r["vars"]) header += (header.empty() ? "?" : "\t?") + v.get<std::string>();
  out << header << "\n";
  for (const auto& row : r["rows"]) {
    std::string line;
    for (const auto& v : r["vars"]) line += (line.empty() ? "" : "\t") + row[v.get<std::string>()].get<std::string>();
    out << line << "\n";
  }
}

void print_validate(const json& r, std::ostream& out) {
  std::size_t n = r["results"].size();
  out << "conforms: " << (r["conforms"].get<bool>() ? "true" : "false");
  if (n) out << " (" << n << " violation" << (n == 1 ? "" : "s") << ")";
  out << "\n";
  for (const auto& v : r["results"]) {
    out << "  " << v["focus"].get<std::string>() << " "
        << (v["path"].is_null() ? std::string("-") : "<" + v["path"].get<std::string>() + ">") << " ["
        << v["constraint"].get<std::string>() << "] " << v["message"].get<std::string>() << "\n";
  }
  if (r.contains("conflicts")) {
    out << "conflicts: " << r["conflicts"].size() << "\n";
    for (const auto& c : r["conflicts"]) out << "  " << c["kind"].get<std::string>() << " " << c["subject"].get<std::string>() << "\n";
  }
}

void print_check(const json& r, std::ostream& out) {
  out << r["overall"].get<std::string>() << "\n";
  for (const auto& v : r["verdicts"]) {
    const auto& c = v["claim"];
    out << "  " << v["status"].get<std::string>() << "  " << (c["polarity"] == "NEGATED" ? "NOT " : "")
        << c["subject"].get<std::string>() << " " << c["predicate"].get<std::string>() << " "
        << c["object"].get<std::string>() << "\n";
    for (const auto& step : v["trace"]) {
      out << "    " << step["kind"].get<std::string>();
      if (step.contains("rule") && !step["rule"].is_null()) out << " " << step["rule"].get<std::string>();
      if (step.contains("note") && !step["note"].get<std::string>().empty()) out << ": " << step["note"].get<std::string>();
      out << "\n";
    }
  }
}

void print_retrieve(const json& r, std::ostream& out) {
  for (const auto& f : r["fused"]) {
    std::string item(util::trim(f["item"].get<std::string>()));
    std::replace(item.begin(), item.end(), '\n', ' ');
    out << fixed(f["score"].get<double>(), 3) << "\t" << f["channel"].get<std::string>() << "\t" << item << "\n";
  }
}

std::string read_input(const std::string& path, std::istream& in) {
  if (path != "-") return util::read_file(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Ontology memory engine: build, query, validate and verify a versioned RDF store.", "ontomem"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string store_dir = "store";
  bool as_json = false;
  app.add_option("--store", store_dir, "Store directory")->capture_default_str();
  app.add_flag("--json", as_json, "Machine-readable output");

  int code = kExitOk;
  auto emit = [&](const json& j, const std::function<void(const json&, std::ostream&)>& text) {
    if (as_json) {
      out << j.dump(2) << "\n";
    } else {
      text(j, out);
    }
  };

  // init
  auto* init = app.add_subcommand("init", "Create an empty store");
  std::string init_config;
  init->add_option("--config", init_config, "key = value file layered over the defaults")->check(CLI::ExistingFile);
  init->callback([&] {
    auto cfg = builder::Store::default_config();
    if (!init_config.empty()) {
      auto extra = util::KeyValueConfig::load(init_config);
      for (const auto& [k, v] : extra.entries()) cfg.set(k, v);
    }
    auto store = builder::Store::init(store_dir, cfg);
    emit(json{{"store", store.dir()}, {"version", store.version()}},
         [](const json& j, std::ostream& o) { o << "initialized " << j["store"].get<std::string>() << " at version 0\n"; });
  });

  // build
  auto* build = app.add_subcommand("build", "Ingest sources and commit the accepted triples");
  builder::BuildOptions bopts;
  std::string shapes, schema, patterns, transcript, extractor = "rule";
  build->add_option("--sources", bopts.sources_dir, "Source directory")->check(CLI::ExistingDirectory);
  build->add_option("--shapes", shapes, "SHACL shapes for the gate")->check(CLI::ExistingFile);
  build->add_option("--schema", schema, "Schema triples (Turtle)")->check(CLI::ExistingFile);
  build->add_option("--patterns", patterns, "Extractor patterns and aliases")->check(CLI::ExistingFile);
  build->add_option("--extractor", extractor, "rule or transcript")->check(CLI::IsMember({"rule", "transcript"}));
  build->add_option("--transcript", transcript, "Recorded extractor output (JSON lines)")->check(CLI::ExistingFile);
  build->callback([&] {
    if (!shapes.empty()) bopts.shapes_path = shapes;
    if (!schema.empty()) bopts.schema_path = schema;
    if (!patterns.empty()) bopts.patterns_path = patterns;
    if (!transcript.empty()) bopts.transcript_path = transcript;
    bopts.extractor = extractor == "transcript" ? builder::ExtractorKind::Transcript : builder::ExtractorKind::Rule;
    if (bopts.extractor == builder::ExtractorKind::Transcript && transcript.empty()) {
      throw ConfigError("--extractor transcript needs --transcript");
    }
    auto store = builder::Store::open(store_dir);
    auto report = builder::run_build(store, bopts);
    emit(report.to_json(), [](const json& j, std::ostream& o) {
      o << "documents " << j["documents"] << ", chunks " << j["chunks"] << ", relations " << j["relations"]
        << ", candidates " << j["candidates"] << "\n"
        << "accepted " << j["accepted"] << ", quarantined " << j["quarantined"] << ", version "
        << j["delta"]["version_id"] << "\n";
    });
  });

  // feedback
  auto* feedback = app.add_subcommand("feedback", "Feed checked answer claims back through the gate");
  std::string fb_claims, fb_source = "feedback";
  long long fb_at = 0;
  feedback->add_option("--claims", fb_claims, "Claims (JSON lines), - for stdin")->required();
  feedback->add_option("--source", fb_source, "Source id recorded in provenance")->capture_default_str();
  feedback->add_option("--at", fb_at, "Timestamp recorded in provenance");
  feedback->callback([&] {
    auto store = builder::Store::open(store_dir);
    auto parsed = factcheck::parse_claims(read_input(fb_claims, in), store.prefixes());
    for (const auto& d : parsed.diagnostics) err << fb_claims << ":" << d.line << ": " << d.message << "\n";
    if (!parsed.diagnostics.empty()) throw InputError("invalid claims");
    auto delta = builder::run_feedback(store, parsed.claims, fb_source, fb_at);
    emit(delta.to_json(), [](const json& j, std::ostream& o) {
      o << "accepted " << j["accepted"].size() << ", quarantined " << j["quarantined"].size() << ", version "
        << j["version_id"] << "\n";
    });
  });

  // query
  auto* query = app.add_subcommand("query", "Run a SPARQL SELECT or ASK query");
  std::string query_text, query_file;
  bool query_inferred = false;
  query->add_option("query", query_text, "Query text");
  query->add_option("--file", query_file, "Read the query from a file")->check(CLI::ExistingFile);
  query->add_flag("--inferred", query_inferred, "Query the materialized graph");
  query->callback([&] {
    if (query_text.empty() == query_file.empty()) throw ConfigError("give either a query or --file");
    auto store = builder::Store::open(store_dir);
    emit(bus::query(store, query_file.empty() ? query_text : util::read_file(query_file), query_inferred), print_query);
  });

  // validate
  auto* validate = app.add_subcommand("validate", "Validate the trusted graph");
  std::string validate_shapes;
  bool logic = false;
  validate->add_option("--shapes", validate_shapes, "Shapes file (default: the store's)")->check(CLI::ExistingFile);
  validate->add_flag("--logic", logic, "Also check logical consistency");
  validate->callback([&] {
    auto store = builder::Store::open(store_dir);
    auto r = bus::validate(store, validate_shapes.empty() ? std::nullopt : std::optional<std::string>(validate_shapes),
                           logic);
    emit(r, print_validate);
    if (!r["conforms"].get<bool>()) code = kExitNegative;
  });

  // diff
  auto* diff = app.add_subcommand("diff", "Triples added and removed between two versions");
  int v1 = 0, v2 = 0;
  bool diff_inferred = false;
  diff->add_option("V1", v1, "Older version")->required();
  diff->add_option("V2", v2, "Newer version")->required();
  diff->add_flag("--include-inferred", diff_inferred, "Compare materialized graphs");
  diff->callback([&] {
    auto store = builder::Store::open(store_dir);
    emit(bus::diff(store, v1, v2, diff_inferred), [](const json& j, std::ostream& o) {
      for (const auto& l : j["removed"]) o << "- " << l.get<std::string>() << "\n";
      for (const auto& l : j["added"]) o << "+ " << l.get<std::string>() << "\n";
    });
  });

  // check
  auto* check = app.add_subcommand("check", "Fact-check claims against the trusted graph");
  std::string claims_path;
  check->add_option("--claims", claims_path, "Claims (JSON lines), - for stdin")->required();
  check->callback([&] {
    auto store = builder::Store::open(store_dir);
    auto r = bus::check(store, read_input(claims_path, in));
    emit(r, print_check);
    if (r["overall"] == "CONTRADICTED") code = kExitNegative;
  });

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "Build the fused retrieval context for a query");
  memory::RetrieveRequest req;
  int radius = -1, k = -1, budget = -1;
  std::vector<std::string> seeds, tools;
  retrieve->add_option("--query", req.query, "Query text")->required();
  retrieve->add_option("--radius", radius, "Graph hop radius");
  retrieve->add_option("--k", k, "Vector hits");
  retrieve->add_option("--budget", budget, "Fused items kept");
  retrieve->add_option("--seed", seeds, "Seed term (repeatable); replaces alias matching");
  retrieve->add_option("--session", req.session, "Dialogue session id for user memory");
  retrieve->add_option("--tool", tools, "Tool result as name=text (repeatable)");
  retrieve->callback([&] {
    auto store = builder::Store::open(store_dir);
    if (radius >= 0) req.radius = radius;
    if (k >= 0) req.k = k;
    if (budget >= 0) req.budget = budget;
    for (const auto& s : seeds) {
      std::string e;
      auto t = turtle::parse_term(s, &e, store.prefixes());
      if (!t) throw InputError("bad seed '" + s + "': " + e);
      req.seeds.push_back(*t);
    }
    for (const auto& t : tools) {
      auto eq = t.find('=');
      if (eq == std::string::npos) throw InputError("--tool expects name=text, got '" + t + "'");
      req.tool_results.push_back({t.substr(0, eq), t.substr(eq + 1)});
    }
    emit(bus::retrieve(store, req), print_retrieve);
  });

  // bench hanoi
  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  auto* hanoi_cmd = bench->add_subcommand("hanoi", "Tower of Hanoi propose-check-repair benchmark");
  hanoi::BenchConfig bcfg;
  std::vector<std::string> proposers = {"optimal"};
  std::string bench_out;
  hanoi_cmd->add_option("--disks", bcfg.disks, "Disk counts")->delimiter(',')->capture_default_str();
  hanoi_cmd->add_option("--proposer", proposers, "optimal, random[:cap], corrupted:P or transcript:DIR")
      ->delimiter(',')
      ->capture_default_str();
  hanoi_cmd->add_option("--episodes", bcfg.episodes, "Episodes per cell")->capture_default_str();
  hanoi_cmd->add_option("--repairs", bcfg.repairs, "Repair budgets")->delimiter(',')->capture_default_str();
  hanoi_cmd->add_option("--seed", bcfg.seed, "Base seed")->capture_default_str();
  hanoi_cmd->add_flag("--move-level", bcfg.move_level, "Verify one move per round");
  hanoi_cmd->add_option("--out", bench_out, "Write the JSON report here");
  hanoi_cmd->callback([&] {
    bcfg.proposers.clear();
    for (const auto& p : proposers) bcfg.proposers.push_back(hanoi::ProposerSpec::parse(p));
    auto report = hanoi::run_benchmark(bcfg);
    auto j = report.to_json();
    if (!bench_out.empty()) util::write_file(bench_out, j.dump(2) + "\n");
    if (as_json) {
      out << j.dump(2) << "\n";
      return;
    }
    out << hanoi::render_table(report.cells);
    auto lo = *std::min_element(bcfg.repairs.begin(), bcfg.repairs.end());
    auto hi = *std::max_element(bcfg.repairs.begin(), bcfg.repairs.end());
    if (lo != hi) {
      for (const auto& p : bcfg.proposers) out << "\n" << hanoi::render_comparison(report.cells, p.id(), lo, hi);
    }
  });

  // serve
  auto* serve = app.add_subcommand("serve", "JSON-RPC 2.0 tool bus, one JSON document per line");
  std::string transport = "stdio";
  int port = 7411;
  serve->add_option("--transport", transport, "stdio or tcp")->check(CLI::IsMember({"stdio", "tcp"}))->capture_default_str();
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->callback([&] {
    bus::Server server(store_dir);
    if (transport == "stdio") {
      server.serve_stream(in, out);
      return;
    }
    g_stop.store(false);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.serve_tcp(port, g_stop, [&](int bound) { err << "listening on 127.0.0.1:" << bound << std::endl; });
  });

  std::vector<std::string> argv_store = {"ontomem"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}

}  // namespace ontomem::cli
