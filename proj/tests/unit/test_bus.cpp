#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <filesystem>
#include <future>
#include <sstream>
#include <thread>

#include "ontomem/bus/server.hpp"
#include "ontomem/cli/cli.hpp"
#include "bus_cases.hpp"
#include "test_support.hpp"

namespace bus = ontomem::bus;
namespace fs = std::filesystem;
using nlohmann::json;
using namespace testsupport;

namespace {

// A private copy of the committed two-version store.
struct FixtureStore {
  TempDir tmp;
  std::string dir;
  FixtureStore() : dir(tmp.str() + "/store") { fs::copy(fixture("store"), dir, fs::copy_options::recursive); }
};

json golden_json(const std::string& name) { return json::parse(ontomem::util::read_file(golden("bus/" + name + ".json"))); }

json call(bus::Server& s, const std::string& method, json params, json id = 1) {
  auto r = s.handle({{"jsonrpc", "2.0"}, {"id", id}, {"method", method}, {"params", std::move(params)}});
  EXPECT_TRUE(r.has_value());
  return *r;
}

json result_of(bus::Server& s, const std::string& method, json params) {
  auto r = call(s, method, std::move(params));
  EXPECT_TRUE(r.contains("result")) << r.dump();
  return r.value("result", json());
}

int error_code(const json& r) { return r.contains("error") ? r["error"]["code"].get<int>() : 0; }

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(const std::vector<std::string>& args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  int code = ontomem::cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

json cli_json(const std::string& store, std::vector<std::string> args) {
  args.insert(args.begin(), {"--store", store, "--json"});
  auto r = cli(args);
  EXPECT_LE(r.code, 1) << r.err;
  return json::parse(r.out);
}

std::uint64_t dir_hash(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += f.filename().string() + "\n" + ontomem::util::read_file(f.string());
  return ontomem::util::fnv1a64(all);
}

}  // namespace

TEST(BusCatalog, ListsMethods) {
  FixtureStore fx;
  bus::Server s(fx.dir);
  auto r = s.handle_line(R"({"jsonrpc":"2.0","id":1,"method":"tools.list"})");
  ASSERT_TRUE(r);
  auto j = json::parse(*r);
  EXPECT_EQ(j["id"], 1);
  ASSERT_GE(j["result"]["methods"].size(), 6u);
  std::set<std::string> names;
  for (const auto& m : j["result"]["methods"]) {
    names.insert(m["name"].get<std::string>());
    EXPECT_EQ(m["params"]["type"], "object");
  }
  for (const char* m : {"graph.query", "graph.validate", "graph.diff", "fact.check", "memory.retrieve",
                        "bench.hanoi.run", "tools.list"}) {
    EXPECT_TRUE(names.count(m)) << m;
  }
}

TEST(BusCliEquivalence, EveryMethodMatchesGoldenAndCli) {
  FixtureStore fx;
  bus::Server s(fx.dir);
  for (const auto& c : oracles::bus_cases()) {
    json expected = golden_json(c.golden);
    EXPECT_EQ(result_of(s, c.method, c.params), expected) << c.golden;
    EXPECT_EQ(cli_json(fx.dir, c.cli), expected) << c.golden;
  }
}

TEST(BusErrors, StandardCodes) {
  FixtureStore fx;
  bus::Server s(fx.dir);
  for (const auto& [request, code] : oracles::malformed_requests()) {
    auto r = s.handle_line(request);
    ASSERT_TRUE(r) << request;
    EXPECT_EQ(error_code(json::parse(*r)), code) << request;
  }
  EXPECT_EQ(error_code(call(s, "graph.validate", {{"shapes", "/nonexistent/shapes.ttl"}})), bus::kServerError);
}

TEST(BusErrors, IdsEchoedAndNotificationsSilent) {
  FixtureStore fx;
  bus::Server s(fx.dir);
  EXPECT_EQ(call(s, "tools.list", json::object(), "abc")["id"], "abc");
  EXPECT_EQ(call(s, "nope", json::object(), 77)["id"], 77);
  EXPECT_FALSE(s.handle_line(R"({"jsonrpc":"2.0","method":"tools.list"})"));
  EXPECT_FALSE(s.handle_line(R"({"jsonrpc":"2.0","id":null,"method":"nope"})"));
  auto r = json::parse(*s.handle_line(R"({"jsonrpc":"2.0","id":3,"method":"tools.list"})"));
  EXPECT_TRUE(r.contains("result"));
  EXPECT_FALSE(r.contains("error"));
}

TEST(BusIsolation, FailingRequestsLeaveStoreUntouched) {
  FixtureStore fx;
  auto before = dir_hash(fx.dir);
  bus::Server s(fx.dir);
  std::mt19937_64 rng(8);
  const std::vector<std::string> methods = {"graph.query", "graph.validate", "graph.diff", "fact.check",
                                            "memory.retrieve", "bench.hanoi.run", "bogus"};
  const std::vector<json> junk = {json::object(), {{"query", 1}}, {{"from", -1}, {"to", "x"}}, {{"claims", "no"}},
                                  {{"radius", -3}, {"query", ""}}, {{"episodes", 0}}, {{"shapes", 3}}};
  int errors = 0;
  for (int i = 0; i < 100; ++i) {
    auto r = call(s, methods[rng() % methods.size()], junk[rng() % junk.size()], i);
    errors += r.contains("error");
    ASSERT_EQ(r["id"], i);
  }
  EXPECT_GT(errors, 50);
  EXPECT_EQ(dir_hash(fx.dir), before);
}

TEST(BusTransport, StdioStream) {
  FixtureStore fx;
  bus::Server s(fx.dir);
  std::istringstream in(R"({"jsonrpc":"2.0","id":1,"method":"graph.query","params":{"query":"ASK { inst:heidi prop:worksFor inst:initech }"}})"
                        "\n\n"
                        R"({"jsonrpc":"2.0","method":"tools.list"})"
                        "\n"
                        R"({"jsonrpc":"2.0","id":2,"method":"nope"})"
                        "\n");
  std::ostringstream out;
  s.serve_stream(in, out);
  std::istringstream lines(out.str());
  std::string a, b, c;
  std::getline(lines, a);
  std::getline(lines, b);
  EXPECT_FALSE(std::getline(lines, c));
  EXPECT_EQ(json::parse(a)["result"], golden_json("graph_query_ask"));
  EXPECT_EQ(error_code(json::parse(b)), bus::kMethodNotFound);
}

TEST(BusTransport, TcpLineDelimited) {
  FixtureStore fx;
  bus::Server s(fx.dir);
  std::atomic<bool> stop{false};
  std::promise<int> port;
  std::thread server([&] { s.serve_tcp(0, stop, [&](int p) { port.set_value(p); }); });
  int p = port.get_future().get();

  auto session = [&](const std::string& payload, std::size_t lines) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(p));
    EXPECT_EQ(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
    EXPECT_EQ(::send(fd, payload.data(), payload.size(), 0), static_cast<ssize_t>(payload.size()));
    std::string got;
    char buf[4096];
    while (static_cast<std::size_t>(std::count(got.begin(), got.end(), '\n')) < lines) {
      ssize_t n = ::recv(fd, buf, sizeof buf, 0);
      if (n <= 0) break;
      got.append(buf, static_cast<std::size_t>(n));
    }
    ::close(fd);
    return got;
  };
  std::string req = R"({"jsonrpc":"2.0","id":5,"method":"graph.diff","params":{"from":1,"to":2}})";
  auto a = std::async(std::launch::async, session, req + "\n" + R"({"jsonrpc":"2.0","id":6,"method":"x"})" + "\n", 2);
  auto b = std::async(std::launch::async, session, "garbage\n", 1);
  std::string ra = a.get(), rb = b.get();
  stop = true;
  server.join();

  std::istringstream la(ra);
  std::string first, second;
  std::getline(la, first);
  std::getline(la, second);
  EXPECT_EQ(json::parse(first)["result"], golden_json("graph_diff"));
  EXPECT_EQ(json::parse(first)["id"], 5);
  EXPECT_EQ(error_code(json::parse(second)), bus::kMethodNotFound);
  EXPECT_EQ(error_code(json::parse(rb)), bus::kParseError);
}

TEST(BusRefresh, SeesCommitsFromOtherProcesses) {
  TempDir tmp;
  std::string dir = tmp.str() + "/s";
  ASSERT_EQ(cli({"--store", dir, "init"}).code, 0);
  bus::Server s(dir);
  EXPECT_EQ(result_of(s, "graph.query", {{"query", "ASK { inst:heidi prop:worksFor inst:initech }"}})["ask"], false);
  ASSERT_EQ(cli({"--store", dir, "build", "--sources", fixture("builder/extra"), "--patterns",
                 fixture("builder/patterns.conf")})
                .code,
            0);
  EXPECT_EQ(result_of(s, "graph.query", {{"query", "ASK { inst:heidi prop:worksFor inst:initech }"}})["ask"], true);
}
