#include "ontomem/bus/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "ontomem/bus/service.hpp"
#include "ontomem/error.hpp"
#include "ontomem/turtle/turtle.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::bus {

using nlohmann::json;

namespace {

// Bad or missing parameters.
struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RpcError {
  int code;
  std::string message;
};

json error_response(const json& id, int code, const std::string& message) {
  return {{"jsonrpc", "2.0"}, {"id", id}, {"error", {{"code", code}, {"message", message}}}};
}

class Params {
 public:
  explicit Params(const json& p) : p_(p) {
    if (!p_.is_object()) throw ParamError("params must be an object");
  }

  template <typename T>
  std::optional<T> opt(const std::string& key, const char* type) const {
    auto it = p_.find(key);
    if (it == p_.end() || it->is_null()) return std::nullopt;
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!it->is_number_integer()) throw ParamError("");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ParamError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ParamError("");
      }
      return it->get<T>();
    } catch (const std::exception&) {
      throw ParamError("'" + key + "' must be " + type);
    }
  }

  template <typename T>
  T req(const std::string& key, const char* type) const {
    auto v = opt<T>(key, type);
    if (!v) throw ParamError("missing '" + key + "'");
    return *v;
  }

  const json* raw(const std::string& key) const {
    auto it = p_.find(key);
    return it == p_.end() || it->is_null() ? nullptr : &*it;
  }

 private:
  const json& p_;
};

memory::RetrieveRequest retrieve_request(const Params& p, const turtle::PrefixMap& prefixes) {
  memory::RetrieveRequest req;
  req.query = p.req<std::string>("query", "a string");
  req.radius = p.opt<int>("radius", "an integer");
  req.k = p.opt<int>("k", "an integer");
  req.budget = p.opt<int>("budget", "an integer");
  req.session = p.opt<std::string>("session", "a string").value_or("");
  for (const auto& s : p.opt<std::vector<std::string>>("seeds", "an array of terms").value_or(std::vector<std::string>{})) {
    std::string err;
    auto t = turtle::parse_term(s, &err, prefixes);
    if (!t) throw ParamError("bad seed '" + s + "': " + err);
    req.seeds.push_back(*t);
  }
  if (const json* tools = p.raw("tool_results")) {
    if (!tools->is_array()) throw ParamError("'tool_results' must be an array");
    for (const auto& t : *tools) {
      if (!t.is_object() || !t.contains("tool") || !t.contains("text") || !t["tool"].is_string() ||
          !t["text"].is_string()) {
        throw ParamError("each tool result needs string 'tool' and 'text'");
      }
      req.tool_results.push_back({t["tool"].get<std::string>(), t["text"].get<std::string>()});
    }
  }
  return req;
}

hanoi::BenchConfig bench_config(const Params& p) {
  hanoi::BenchConfig cfg;
  if (auto d = p.opt<std::vector<int>>("disks", "an array of integers")) cfg.disks = *d;
  if (auto names = p.opt<std::vector<std::string>>("proposers", "an array of strings")) {
    cfg.proposers.clear();
    for (const auto& n : *names) cfg.proposers.push_back(hanoi::ProposerSpec::parse(n));
  }
  if (auto e = p.opt<int>("episodes", "an integer")) cfg.episodes = *e;
  if (auto r = p.opt<std::vector<int>>("repairs", "an array of integers")) cfg.repairs = *r;
  if (auto s = p.opt<int>("seed", "an integer")) {
    if (*s < 0) throw ParamError("'seed' must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(*s);
  }
  if (auto m = p.opt<bool>("move_level", "a boolean")) cfg.move_level = *m;
  return cfg;
}

std::string sanitize(std::string msg, const std::string& dir) {
  for (std::size_t pos; !dir.empty() && (pos = msg.find(dir)) != std::string::npos;) msg.replace(pos, dir.size(), "<store>");
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  if (msg.size() > 300) msg = msg.substr(0, 300) + "...";
  return msg;
}

}  // namespace

Server::Server(std::string store_dir) : dir_(std::move(store_dir)), store_(builder::Store::open(dir_)) {}

void Server::refresh() {
  int on_disk = -1;
  try {
    on_disk = std::stoi(std::string(util::trim(util::read_file(dir_ + "/version"))));
  } catch (const std::exception&) {
    return;
  }
  {
    std::shared_lock lock(mu_);
    if (on_disk == store_.version()) return;
  }
  std::unique_lock lock(mu_);
  if (on_disk != store_.version()) store_ = builder::Store::open(dir_);
}

json Server::dispatch(const std::string& method, const json& params) {
  if (method == "tools.list") return tools_list();
  if (method == "bench.hanoi.run") {
    Params p(params);
    return bench_hanoi(bench_config(p), p.opt<std::string>("out", "a string"));
  }

  static const std::vector<std::string> store_methods = {"graph.query", "graph.validate", "graph.diff", "fact.check",
                                                         "memory.retrieve"};
  if (std::find(store_methods.begin(), store_methods.end(), method) == store_methods.end()) {
    throw RpcError{kMethodNotFound, "method not found: " + method};
  }
  Params p(params);
  refresh();
  std::shared_lock lock(mu_);
  if (method == "graph.query") {
    return query(store_, p.req<std::string>("query", "a string"), p.opt<bool>("inferred", "a boolean").value_or(false));
  }
  if (method == "graph.validate") {
    return validate(store_, p.opt<std::string>("shapes", "a string"), p.opt<bool>("logic", "a boolean").value_or(false));
  }
  if (method == "graph.diff") {
    return diff(store_, p.req<int>("from", "an integer"), p.req<int>("to", "an integer"),
                p.opt<bool>("inferred", "a boolean").value_or(false));
  }
  if (method == "fact.check") {
    const json* claims = p.raw("claims");
    if (!claims || !claims->is_array()) throw ParamError("'claims' must be an array");
    std::string lines;
    for (const auto& c : *claims) lines += c.dump() + "\n";
    return check(store_, lines);
  }
  return bus::retrieve(store_, retrieve_request(p, store_.prefixes()));
}

std::optional<json> Server::handle(const json& req) {
  json id = nullptr;
  if (req.is_object()) {
    auto it = req.find("id");
    if (it != req.end() && (it->is_number_integer() || it->is_string() || it->is_null())) id = *it;
  }
  bool notification = req.is_object() && (!req.contains("id") || req["id"].is_null());

  auto invalid = [&](const std::string& why) -> std::optional<json> {
    return error_response(id, kInvalidRequest, "invalid request: " + why);
  };
  if (!req.is_object()) return invalid(req.is_array() ? "batches are not supported" : "expected an object");
  if (!req.contains("jsonrpc") || req["jsonrpc"] != "2.0") return invalid("jsonrpc must be \"2.0\"");
  if (req.contains("id") && !(req["id"].is_number_integer() || req["id"].is_string() || req["id"].is_null())) {
    return invalid("id must be an integer, a string or null");
  }
  if (!req.contains("method") || !req["method"].is_string() || req["method"].get<std::string>().empty()) {
    return invalid("method must be a non-empty string");
  }
  json params = req.contains("params") ? req["params"] : json::object();
  if (!params.is_object() && !params.is_array()) return invalid("params must be an object or an array");

  json response;
  try {
    json result = dispatch(req["method"].get<std::string>(), params);
    response = {{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
  } catch (const RpcError& e) {
    response = error_response(id, e.code, e.message);
  } catch (const ParamError& e) {
    response = error_response(id, kInvalidParams, std::string("invalid params: ") + e.what());
  } catch (const InputError& e) {
    response = error_response(id, kInvalidParams, "invalid params: " + sanitize(e.what(), dir_));
  } catch (const ConfigError& e) {
    response = error_response(id, kInvalidParams, "invalid params: " + sanitize(e.what(), dir_));
  } catch (const TranscriptError& e) {
    response = error_response(id, kInvalidParams, "invalid params: " + sanitize(e.what(), dir_));
  } catch (const std::exception& e) {
    response = error_response(id, kServerError, "internal error: " + sanitize(e.what(), dir_));
  }
  if (notification) return std::nullopt;
  return response;
}

std::optional<std::string> Server::handle_line(const std::string& line) {
  json req;
  try {
    req = json::parse(line);
  } catch (const json::parse_error&) {
    return error_response(nullptr, kParseError, "parse error").dump();
  }
  auto r = handle(req);
  if (!r) return std::nullopt;
  return r->dump();
}

void Server::serve_stream(std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (util::trim(line).empty()) continue;
    if (auto r = handle_line(line)) out << *r << "\n" << std::flush;
  }
}

namespace {

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

void Server::serve_tcp(int port, const std::atomic<bool>& stop, const std::function<void(int)>& on_listen) {
  int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw IoError(std::string("socket: ") + std::strerror(errno));
  int yes = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listener, 16) < 0) {
    std::string err = std::strerror(errno);
    ::close(listener);
    throw IoError("cannot listen on port " + std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listen) on_listen(ntohs(addr.sin_port));

  std::vector<std::thread> sessions;
  while (!stop.load()) {
    pollfd pfd{listener, POLLIN, 0};
    if (::poll(&pfd, 1, 100) <= 0) continue;
    int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) continue;
    sessions.emplace_back([this, fd, &stop] {
      std::string buf;
      char chunk[4096];
      bool open = true;
      while (open && !stop.load()) {
        pollfd cfd{fd, POLLIN, 0};
        int ready = ::poll(&cfd, 1, 100);
        if (ready < 0) break;
        if (ready == 0) continue;
        ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n <= 0) break;
        buf.append(chunk, static_cast<std::size_t>(n));
        for (std::size_t nl; open && (nl = buf.find('\n')) != std::string::npos;) {
          std::string line = buf.substr(0, nl);
          buf.erase(0, nl + 1);
          if (util::trim(line).empty()) continue;
          if (auto r = handle_line(line)) open = send_all(fd, *r + "\n");
        }
      }
      ::close(fd);
    });
  }
  ::close(listener);
  for (auto& t : sessions) t.join();
}

}  // namespace ontomem::bus
