#pragma once

#include <atomic>
#include <functional>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "ontomem/builder/store.hpp"

namespace ontomem::bus {

// JSON-RPC 2.0 error codes.
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kServerError = -32000;

// Line-delimited JSON-RPC 2.0 over one store. Not MCP: no capability
// negotiation, sessions or subscriptions.
class Server {
 public:
  explicit Server(std::string store_dir);

  // Handles one request line. Returns nothing for notifications (requests
  // without an id, or with a null id).
  std::optional<std::string> handle_line(const std::string& line);
  std::optional<nlohmann::json> handle(const nlohmann::json& request);

  // Serves until end of input.
  void serve_stream(std::istream& in, std::ostream& out);
  // Serves 127.0.0.1:port, one thread per connection, until `stop` is set.
  // Port 0 picks a free port; `on_listen` receives the bound port. Throws
  // IoError when the socket cannot be bound.
  void serve_tcp(int port, const std::atomic<bool>& stop, const std::function<void(int)>& on_listen = {});

 private:
  nlohmann::json dispatch(const std::string& method, const nlohmann::json& params);
  // Reloads the store when another process committed a new version.
  void refresh();

  std::string dir_;
  std::shared_mutex mu_;
  builder::Store store_;
};

}  // namespace ontomem::bus
