#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "codelineage/genealogy.hpp"

namespace httplib {
class Server;
}

namespace codelineage {

struct ServerOptions {
  std::filesystem::path export_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> ui_dir;
  int default_depth = 3;
};

// Read-only HTTP view of an export directory. Files are loaded once at
// construction and served byte-for-byte; lineage is computed per request.
//   GET /api/genealogy            genealogy.json
//   GET /api/category/{slot}      category_<slot>.json
//   GET /api/lineage/{id}?depth=N
//   GET /api/metrics              metrics.json
class ViewServer {
 public:
  // Throws Error(Io) when genealogy.json is missing or unreadable.
  explicit ViewServer(ServerOptions options);
  ~ViewServer();
  ViewServer(const ViewServer&) = delete;
  ViewServer& operator=(const ViewServer&) = delete;

  // Blocks until stop(). Returns false if the socket could not be bound.
  bool listen();
  // Binds an ephemeral port on options.host and returns it, or -1.
  int bind_any_port();
  // Serves on a socket bound by bind_any_port; blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  const genealogy::Genealogy& genealogy() const { return genealogy_; }

 private:
  void install_routes();

  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::string genealogy_text_;
  std::optional<std::string> metrics_text_;
  std::map<std::string, std::string> category_text_;  // by slot name
  genealogy::Genealogy genealogy_;
};

}  // namespace codelineage
