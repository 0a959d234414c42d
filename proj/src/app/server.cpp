#include "codelineage/server.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>

#include "codelineage/error.hpp"

namespace fs = std::filesystem;

namespace codelineage {

namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(nlohmann::json{{"error", message}}.dump() + "\n", "application/json");
}

constexpr const char* kJson = "application/json";

}  // namespace

ViewServer::ViewServer(ServerOptions options) : options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  auto text = read_file(options_.export_dir / "genealogy.json");
  if (!text) throw Error(ErrorKind::Io, fmt::format("no genealogy.json in {}", options_.export_dir.string()));
  genealogy_text_ = std::move(*text);
  try {
    genealogy_ = genealogy::import_genealogy_json(nlohmann::json::parse(genealogy_text_));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ManifestParse, fmt::format("genealogy.json: {}", e.what()));
  }
  metrics_text_ = read_file(options_.export_dir / "metrics.json");
  for (LabelSlot slot : kLabelSlots) {
    const std::string name(label_slot_name(slot));
    if (auto t = read_file(options_.export_dir / fmt::format("category_{}.json", name))) category_text_[name] = std::move(*t);
  }
  install_routes();
}

ViewServer::~ViewServer() = default;

void ViewServer::install_routes() {
  auto& srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Get("/api/genealogy", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(genealogy_text_, kJson);
  });

  srv.Get(R"(/api/category/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string slot = req.matches[1];
    auto it = category_text_.find(slot);
    if (!parse_label_slot(slot) || it == category_text_.end()) return send_error(res, 404, "unknown label slot");
    res.set_content(it->second, kJson);
  });

  srv.Get(R"(/api/lineage/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    int depth = options_.default_depth;
    if (req.has_param("depth")) {
      const std::string v = req.get_param_value("depth");
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), depth);
      if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || depth < 0)
        return send_error(res, 400, "depth must be a non-negative integer");
    }
    if (genealogy_.find(id) == nullptr) return send_error(res, 404, "unknown specimen");
    const auto view = genealogy::lineage_of(genealogy_, id, depth);
    res.set_content(genealogy::to_text(genealogy::lineage_json(view, genealogy_)), kJson);
  });

  srv.Get("/api/metrics", [this](const httplib::Request&, httplib::Response& res) {
    if (!metrics_text_) return send_error(res, 404, "no metrics export");
    res.set_content(*metrics_text_, kJson);
  });

  if (options_.ui_dir) srv.set_mount_point("/", options_.ui_dir->string());
}

bool ViewServer::listen() { return server_->listen(options_.host, options_.port); }

int ViewServer::bind_any_port() { return server_->bind_to_any_port(options_.host); }

bool ViewServer::listen_after_bind() { return server_->listen_after_bind(); }

void ViewServer::stop() { server_->stop(); }

void ViewServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace codelineage
