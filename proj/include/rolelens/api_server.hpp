#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "json.hpp"
#include "rolelens/corpus_store.hpp"

namespace rolelens {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Pure request handling over an immutable store; `path` is already URL-decoded.
//
//   GET /api/persons
//   GET /api/persons/{id}
//   GET /api/persons/{id}/roles/{role}
//   GET /api/persons/{id}/roles/{role}/aspects/{aspect}
//   GET /api/health
//
// Unknown resources answer 404 with {"error": "not_found", "reason": ...}.
class ApiRouter {
 public:
  explicit ApiRouter(const CorpusStore& store) : store_(store) {}

  ApiResponse get(const std::string& path) const;

 private:
  ApiResponse persons() const;
  ApiResponse person(const std::string& id) const;
  ApiResponse role(const std::string& id, const std::string& role) const;
  ApiResponse aspect(const std::string& id, const std::string& role, const std::string& aspect) const;
  ApiResponse health() const;

  const CorpusStore& store_;
};

struct ServeOptions {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::filesystem::path static_dir;  // optional UI assets mounted at "/"
};

// Blocks until `stop` is called from on_ready's handle or the process ends. `on_ready`
// receives a callback that stops the server and the bound port.
int serve(const CorpusStore& store, const ServeOptions& options,
          const std::function<void(std::function<void()> stop, int port)>& on_ready = {});

}  // namespace rolelens
