#pragma once

// JSON-over-HTTP adapter around one in-memory Workspace.
//
// Mutations take an exclusive lock; reads and posterior computations take a
// shared lock only long enough to copy their inputs, so a PUT arriving
// mid-computation cannot tear it. Numbers in every response are rounded to
// 12 significant digits.

#include <filesystem>
#include <memory>
#include <string>

#include "ifbl/workspace_io.hpp"

namespace ifbl {

inline constexpr const char* kVersion = "0.1.0";

/// HTTP status for an error kind (422 validation, 409 infeasible or
/// incomplete, 404 not found, 500 otherwise).
int http_status(ErrorKind kind);

/// { code, message, field_path }
Json api_error_json(const Error& error);

/// Rounds every floating-point number in `doc` to 12 significant digits.
void round_numbers(Json& doc);

class ViewService {
 public:
  ViewService();
  ~ViewService();
  ViewService(const ViewService&) = delete;
  ViewService& operator=(const ViewService&) = delete;

  /// Serves files under `dir` at "/" (the view studio build output).
  void mount_static(const std::filesystem::path& dir);

  /// Binds to an OS-assigned port on `host` and returns it (-1 on failure).
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  bool listen_after_bind();
  bool listen(const std::string& host, int port);
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ifbl
