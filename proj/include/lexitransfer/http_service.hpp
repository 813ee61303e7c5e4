#pragma once

#include <memory>
#include <string>

#include "lexitransfer/workspace.hpp"

namespace httplib {
class Server;
}

namespace lexitransfer {

/// JSON over HTTP front end for a Workspace. Mutating requests must carry
/// an `X-Actor` header; errors answer `{"code": ..., "message": ...}` with
/// the status mapped from the error code.
class HttpService {
 public:
  explicit HttpService(Workspace& workspace);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds and serves until stop(). Returns false when the bind fails.
  bool listen(const std::string& host, int port);
  /// Binds to a free port and returns it, or -1.
  int bind_any(const std::string& host);
  /// Serves on a socket bound by bind_any().
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  void routes();

  Workspace& ws_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace lexitransfer
