#pragma once

#include <memory>
#include <string>

#include "swcat/snapshot.hpp"

namespace swcat {

/// HTTP front end for handle_request. Handlers read a shared_ptr to the
/// current snapshot, so replace_snapshot never disturbs in-flight requests.
class CatalogServer {
 public:
  explicit CatalogServer(std::shared_ptr<const IndexSnapshot> snapshot);
  ~CatalogServer();
  CatalogServer(const CatalogServer&) = delete;
  CatalogServer& operator=(const CatalogServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws
  /// Error(Internal) when the address is unavailable.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();
  bool running() const;

  void replace_snapshot(std::shared_ptr<const IndexSnapshot> snapshot);
  std::shared_ptr<const IndexSnapshot> snapshot() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace swcat
