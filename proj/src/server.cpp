#include "swcat/server.hpp"

#include <httplib.h>

#include <mutex>

#include "swcat/api.hpp"
#include "swcat/error.hpp"

namespace swcat {

struct CatalogServer::Impl {
  httplib::Server http;
  mutable std::mutex mu;
  std::shared_ptr<const IndexSnapshot> snap;
};

CatalogServer::CatalogServer(std::shared_ptr<const IndexSnapshot> snapshot)
    : impl_(std::make_unique<Impl>()) {
  if (!snapshot) throw Error(ErrorCode::Internal, "server needs a snapshot");
  impl_->snap = std::move(snapshot);
  // No SO_REUSEPORT, so a second server on a busy port fails to bind.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  impl_->http.Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api;
    api.method = req.method;
    api.path = req.path;
    for (const auto& [k, v] : req.params) api.params.emplace(k, v);
    ApiResponse out = handle_request(*this->snapshot(), api);
    res.status = out.status;
    res.set_content(out.body, "application/json; charset=utf-8");
  });
}

CatalogServer::~CatalogServer() { stop(); }

int CatalogServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
  } else if (impl_->http.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound < 0) {
    throw Error(ErrorCode::Internal, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void CatalogServer::listen() { impl_->http.listen_after_bind(); }

void CatalogServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

bool CatalogServer::running() const { return impl_->http.is_running(); }

void CatalogServer::replace_snapshot(std::shared_ptr<const IndexSnapshot> snapshot) {
  if (!snapshot) throw Error(ErrorCode::Internal, "server needs a snapshot");
  std::lock_guard lock(impl_->mu);
  impl_->snap = std::move(snapshot);
}

std::shared_ptr<const IndexSnapshot> CatalogServer::snapshot() const {
  std::lock_guard lock(impl_->mu);
  return impl_->snap;
}

}  // namespace swcat
