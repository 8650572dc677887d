#pragma once

#include <functional>
#include <optional>
#include <string>

#include "service.hpp"

namespace httplib {
class Server;
}

namespace fuzzdss::http {

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// "host:port", ":port" or "port". nullopt when malformed.
std::optional<ListenAddress> parse_listen_address(const std::string& text);

/// Sends every request on `server` through `service.handle`.
void bind_service(httplib::Server& server, Service& service);

/// Blocks serving `service` on `address`. `on_ready` runs once the socket is
/// bound, with the actual port (useful with port 0). Returns false if the
/// address cannot be bound.
bool serve(Service& service, const ListenAddress& address,
           const std::function<void(int port)>& on_ready = {});

}  // namespace fuzzdss::http
