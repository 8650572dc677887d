#include "server.hpp"

#include <httplib.h>

#include "fuzzdss/number_format.hpp"

namespace fuzzdss::http {

std::optional<ListenAddress> parse_listen_address(const std::string& text) {
  ListenAddress address;
  std::string port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) address.host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  auto port = parse_number(port_text);
  if (!port || *port < 0 || *port > 65535 || *port != static_cast<int>(*port)) return std::nullopt;
  address.port = static_cast<int>(*port);
  return address;
}

void bind_service(httplib::Server& server, Service& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    Request request{req.method, req.path, {}, req.get_header_value("Content-Type"), req.body};
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    auto response = service.handle(request);
    res.status = response.status;
    for (const auto& [name, value] : response.headers) res.set_header(name, value);
    if (!response.body.empty() || response.status != 204) res.set_content(response.body, response.content_type);
  };
  const char* any = R"(/.*)";
  server.Get(any, forward);
  server.Post(any, forward);
  server.Put(any, forward);
  server.Delete(any, forward);
  server.Patch(any, forward);
  server.Options(any, forward);
}

bool serve(Service& service, const ListenAddress& address, const std::function<void(int)>& on_ready) {
  httplib::Server server;
  bind_service(server, service);
  const int port = address.port == 0 ? server.bind_to_any_port(address.host) : address.port;
  if (address.port != 0 && !server.bind_to_port(address.host, address.port)) return false;
  if (port < 0) return false;
  if (on_ready) on_ready(port);
  return server.listen_after_bind();
}

}  // namespace fuzzdss::http
