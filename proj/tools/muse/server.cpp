#include "server.hpp"

#include <iostream>

#include <httplib.h>

namespace muse::cli {

void serve(Api& api, const std::string& host, int port) {
  httplib::Server server;
  auto route = [&api](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [k, v] : req.params) request.query[k] = v;
    request.body = req.body;
    auto response = api.handle(request);
    res.status = response.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(response.body.dump(), "application/json");
  };
  server.Get(R"(/.*)", route);
  server.Post(R"(/.*)", route);
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  std::cerr << "muse: listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace muse::cli
