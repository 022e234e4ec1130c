#include <httplib.h>

#include "combo/conduct.hpp"

namespace combo::conduct {

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  return parse_json(req.body, "request body");
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send(res, http_status(e.code()), error_body(e));
    } catch (const json::exception& e) {
      send(res, 400, {{"code", "invalid_argument"}, {"message", e.what()}, {"detail", nullptr}});
    } catch (const std::exception& e) {
      send(res, 500, {{"code", "internal"}, {"message", e.what()}, {"detail", nullptr}});
    }
  };
}

}  // namespace

void install_routes(httplib::Server& server, TrialService& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/api/designs", guarded([](const httplib::Request&, httplib::Response& res) {
               send(res, 200, TrialService::designs());
             }));
  server.Post("/api/trials", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                send(res, 201, service.create(body_of(req)));
              }));
  server.Get(R"(/api/trials/([A-Za-z0-9_-]+))",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, service.get(req.matches[1]));
             }));
  server.Post(R"(/api/trials/([A-Za-z0-9_-]+)/cohorts)",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, service.post_cohort(req.matches[1], body_of(req)));
              }));
  server.Post(R"(/api/trials/([A-Za-z0-9_-]+)/undo)",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, service.undo(req.matches[1], body_of(req)));
              }));
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send(res, res.status, {{"code", res.status == 404 ? "not_found" : "http_error"},
                             {"message", httplib::status_message(res.status)},
                             {"detail", nullptr}});
    }
  });
}

bool serve(TrialService& service, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, service);
  return server.listen(host, port);
}

}  // namespace combo::conduct
