#include "gpnode/service/admin_server.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "gpnode/error.hpp"
#include "gpnode/service/json_codec.hpp"
#include "httplib.h"

namespace gpnode::service {

using nlohmann::json;

namespace {

constexpr auto kEventPeriod = std::chrono::milliseconds(200);  // 5 Hz gauge feed

json error_body(ErrorCode code, const std::string& message) {
  return {{"error", {{"code", std::string(to_string(code))}, {"message", message}}}};
}

void reply_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_argument, fmt::format("request body is not JSON: {}", e.what()));
  }
}

bool require_active_flag(const json& body) {
  const auto it = body.find("active");
  if (it == body.end() || !it->is_boolean()) {
    throw Error(ErrorCode::invalid_argument, "body must be {\"active\": true|false}");
  }
  return it->get<bool>();
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_config:
      return 400;
    case ErrorCode::not_found:
      return 404;
    case ErrorCode::locked_state:
    case ErrorCode::port_occupied:
    case ErrorCode::inactive:
      return 409;
    default:
      return 500;
  }
}

json slot_json(const ModelSlot& slot) {
  const SlotState st = slot.state();
  json j = {{"id", st.id},
            {"udp_active", st.udp_active},
            {"gp_active", st.gp_active},
            {"running", st.running},
            {"locked", st.gp_active},
            {"endpoint", to_json(st.endpoint)},
            {"config", to_json(st.tree_config)},
            {"metrics", to_json(slot.metrics_snapshot())}};
  j["preset"] = st.preset.empty() ? json(nullptr) : json(st.preset);
  j["last_error"] = st.last_error.empty() ? json(nullptr) : json(st.last_error);
  return j;
}

struct AdminServer::Impl {
  explicit Impl(Node& n) : node(n) {}

  Node& node;
  httplib::Server server;
  std::thread thread;
  std::atomic<bool> stopping{false};
  int bound_port = 0;

  // Wraps a handler so domain errors become coded JSON responses.
  template <typename F>
  auto guarded(F fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        reply_json(res, error_body(e.code(), e.what()), http_status(e.code()));
      } catch (const std::exception& e) {
        reply_json(res, error_body(ErrorCode::logic, e.what()), 500);
      }
    };
  }

  ModelSlot& slot_of(const httplib::Request& req) {
    const std::string raw = req.matches[1];
    int id = -1;
    try {
      id = std::stoi(raw);
    } catch (const std::exception&) {
      throw Error(ErrorCode::not_found, fmt::format("no slot with id '{}'", raw));
    }
    return node.slot(id);
  }

  void routes();
};

void AdminServer::Impl::routes() {
  server.Get("/api/host", guarded([](const httplib::Request&, httplib::Response& res) {
               reply_json(res, {{"local_ip", local_ipv4()},
                                {"default_read_port", kDefaultReadPort},
                                {"default_send_port", kDefaultSendPort}});
             }));

  server.Get("/api/slots", guarded([this](const httplib::Request&, httplib::Response& res) {
               json arr = json::array();
               for (int id : node.slot_ids()) arr.push_back(slot_json(node.slot(id)));
               reply_json(res, arr);
             }));

  server.Get(R"(/api/slots/(\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
               reply_json(res, slot_json(slot_of(req)));
             }));

  server.Get(R"(/api/slots/(\d+)/metrics)", guarded([this](const httplib::Request& req, httplib::Response& res) {
               reply_json(res, to_json(slot_of(req).metrics_snapshot()));
             }));

  server.Put(R"(/api/slots/(\d+)/endpoint)", guarded([this](const httplib::Request& req, httplib::Response& res) {
               ModelSlot& slot = slot_of(req);
               slot.set_endpoint(endpoint_from_json(parse_body(req), slot.state().endpoint));
               reply_json(res, slot_json(slot));
             }));

  server.Put(R"(/api/slots/(\d+)/config)", guarded([this](const httplib::Request& req, httplib::Response& res) {
               ModelSlot& slot = slot_of(req);
               slot.set_tree_config(tree_config_from_json(parse_body(req), slot.state().tree_config));
               reply_json(res, slot_json(slot));
             }));

  server.Post(R"(/api/slots/(\d+)/udp)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                ModelSlot& slot = slot_of(req);
                if (require_active_flag(parse_body(req))) {
                  slot.activate_udp();
                } else {
                  slot.deactivate_udp();
                }
                reply_json(res, slot_json(slot));
              }));

  server.Post(R"(/api/slots/(\d+)/gp)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                ModelSlot& slot = slot_of(req);
                if (require_active_flag(parse_body(req))) {
                  slot.activate_gp();
                } else {
                  slot.deactivate_gp();
                }
                reply_json(res, slot_json(slot));
              }));

  server.Post(R"(/api/slots/(\d+)/start)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                ModelSlot& slot = slot_of(req);
                slot.start();
                reply_json(res, slot_json(slot));
              }));

  server.Post(R"(/api/slots/(\d+)/stop)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                ModelSlot& slot = slot_of(req);
                slot.stop();
                reply_json(res, slot_json(slot));
              }));

  // Single-button run control for the console.
  server.Post(R"(/api/slots/(\d+)/toggle)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                ModelSlot& slot = slot_of(req);
                if (slot.running()) {
                  slot.stop();
                } else {
                  slot.start();
                }
                reply_json(res, slot_json(slot));
              }));

  server.Get("/api/presets", guarded([this](const httplib::Request&, httplib::Response& res) {
               json arr = json::array();
               for (const auto& name : node.presets().names()) {
                 try {
                   arr.push_back(json::parse(serialize_preset(node.presets().load(name))));
                 } catch (const Error& e) {
                   arr.push_back({{"name", name}, {"error", e.what()}});
                 }
               }
               reply_json(res, arr);
             }));

  server.Post(R"(/api/slots/(\d+)/preset)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                ModelSlot& slot = slot_of(req);
                const json body = parse_body(req);
                const auto it = body.find("name");
                if (it == body.end() || !it->is_string()) {
                  throw Error(ErrorCode::invalid_argument, "body must be {\"name\": \"<preset>\"}");
                }
                slot.apply_preset(node.presets().load(it->get<std::string>()));
                reply_json(res, slot_json(slot));
              }));

  server.Get(R"(/api/slots/(\d+)/events)", guarded([this](const httplib::Request& req, httplib::Response& res) {
               ModelSlot* slot = &slot_of(req);
               long limit = -1;
               if (req.has_param("limit")) limit = std::stol(req.get_param_value("limit"));
               auto sent = std::make_shared<long>(0);
               res.set_header("Cache-Control", "no-cache");
               res.set_chunked_content_provider(
                   "text/event-stream", [this, slot, limit, sent](std::size_t, httplib::DataSink& sink) {
                     if (stopping.load() || (limit >= 0 && *sent >= limit)) {
                       sink.done();
                       return true;
                     }
                     if (*sent > 0) std::this_thread::sleep_for(kEventPeriod);
                     json event = to_json(slot->metrics_snapshot());
                     event["running"] = slot->running();
                     const std::string frame = fmt::format("event: metrics\ndata: {}\n\n", event.dump());
                     ++*sent;
                     return sink.write(frame.data(), frame.size());
                   });
             }));

  if (node.config().console_dir) {
    server.set_mount_point("/", node.config().console_dir->string());
  }
}

AdminServer::AdminServer(Node& node) : impl_(std::make_unique<Impl>(node)) { impl_->routes(); }

AdminServer::~AdminServer() { stop(); }

int AdminServer::start(const std::string& ip, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(ip);
  } else if (!impl_->server.bind_to_port(ip, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw Error(ErrorCode::port_occupied, fmt::format("admin API cannot bind {}:{}", ip, port));
  }
  impl_->bound_port = bound;
  impl_->stopping = false;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  spdlog::info("event=admin_listening ip={} port={}", ip, bound);
  return bound;
}

void AdminServer::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->stopping = true;
  impl_->server.stop();
  impl_->thread.join();
}

int AdminServer::port() const noexcept { return impl_->bound_port; }

}  // namespace gpnode::service
