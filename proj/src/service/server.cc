#include "olagg/service/server.h"

#include <sys/socket.h>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "olagg/core/error.h"
#include "olagg/service/events.h"

namespace olagg::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

namespace {

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

std::string_view target_of(const Request& req) {
  auto t = req.target();
  return {t.data(), t.size()};
}

http::status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAlreadyExists: return http::status::conflict;
    case ErrorCode::kNotFound: return http::status::not_found;
    case ErrorCode::kAlreadyTerminal: return http::status::gone;
    default: break;
  }
  return is_validation_error(code) ? http::status::bad_request : http::status::internal_server_error;
}

json error_body(const std::string& code, const std::string& message) {
  return {{"type", "error"}, {"error", code}, {"message", message}};
}

Response reply(const Request& req, http::status status, const json& body) {
  Response res{status, req.version()};
  res.set(http::field::content_type, "application/json");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

// "/queries/abc/stop?x=1" -> {"queries", "abc", "stop"}, query string split off.
std::vector<std::string> split_path(std::string_view target, std::string* query) {
  auto q = target.find('?');
  if (query) *query = q == std::string_view::npos ? "" : std::string(target.substr(q + 1));
  target = target.substr(0, q);
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < target.size()) {
    if (target[i] == '/') {
      ++i;
      continue;
    }
    auto j = target.find('/', i);
    if (j == std::string_view::npos) j = target.size();
    parts.emplace_back(target.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::string query_param(const std::string& query, const std::string& name) {
  std::size_t i = 0;
  while (i <= query.size()) {
    auto j = query.find('&', i);
    if (j == std::string::npos) j = query.size();
    std::string_view kv(query.data() + i, j - i);
    auto eq = kv.find('=');
    if (kv.substr(0, eq) == name) return eq == std::string_view::npos ? "" : std::string(kv.substr(eq + 1));
    i = j + 1;
  }
  return {};
}

json node_json(const engine::NodeReport& n) {
  return {{"id", std::to_string(n.id)},
          {"status", engine::node_status_name(n.status)},
          {"consumed", std::to_string(n.consumed)},
          {"local_cardinality", std::to_string(n.local_cardinality)}};
}

}  // namespace

engine::EngineConfig engine_from_json(const json& j, const engine::EngineConfig& base) {
  engine::EngineConfig cfg = base;
  if (j.is_null()) return cfg;
  if (!j.is_object()) raise(ErrorCode::kInvalidArgument, "engine must be an object");
  auto count = [](const json& v, const std::string& key) -> uint64_t {
    if (!v.is_number_integer() || v.get<int64_t>() < 1) {
      raise(ErrorCode::kInvalidArgument, "engine." + key + " must be a positive integer");
    }
    return v.get<uint64_t>();
  };
  auto node_map = [](const json& v, const std::string& key) {
    if (!v.is_object()) raise(ErrorCode::kInvalidArgument, "engine." + key + " must map node ids to numbers");
    std::map<NodeId, double> out;
    for (const auto& [id, x] : v.items()) {
      if (!x.is_number()) raise(ErrorCode::kInvalidArgument, "engine." + key + " values must be numbers");
      std::size_t used = 0;
      unsigned long node = 0;
      try {
        node = std::stoul(id, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != id.size()) raise(ErrorCode::kInvalidArgument, "engine." + key + ": bad node id '" + id + "'");
      out[static_cast<NodeId>(node)] = x.get<double>();
    }
    return out;
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "threads_per_node") {
      cfg.threads_per_node = static_cast<uint32_t>(count(v, key));
    } else if (key == "chunk_capacity") {
      cfg.chunk_capacity = count(v, key);
    } else if (key == "queue_depth") {
      cfg.queue_depth = count(v, key);
    } else if (key == "snapshot_timeout_ms") {
      cfg.snapshot_timeout = std::chrono::milliseconds(count(v, key));
    } else if (key == "topology") {
      if (!v.is_string()) raise(ErrorCode::kInvalidArgument, "engine.topology must be a string");
      cfg.topology = engine::parse_topology(v.get<std::string>());
    } else if (key == "delay_ms_per_chunk") {
      cfg.faults.delay_ms_per_chunk = node_map(v, key);
    } else if (key == "kill_after_fraction") {
      cfg.faults.kill_after_fraction = node_map(v, key);
    } else {
      raise(ErrorCode::kInvalidArgument, "unknown engine option '" + key + "'");
    }
  }
  return cfg;
}

struct Server::Impl {
  Server& server;
  const ServerOptions& options;
  asio::io_context io;
  tcp::acceptor acceptor{io};

  Impl(Server& s, const ServerOptions& o) : server(s), options(o) {}

  Response submit(const Request& req) {
    json body;
    try {
      body = json::parse(req.body());
    } catch (const json::parse_error& e) {
      raise(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
    }
    if (!body.is_object()) raise(ErrorCode::kParse, "submission must be a JSON object");
    if (!body.contains("plan") || !body["plan"].is_object()) raise(ErrorCode::kInvalidArgument, "missing plan object");
    std::string id;
    if (body.contains("id")) {
      if (!body["id"].is_string() || body["id"].get<std::string>().empty()) {
        raise(ErrorCode::kInvalidArgument, "id must be a non-empty string");
      }
      id = body["id"].get<std::string>();
    }
    QueryPlan plan = parse_plan(body["plan"].dump());
    engine::EngineConfig cfg = engine_from_json(body.value("engine", json()), options.engine);

    std::shared_ptr<const PartitionedDataset> data = options.dataset;
    if (body.contains("dataset")) {
      if (!body["dataset"].is_string()) raise(ErrorCode::kInvalidArgument, "dataset must be a directory path");
      data = std::make_shared<const PartitionedDataset>(load_partitioned(body["dataset"].get<std::string>()));
    }
    if (!data) raise(ErrorCode::kInvalidArgument, "no dataset given and the server has no default");
    auto q = server.coordinator().submit(id, plan, *data, cfg);
    return reply(req, http::status::created,
                 {{"id", q->id()},
                  {"model", model_name(q->model())},
                  {"nodes", std::to_string(q->node_count())},
                  {"total_cardinality", std::to_string(q->meta().total_cardinality)}});
  }

  json query_json(engine::Query& q) {
    json nodes = json::array();
    for (std::size_t i = 0; i < q.node_count(); ++i) {
      const auto& n = q.node(static_cast<NodeId>(i));
      nodes.push_back(node_json({n.id(), n.status(), n.consumed(), n.local_cardinality(), false}));
    }
    json out = {{"id", q.id()},
                {"status", engine::query_status_name(q.status())},
                {"terminal", q.terminal()},
                {"degraded", q.degraded()},
                {"model", model_name(q.model())},
                {"consumed", std::to_string(q.consumed())},
                {"total_cardinality", std::to_string(q.meta().total_cardinality)},
                {"nodes", std::move(nodes)}};
    return out;
  }

  Response handle(const Request& req) {
    std::string query;
    auto path = split_path(target_of(req), &query);
    if (path.empty() || path[0] != "queries") {
      return reply(req, http::status::not_found, error_body("not_found", "no such resource"));
    }
    if (path.size() == 1 && req.method() == http::verb::post) return submit(req);
    if (path.size() == 1 && req.method() == http::verb::get) {
      json ids = server.coordinator().ids();
      return reply(req, http::status::ok, {{"queries", ids}});
    }
    if (path.size() == 2 && req.method() == http::verb::get) {
      auto q = server.coordinator().find(path[1]);
      return reply(req, http::status::ok, query_json(*q));
    }
    if (path.size() == 3 && path[2] == "stop" && req.method() == http::verb::post) {
      auto q = server.coordinator().find(path[1]);
      try {
        engine::Snapshot s = q->stop();
        return reply(req, http::status::ok, to_json(make_event(q->id(), s, server.next_sequence(q->id()))));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kAlreadyTerminal) throw;
        // Still hand back the terminal result.
        json body = error_body(error_code_name(e.code()), e.what());
        body["final"] = to_json(make_event(q->id(), q->wait(), server.next_sequence(q->id())));
        return reply(req, http::status::gone, body);
      }
    }
    return reply(req, http::status::not_found, error_body("not_found", "no such resource"));
  }

  Response handle_safely(const Request& req) {
    try {
      return handle(req);
    } catch (const Error& e) {
      return reply(req, status_for(e.code()), error_body(error_code_name(e.code()), e.what()));
    } catch (const std::exception& e) {
      return reply(req, http::status::internal_server_error, error_body("runtime", e.what()));
    }
  }

  void stream(tcp::socket& socket, Request& req) {
    websocket::stream<tcp::socket&> ws(socket);
    ws.accept(req);
    ws.text(true);
    auto send = [&](const json& j) { ws.write(asio::buffer(j.dump())); };

    std::string query;
    auto path = split_path(target_of(req), &query);
    std::shared_ptr<engine::Query> q;
    std::chrono::milliseconds period = options.default_period;
    try {
      q = server.coordinator().find(path.at(1));
      std::string p = query_param(query, "period");
      if (!p.empty()) {
        std::size_t used = 0;
        long long ms = -1;
        try {
          ms = std::stoll(p, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != p.size() || ms < 1) raise(ErrorCode::kInvalidArgument, "period must be a positive integer");
        period = std::chrono::milliseconds(ms);
      }
    } catch (const Error& e) {
      send(error_body(error_code_name(e.code()), e.what()));
      ws.close(websocket::close_code::policy_error);
      return;
    }
    period = std::max(period, options.min_period);

    while (!server.stopping_) {
      const bool was_terminal = q->terminal();
      engine::Snapshot s = was_terminal ? q->wait() : q->request_partial();
      send(to_json(make_event(q->id(), s, server.next_sequence(q->id()))));
      if (s.terminal) break;
      q->wait_for(period);
    }
    ws.close(websocket::close_code::normal);
  }

  void session(tcp::socket& socket) {
    beast::flat_buffer buffer;
    for (;;) {
      Request req;
      beast::error_code ec;
      http::read(socket, buffer, req, ec);
      if (ec) return;
      if (websocket::is_upgrade(req)) {
        auto path = split_path(target_of(req), nullptr);
        if (path.size() == 3 && path[0] == "queries" && path[2] == "stream") {
          stream(socket, req);
        } else {
          http::write(socket, reply(req, http::status::not_found, error_body("not_found", "no such stream")), ec);
        }
        return;
      }
      Response res = handle_safely(req);
      http::write(socket, res, ec);
      if (ec || !res.keep_alive()) return;
    }
  }
};

Server::Server(ServerOptions options) : options_(std::move(options)), impl_(std::make_unique<Impl>(*this, options_)) {}

Server::~Server() { stop(); }

void Server::start() {
  try {
    tcp::endpoint ep(asio::ip::make_address(options_.address), options_.port);
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
    port_ = impl_->acceptor.local_endpoint().port();
  } catch (const std::exception& e) {
    raise(ErrorCode::kIo, std::string("cannot listen on ") + options_.address + ": " + e.what());
  }
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::accept_loop() {
  while (!stopping_) {
    auto socket = std::make_shared<tcp::socket>(impl_->io);
    beast::error_code ec;
    impl_->acceptor.accept(*socket, ec);
    if (stopping_) break;
    if (ec) continue;
    reap_sessions(false);
    auto done = std::make_shared<std::atomic<bool>>(false);
    std::lock_guard lk(sessions_mu_);
    Session s;
    s.fd = socket->native_handle();
    s.done = done;
    s.thread = std::thread([this, socket, done] {
      try {
        impl_->session(*socket);
      } catch (const std::exception&) {
        // Peer went away mid-write.
      }
      beast::error_code ignored;
      socket->shutdown(tcp::socket::shutdown_both, ignored);
      // Under the lock so stop() never shuts down a recycled descriptor.
      std::lock_guard done_lk(sessions_mu_);
      done->store(true);
    });
    sessions_.push_back(std::move(s));
  }
}

void Server::reap_sessions(bool all) {
  std::list<Session> finished;
  {
    std::lock_guard lk(sessions_mu_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (all || it->done->load()) {
        finished.splice(finished.end(), sessions_, it++);
      } else {
        ++it;
      }
    }
  }
  for (auto& s : finished) s.thread.join();
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  if (acceptor_.joinable()) {
    // Wake the blocking accept with a throwaway connection.
    try {
      asio::io_context io;
      tcp::socket poke(io);
      beast::error_code ec;
      poke.connect({asio::ip::make_address(options_.address == "0.0.0.0" ? "127.0.0.1" : options_.address), port_}, ec);
    } catch (const std::exception&) {
    }
    acceptor_.join();
  }
  {
    std::lock_guard lk(sessions_mu_);
    for (auto& s : sessions_) {
      if (!s.done->load()) ::shutdown(s.fd, SHUT_RDWR);
    }
  }
  reap_sessions(true);
  beast::error_code ec;
  impl_->acceptor.close(ec);
}

uint64_t Server::next_sequence(const std::string& query_id) {
  std::lock_guard lk(seq_mu_);
  return ++sequences_[query_id];
}

}  // namespace olagg::service
