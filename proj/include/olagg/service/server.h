#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <json.hpp>

#include "olagg/core/dataset.h"
#include "olagg/engine/coordinator.h"

namespace olagg::service {

struct ServerOptions {
  std::string address = "127.0.0.1";
  uint16_t port = 0;  // 0 picks a free port
  // Used when a submission names no dataset directory.
  std::shared_ptr<const PartitionedDataset> dataset;
  engine::EngineConfig engine;
  std::chrono::milliseconds min_period{100};
  std::chrono::milliseconds default_period{1000};
};

// Applies the "engine" object of a submission on top of `base`. Throws
// kInvalidArgument for unknown keys or bad values.
engine::EngineConfig engine_from_json(const nlohmann::json& j, const engine::EngineConfig& base);

// HTTP + WebSocket front end: one thread per connection.
//
//   POST /queries                 {"id"?, "plan", "dataset"?, "engine"?} -> 201 {"id"}
//   GET  /queries                 -> {"queries": [...]}
//   GET  /queries/{id}            -> status and per-node progress
//   POST /queries/{id}/stop       -> final event
//   WS   /queries/{id}/stream?period=ms
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts accepting. Throws kIo when the address is unusable.
  void start();
  void stop();
  uint16_t port() const { return port_; }

  engine::Coordinator& coordinator() { return coordinator_; }
  // Next sequence number for events of `query_id`.
  uint64_t next_sequence(const std::string& query_id);

  struct Impl;

 private:
  void accept_loop();
  void reap_sessions(bool all);

  ServerOptions options_;
  engine::Coordinator coordinator_;
  std::unique_ptr<Impl> impl_;
  uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;

  struct Session {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
    int fd = -1;
  };
  std::mutex sessions_mu_;
  std::list<Session> sessions_;

  std::mutex seq_mu_;
  std::map<std::string, uint64_t> sequences_;
};

}  // namespace olagg::service
