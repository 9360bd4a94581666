// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/rpc.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <json.hpp>

#include "diap/errors.hpp"

namespace diap {

using nlohmann::json;

std::string rpc_to_json(const RpcEnvelope& envelope) {
  json j{
      {"id", envelope.id},
      {"kind", envelope.kind},
      {"payload", base64_encode(envelope.payload)},
  };
  if (!envelope.method.empty()) j["method"] = envelope.method;
  if (!envelope.error.empty()) j["error"] = envelope.error;
  return j.dump();
}

RpcEnvelope rpc_from_json(std::string_view text) {
  try {
    json j = json::parse(text);
    RpcEnvelope envelope;
    envelope.kind = j.at("kind").get<std::string>();
    envelope.id = j.at("id").get<uint64_t>();
    envelope.payload = base64_decode(j.at("payload").get<std::string>());
    if (j.contains("method")) envelope.method = j.at("method").get<std::string>();
    if (j.contains("error")) envelope.error = j.at("error").get<std::string>();
    if (envelope.kind != "request" && envelope.kind != "response") {
      throw Error(Errc::parse_error, "unknown envelope kind " + envelope.kind);
    }
    return envelope;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad rpc envelope: ") + e.what());
  }
}

// --- DirectChannel ---

DirectChannel::~DirectChannel() {
  close();
  if (fd_ >= 0) ::close(fd_);
}

void DirectChannel::write_frame(ByteSpan body) {
  if (closed_.load()) throw Error(Errc::channel_closed, "channel is closed");
  std::lock_guard lock(write_mutex_);
  diap::write_frame(fd_, body);
}

std::optional<Bytes> DirectChannel::read_frame() {
  if (closed_.load()) return std::nullopt;
  return diap::read_frame(fd_);
}

void DirectChannel::close() {
  if (closed_.exchange(true)) return;
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);  // wakes any blocked reader
}

std::pair<std::unique_ptr<DirectChannel>, std::unique_ptr<DirectChannel>>
DirectChannel::in_process_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
    throw Error(Errc::io_error, "socketpair failed");
  }
  return {std::make_unique<DirectChannel>(fds[0]), std::make_unique<DirectChannel>(fds[1])};
}

// --- server loop ---

void rpc_serve(DirectChannel& channel, const RpcHandler& handler) {
  for (;;) {
    std::optional<Bytes> frame;
    try {
      frame = channel.read_frame();
    } catch (const Error& e) {
      channel.close();
      if (e.code() == Errc::protocol_error) throw;
      return;  // peer vanished mid-frame; nothing left to serve
    }
    if (!frame) return;  // clean EOF

    RpcEnvelope request;
    try {
      request = rpc_from_json(to_string(*frame));
      if (request.kind != "request") {
        throw Error(Errc::protocol_error, "expected a request envelope");
      }
    } catch (const Error&) {
      channel.close();
      throw Error(Errc::protocol_error, "malformed request frame");
    }

    RpcEnvelope response;
    response.kind = "response";
    response.id = request.id;
    try {
      response.payload = handler(request.method, request.payload);
    } catch (const std::exception& e) {
      response.error = e.what();
      if (response.error.empty()) response.error = "handler failure";
    }
    channel.write_frame(to_bytes(rpc_to_json(response)));
  }
}

// --- RpcClient ---

RpcClient::RpcClient(std::unique_ptr<DirectChannel> channel) : channel_(std::move(channel)) {
  reader_ = std::thread([this] { read_loop(); });
}

RpcClient::~RpcClient() { close(); }

void RpcClient::close() {
  channel_->close();
  if (reader_.joinable()) reader_.join();
}

void RpcClient::read_loop() {
  try {
    while (auto frame = channel_->read_frame()) {
      RpcEnvelope envelope = rpc_from_json(to_string(*frame));
      if (envelope.kind != "response") continue;
      std::lock_guard lock(mutex_);
      auto it = pending_.find(envelope.id);
      if (it == pending_.end()) continue;  // abandoned by a timed-out call
      it->second = std::move(envelope);
      cv_.notify_all();
    }
  } catch (...) {
    // fall through: either the channel broke or the server spoke garbage
  }
  {
    std::lock_guard lock(mutex_);
    down_ = true;
  }
  cv_.notify_all();
}

Bytes RpcClient::call(const std::string& method, ByteSpan payload,
                      std::chrono::milliseconds timeout) {
  RpcEnvelope request;
  request.kind = "request";
  request.method = method;
  request.payload.assign(payload.begin(), payload.end());

  uint64_t id;
  {
    std::lock_guard lock(mutex_);
    if (down_) throw Error(Errc::channel_closed, "rpc channel is down");
    id = next_id_++;
    request.id = id;
    pending_.emplace(id, std::nullopt);
  }

  try {
    channel_->write_frame(to_bytes(rpc_to_json(request)));
  } catch (const Error&) {
    std::lock_guard lock(mutex_);
    pending_.erase(id);
    throw;
  }

  std::unique_lock lock(mutex_);
  bool arrived = cv_.wait_for(lock, timeout, [&] { return pending_.at(id).has_value() || down_; });
  if (!arrived || !pending_.at(id).has_value()) {
    pending_.erase(id);
    if (down_) throw Error(Errc::channel_closed, "rpc channel went down");
    throw Error(Errc::timeout, "no response to '" + method + "' within " +
                                   std::to_string(timeout.count()) + "ms");
  }
  RpcEnvelope response = std::move(*pending_.at(id));
  pending_.erase(id);
  if (!response.error.empty()) throw Error(Errc::rpc_error, response.error);
  return response.payload;
}

// --- PeerRegistry ---

void PeerRegistry::register_peer(const PeerId& peer_id, PeerEndpointInfo info) {
  std::lock_guard lock(mutex_);
  peers_[peer_id.bytes] = std::move(info);
}

std::optional<PeerEndpointInfo> PeerRegistry::lookup(const PeerId& peer_id) const {
  std::lock_guard lock(mutex_);
  auto it = peers_.find(peer_id.bytes);
  if (it == peers_.end()) return std::nullopt;
  return it->second;
}

void PeerRegistry::unregister(const PeerId& peer_id) {
  std::lock_guard lock(mutex_);
  peers_.erase(peer_id.bytes);
}

// --- DirectListener ---

DirectListener::DirectListener(const AgentIdentity& identity, PeerRegistry& registry,
                               RpcHandler handler, uint16_t port)
    : registry_(registry), handler_(std::move(handler)), port_(port) {
  // recover the peer id from the published endpoint rather than trusting a
  // side channel; only the identity's owner can do this
  peer_id_ = decrypt_peer_id(identity.keypair, identity.document.service_endpoint);
  listen_fd_ = listen_loopback(port_);
  registry_.register_peer(peer_id_, PeerEndpointInfo{"127.0.0.1", port_});
  accept_thread_ = std::thread([this] { accept_loop(); });
}

DirectListener::~DirectListener() { stop(); }

void DirectListener::stop() {
  {
    std::lock_guard lock(mutex_);
    if (stopping_) return;
    stopping_ = true;
  }
  registry_.unregister(peer_id_);
  shutdown_and_close(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mutex_);
    workers.swap(workers_);
  }
  for (auto& worker : workers) {
    if (worker.joinable()) worker.join();
  }
}

void DirectListener::accept_loop() {
  for (;;) {
    int fd = accept_client(listen_fd_);
    if (fd < 0) return;
    std::lock_guard lock(mutex_);
    if (stopping_) {
      shutdown_and_close(fd);
      return;
    }
    workers_.emplace_back([this, fd] {
      DirectChannel channel(fd);
      try {
        rpc_serve(channel, handler_);
      } catch (const Error&) {
        // protocol violation from this peer; the connection is already closed
      }
    });
  }
}

// --- dialing ---

std::unique_ptr<DirectChannel> connect_via_identity(const DidDocument& remote_document,
                                                    const PeerId& remote_peer_id,
                                                    const PeerRegistry& registry) {
  if (!verify_endpoint_signature(remote_document.public_key, remote_document.service_endpoint)) {
    throw Error(Errc::endpoint_signature_invalid,
                "endpoint signature on " + remote_document.id.text + " does not verify");
  }
  auto info = registry.lookup(remote_peer_id);
  if (!info) {
    throw Error(Errc::resolution_failure, "peer id is not registered");
  }
  int fd = connect_loopback(info->host, info->port);  // throws peer-unreachable
  return std::make_unique<DirectChannel>(fd);
}

}  // namespace diap
