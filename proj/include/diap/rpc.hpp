// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <thread>

#include "diap/auth.hpp"
#include "diap/net.hpp"

namespace diap {

/// One framed JSON message on a direct channel. Requests carry method and
/// payload; responses echo the id and carry payload or error.
struct RpcEnvelope {
  std::string kind;  // "request" or "response"
  uint64_t id = 0;
  std::string method;  // requests only
  Bytes payload;
  std::string error;  // responses only; empty means success
};

std::string rpc_to_json(const RpcEnvelope& envelope);
RpcEnvelope rpc_from_json(std::string_view text);  // throws parse-error

/// Bidirectional framed byte stream over a connected descriptor. Writes are
/// serialized internally; reads are single-consumer. close() wakes a blocked
/// reader with a clean EOF.
class DirectChannel {
public:
  explicit DirectChannel(int fd) : fd_(fd) {}
  ~DirectChannel();
  DirectChannel(const DirectChannel&) = delete;
  DirectChannel& operator=(const DirectChannel&) = delete;

  void write_frame(ByteSpan body);          // throws channel-closed / protocol-error
  std::optional<Bytes> read_frame();        // nullopt on EOF

  void close();

  /// Two connected channel ends inside one process (a socketpair).
  static std::pair<std::unique_ptr<DirectChannel>, std::unique_ptr<DirectChannel>>
  in_process_pair();

private:
  int fd_;
  std::mutex write_mutex_;
  std::atomic<bool> closed_{false};
};

using RpcHandler = std::function<Bytes(const std::string& method, ByteSpan payload)>;

/// Serves requests on the channel until the peer hangs up. A handler
/// exception becomes an error response; a malformed or non-request frame
/// closes the channel and raises protocol-error.
void rpc_serve(DirectChannel& channel, const RpcHandler& handler);

/// Caller side of a direct channel: pipelined request/response with id
/// demultiplexing, safe to call from many threads.
class RpcClient {
public:
  explicit RpcClient(std::unique_ptr<DirectChannel> channel);
  ~RpcClient();
  RpcClient(const RpcClient&) = delete;
  RpcClient& operator=(const RpcClient&) = delete;

  /// Sends one request and waits for its response. A timeout abandons only
  /// this call; the channel stays usable and the late response is dropped.
  Bytes call(const std::string& method, ByteSpan payload,
             std::chrono::milliseconds timeout = std::chrono::seconds(30));
  // throws timeout / channel-closed / rpc-error(server message)

  void close();

private:
  void read_loop();

  std::unique_ptr<DirectChannel> channel_;
  std::thread reader_;
  std::mutex mutex_;
  std::condition_variable cv_;
  uint64_t next_id_ = 1;
  std::map<uint64_t, std::optional<RpcEnvelope>> pending_;
  bool down_ = false;
};

struct PeerEndpointInfo {
  std::string host;
  uint16_t port = 0;
};

/// Peer-id routing table, the in-process stand-in for a discovery layer.
class PeerRegistry {
public:
  void register_peer(const PeerId& peer_id, PeerEndpointInfo info);
  std::optional<PeerEndpointInfo> lookup(const PeerId& peer_id) const;
  void unregister(const PeerId& peer_id);

private:
  mutable std::mutex mutex_;
  std::map<Bytes, PeerEndpointInfo> peers_;
};

/// Inbound side of direct messaging: recovers its own peer id from its own
/// document (the only party able to), listens on loopback, and registers the
/// mapping so dialers can find it.
class DirectListener {
public:
  DirectListener(const AgentIdentity& identity, PeerRegistry& registry, RpcHandler handler,
                 uint16_t port = 0);
  ~DirectListener();
  DirectListener(const DirectListener&) = delete;
  DirectListener& operator=(const DirectListener&) = delete;

  uint16_t port() const { return port_; }
  void stop();

private:
  void accept_loop();

  PeerRegistry& registry_;
  PeerId peer_id_;
  RpcHandler handler_;
  uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::thread accept_thread_;
  std::mutex mutex_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

/// Dials a peer through its published identity: checks the document's
/// endpoint signature, resolves the peer id to an address, and connects.
std::unique_ptr<DirectChannel> connect_via_identity(
    const DidDocument& remote_document, const PeerId& remote_peer_id, const PeerRegistry& registry);
// throws endpoint-signature-invalid / resolution-failure / peer-unreachable

}  // namespace diap
