// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <thread>
#include <vector>

#include "diap/auth.hpp"
#include "diap/net.hpp"

namespace diap {

/// Bytes covered by a message signature: length-prefixed topic, content, and
/// decimal nonce hash.
Bytes sign_bytes(std::string_view topic, ByteSpan content, const FieldElement& nonce_hash);

/// A gossip envelope. Possession of the sender's signing key, ownership of
/// the claimed identity, and freshness of the challenge are all verifiable
/// from the envelope alone plus the verifier's local state.
struct AuthenticatedMessage {
  std::string topic;
  Bytes content;
  DidKey from_did;
  Cid did_cid;
  Proof zkp_proof;
  FieldElement nonce_hash;
  Signature signature;
};

std::string message_to_json(const AuthenticatedMessage& msg);
AuthenticatedMessage message_from_json(std::string_view text);  // throws parse-error

/// Queue end of one topic subscription. deliver() never blocks; next() blocks
/// up to the timeout. After close(), next() drains the queue then reports
/// nullopt.
class Subscription {
public:
  void deliver(Bytes payload);
  std::optional<Bytes> next(std::chrono::milliseconds timeout);
  void close();

private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Bytes> queue_;
  bool closed_ = false;
};

using SubscriptionPtr = std::shared_ptr<Subscription>;

/// Topic fan-out. Subscribers receive messages published strictly after they
/// subscribe; there is no history replay.
class BroadcastBus {
public:
  virtual ~BroadcastBus() = default;
  virtual void publish(const std::string& topic, ByteSpan payload) = 0;
  virtual SubscriptionPtr subscribe(const std::string& topic) = 0;
};

class InProcessBus final : public BroadcastBus {
public:
  void publish(const std::string& topic, ByteSpan payload) override;
  SubscriptionPtr subscribe(const std::string& topic) override;

private:
  std::mutex mutex_;
  std::map<std::string, std::vector<std::weak_ptr<Subscription>>> topics_;
};

/// Loopback TCP fan-out hub. Clients speak framed JSON: {"op":"sub","topic":t}
/// to subscribe, {"op":"pub","topic":t,"payload":b64} to publish; the hub
/// pushes {"op":"msg","topic":t,"payload":b64} to every subscribed client.
class TcpBusHub {
public:
  explicit TcpBusHub(uint16_t port = 0);  // 0 picks an ephemeral port
  ~TcpBusHub();
  TcpBusHub(const TcpBusHub&) = delete;
  TcpBusHub& operator=(const TcpBusHub&) = delete;

  uint16_t port() const { return port_; }
  void stop();

private:
  struct Client;
  void accept_loop();
  void serve_client(std::shared_ptr<Client> client);
  void broadcast(const std::string& topic, const std::string& payload_b64);

  uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::thread accept_thread_;
  std::mutex mutex_;
  bool stopping_ = false;
  std::vector<std::shared_ptr<Client>> clients_;
};

/// BroadcastBus over a TcpBusHub connection. One socket per client; local
/// subscriptions fan out from a single reader thread.
class TcpBusClient final : public BroadcastBus {
public:
  TcpBusClient(const std::string& host, uint16_t port);  // throws peer-unreachable
  ~TcpBusClient();
  TcpBusClient(const TcpBusClient&) = delete;
  TcpBusClient& operator=(const TcpBusClient&) = delete;

  void publish(const std::string& topic, ByteSpan payload) override;
  SubscriptionPtr subscribe(const std::string& topic) override;
  void close();

private:
  void read_loop();

  int fd_ = -1;
  std::thread reader_;
  std::mutex mutex_;
  bool closed_ = false;
  std::map<std::string, std::vector<std::weak_ptr<Subscription>>> topics_;
};

/// Receiving end of subscribe_verified: yields only messages that passed
/// verification, counting the ones that did not.
class VerifiedSubscription {
public:
  VerifiedSubscription(SubscriptionPtr raw, class PubsubAuthenticator& authenticator)
      : raw_(std::move(raw)), authenticator_(authenticator) {}

  /// Next verified message within the deadline. Unverifiable deliveries are
  /// counted and skipped; they do not restart the deadline.
  std::optional<AuthenticatedMessage> next(std::chrono::milliseconds timeout);

  size_t rejected() const { return rejected_.load(); }
  const std::string& last_rejection() const { return last_rejection_; }

private:
  SubscriptionPtr raw_;
  PubsubAuthenticator& authenticator_;
  std::atomic<size_t> rejected_{0};
  std::string last_rejection_;
};

/// Signs outbound envelopes and verifies inbound ones against an AuthManager.
class PubsubAuthenticator {
public:
  PubsubAuthenticator(BroadcastBus& bus, AuthManager& manager) : bus_(bus), manager_(manager) {}

  /// Proves ownership against the challenge and signs topic/content/nonce,
  /// without touching the bus. Useful when the caller controls delivery.
  AuthenticatedMessage build_envelope(const AgentIdentity& identity, const std::string& topic,
                                      ByteSpan content, const NonceChallenge& challenge);

  /// build_envelope followed by a publish. Returns what went on the wire.
  AuthenticatedMessage publish_authenticated(const AgentIdentity& identity,
                                             const std::string& topic, ByteSpan content,
                                             const NonceChallenge& challenge);

  /// Three stages, in order: single-use nonce consumption, identity ownership
  /// against the claimed CID, then sender binding and content signature.
  /// Total; diagnostics through last_failure.
  bool verify_message(const AuthenticatedMessage& msg);

  std::shared_ptr<VerifiedSubscription> subscribe_verified(const std::string& topic);

  AuthManager& manager() { return manager_; }

private:
  BroadcastBus& bus_;
  AuthManager& manager_;
};

}  // namespace diap
