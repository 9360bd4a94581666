// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/messaging.hpp"

#include <set>

#include <json.hpp>

#include "diap/errors.hpp"

namespace diap {

using nlohmann::json;

Bytes sign_bytes(std::string_view topic, ByteSpan content, const FieldElement& nonce_hash) {
  std::string hash_decimal = nonce_hash.to_decimal();
  return length_prefixed({to_bytes(topic), content, to_bytes(hash_decimal)});
}

std::string message_to_json(const AuthenticatedMessage& msg) {
  json j{
      {"content", base64_encode(msg.content)},
      {"didCid", msg.did_cid.text},
      {"fromDid", msg.from_did.text},
      {"nonceHash", msg.nonce_hash.to_decimal()},
      {"signature", base64_encode(msg.signature.bytes)},
      {"topic", msg.topic},
      {"zkpProof", json::parse(proof_to_json(msg.zkp_proof))},
  };
  return j.dump();
}

AuthenticatedMessage message_from_json(std::string_view text) {
  try {
    json j = json::parse(text);
    AuthenticatedMessage msg;
    msg.topic = j.at("topic").get<std::string>();
    msg.content = base64_decode(j.at("content").get<std::string>());
    msg.from_did = DidKey{j.at("fromDid").get<std::string>()};
    msg.did_cid = Cid::parse(j.at("didCid").get<std::string>());
    msg.zkp_proof = proof_from_json(j.at("zkpProof").dump());
    msg.nonce_hash = FieldElement::from_decimal(j.at("nonceHash").get<std::string>());
    Bytes sig = base64_decode(j.at("signature").get<std::string>());
    if (sig.size() != msg.signature.bytes.size()) {
      throw Error(Errc::parse_error, "bad signature length");
    }
    std::copy(sig.begin(), sig.end(), msg.signature.bytes.begin());
    return msg;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad envelope: ") + e.what());
  }
}

// --- Subscription ---

void Subscription::deliver(Bytes payload) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    queue_.push_back(std::move(payload));
  }
  cv_.notify_one();
}

std::optional<Bytes> Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [this] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  Bytes payload = std::move(queue_.front());
  queue_.pop_front();
  return payload;
}

void Subscription::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

// --- InProcessBus ---

void InProcessBus::publish(const std::string& topic, ByteSpan payload) {
  std::vector<SubscriptionPtr> targets;
  {
    std::lock_guard lock(mutex_);
    auto it = topics_.find(topic);
    if (it == topics_.end()) return;
    auto& subs = it->second;
    for (auto weak = subs.begin(); weak != subs.end();) {
      if (auto sub = weak->lock()) {
        targets.push_back(std::move(sub));
        ++weak;
      } else {
        weak = subs.erase(weak);  // subscriber went away
      }
    }
  }
  Bytes copy(payload.begin(), payload.end());
  for (auto& sub : targets) sub->deliver(copy);
}

SubscriptionPtr InProcessBus::subscribe(const std::string& topic) {
  auto sub = std::make_shared<Subscription>();
  std::lock_guard lock(mutex_);
  topics_[topic].push_back(sub);
  return sub;
}

// --- TcpBusHub ---

struct TcpBusHub::Client {
  int fd = -1;
  std::mutex write_mutex;
  std::mutex topics_mutex;
  std::set<std::string> topics;
  std::thread thread;
};

TcpBusHub::TcpBusHub(uint16_t port) : port_(port) {
  listen_fd_ = listen_loopback(port_);
  accept_thread_ = std::thread([this] { accept_loop(); });
}

TcpBusHub::~TcpBusHub() { stop(); }

void TcpBusHub::stop() {
  {
    std::lock_guard lock(mutex_);
    if (stopping_) return;
    stopping_ = true;
  }
  shutdown_and_close(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();

  std::vector<std::shared_ptr<Client>> clients;
  {
    std::lock_guard lock(mutex_);
    clients.swap(clients_);
  }
  for (auto& client : clients) {
    shutdown_and_close(client->fd);
    if (client->thread.joinable()) client->thread.join();
  }
}

void TcpBusHub::accept_loop() {
  for (;;) {
    int fd = accept_client(listen_fd_);
    if (fd < 0) return;
    auto client = std::make_shared<Client>();
    client->fd = fd;
    {
      std::lock_guard lock(mutex_);
      if (stopping_) {
        shutdown_and_close(fd);
        return;
      }
      clients_.push_back(client);
    }
    client->thread = std::thread([this, client] { serve_client(client); });
  }
}

void TcpBusHub::serve_client(std::shared_ptr<Client> client) {
  try {
    while (auto frame = read_frame(client->fd)) {
      json j = json::parse(frame->begin(), frame->end());
      std::string op = j.at("op").get<std::string>();
      std::string topic = j.at("topic").get<std::string>();
      if (op == "sub") {
        std::lock_guard lock(client->topics_mutex);
        client->topics.insert(topic);
      } else if (op == "pub") {
        broadcast(topic, j.at("payload").get<std::string>());
      } else {
        break;  // unknown op: drop the client
      }
    }
  } catch (...) {
    // malformed frame or json, or the socket died: fall through to cleanup
  }
  bool stopping;
  {
    std::lock_guard lock(mutex_);
    stopping = stopping_;
    std::erase(clients_, client);
  }
  // during stop() the stopping thread owns fd shutdown and the join
  if (!stopping) {
    shutdown_and_close(client->fd);
    client->thread.detach();
  }
}

void TcpBusHub::broadcast(const std::string& topic, const std::string& payload_b64) {
  std::string body = json{{"op", "msg"}, {"payload", payload_b64}, {"topic", topic}}.dump();
  std::vector<std::shared_ptr<Client>> targets;
  {
    std::lock_guard lock(mutex_);
    targets = clients_;
  }
  for (auto& client : targets) {
    {
      std::lock_guard lock(client->topics_mutex);
      if (!client->topics.contains(topic)) continue;
    }
    std::lock_guard lock(client->write_mutex);
    try {
      write_frame(client->fd, to_bytes(body));
    } catch (const Error&) {
      // the client's own reader thread handles the dead socket
    }
  }
}

// --- TcpBusClient ---

TcpBusClient::TcpBusClient(const std::string& host, uint16_t port) {
  fd_ = connect_loopback(host, port);
  reader_ = std::thread([this] { read_loop(); });
}

TcpBusClient::~TcpBusClient() { close(); }

void TcpBusClient::close() {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    closed_ = true;
    for (auto& [topic, subs] : topics_) {
      for (auto& weak : subs) {
        if (auto sub = weak.lock()) sub->close();
      }
    }
  }
  shutdown_and_close(fd_);
  if (reader_.joinable()) reader_.join();
}

void TcpBusClient::publish(const std::string& topic, ByteSpan payload) {
  std::string body =
      json{{"op", "pub"}, {"payload", base64_encode(payload)}, {"topic", topic}}.dump();
  std::lock_guard lock(mutex_);
  if (closed_) throw Error(Errc::channel_closed, "bus client is closed");
  write_frame(fd_, to_bytes(body));
}

SubscriptionPtr TcpBusClient::subscribe(const std::string& topic) {
  auto sub = std::make_shared<Subscription>();
  std::string body = json{{"op", "sub"}, {"topic", topic}}.dump();
  std::lock_guard lock(mutex_);
  if (closed_) throw Error(Errc::channel_closed, "bus client is closed");
  write_frame(fd_, to_bytes(body));
  topics_[topic].push_back(sub);
  return sub;
}

void TcpBusClient::read_loop() {
  try {
    while (auto frame = read_frame(fd_)) {
      json j = json::parse(frame->begin(), frame->end());
      if (j.at("op").get<std::string>() != "msg") continue;
      std::string topic = j.at("topic").get<std::string>();
      Bytes payload = base64_decode(j.at("payload").get<std::string>());
      std::vector<SubscriptionPtr> targets;
      {
        std::lock_guard lock(mutex_);
        auto it = topics_.find(topic);
        if (it == topics_.end()) continue;
        for (auto& weak : it->second) {
          if (auto sub = weak.lock()) targets.push_back(std::move(sub));
        }
      }
      for (auto& sub : targets) sub->deliver(payload);
    }
  } catch (...) {
    // hub went away or handed us garbage; subscriptions just stop receiving
  }
  std::lock_guard lock(mutex_);
  for (auto& [topic, subs] : topics_) {
    for (auto& weak : subs) {
      if (auto sub = weak.lock()) sub->close();
    }
  }
}

// --- PubsubAuthenticator ---

AuthenticatedMessage PubsubAuthenticator::build_envelope(const AgentIdentity& identity,
                                                         const std::string& topic, ByteSpan content,
                                                         const NonceChallenge& challenge) {
  AuthenticatedMessage msg;
  msg.topic = topic;
  msg.content.assign(content.begin(), content.end());
  msg.from_did = identity.did;
  msg.did_cid = identity.cid;
  msg.zkp_proof = manager_.prove_ownership(identity, challenge);
  msg.nonce_hash = challenge.nonce_hash;
  msg.signature = sign(identity.keypair, sign_bytes(topic, content, challenge.nonce_hash));
  return msg;
}

AuthenticatedMessage PubsubAuthenticator::publish_authenticated(const AgentIdentity& identity,
                                                                const std::string& topic,
                                                                ByteSpan content,
                                                                const NonceChallenge& challenge) {
  AuthenticatedMessage msg = build_envelope(identity, topic, content, challenge);
  bus_.publish(topic, to_bytes(message_to_json(msg)));
  return msg;
}

bool PubsubAuthenticator::verify_message(const AuthenticatedMessage& msg) {
  // stage 1: the challenge nonce is fresh and burned exactly once
  ConsumeStatus status = manager_.challenges().check_and_consume(msg.nonce_hash);
  if (status != ConsumeStatus::Ok) {
    set_last_failure(std::string(consume_status_name(status)));
    return false;
  }
  // stage 2: the sender owns the claimed identity (nonce already consumed)
  if (!manager_.verify_ownership_with_nonce_hash(msg.did_cid, msg.zkp_proof, msg.nonce_hash)) {
    return false;
  }
  // stage 3: the envelope really is from that identity and unmodified
  DidDocument doc;
  try {
    doc = manager_.resolve_document(msg.did_cid);
  } catch (const Error& e) {
    set_last_failure(std::string(errc_name(e.code())));
    return false;
  }
  if (msg.from_did != doc.id) {
    set_last_failure("sender-did-mismatch");
    return false;
  }
  if (!verify_signature(doc.public_key, sign_bytes(msg.topic, msg.content, msg.nonce_hash),
                        msg.signature)) {
    set_last_failure("message-signature-invalid");
    return false;
  }
  return true;
}

std::shared_ptr<VerifiedSubscription> PubsubAuthenticator::subscribe_verified(
    const std::string& topic) {
  return std::make_shared<VerifiedSubscription>(bus_.subscribe(topic), *this);
}

std::optional<AuthenticatedMessage> VerifiedSubscription::next(std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) return std::nullopt;
    auto payload = raw_->next(remaining);
    if (!payload) return std::nullopt;
    try {
      AuthenticatedMessage msg = message_from_json(to_string(*payload));
      if (authenticator_.verify_message(msg)) return msg;
      last_rejection_ = last_failure();
    } catch (const Error&) {
      last_rejection_ = "parse-error";
    }
    ++rejected_;
  }
}

}  // namespace diap
