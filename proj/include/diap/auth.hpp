// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <list>
#include <optional>
#include <string>
#include <unordered_map>

#include "diap/did_document.hpp"
#include "diap/nonce.hpp"

namespace diap {

/// Everything an agent holds locally: keys, the registered document, and the
/// addresses other parties use to find it. Plain data so tests and demos can
/// construct inconsistent ones on purpose.
struct AgentIdentity {
  KeyPair keypair;
  DidKey did;
  DidDocument document;
  Cid cid;
  std::string ipns_name;
  PeerId peer_id;
};

AgentIdentity create_agent(ContentStore& store, IpnsRegistry& registry);
AgentIdentity create_agent(const KeyPair& keypair, const PeerId& peer_id, ContentStore& store,
                           IpnsRegistry& registry, std::optional<int64_t> created_at = std::nullopt);

/// LRU map from CID text to parsed document. No TTL: a CID is immutable, so
/// a cached entry can never go stale, only cold.
class DidCache {
public:
  explicit DidCache(size_t capacity = 1024);

  std::optional<DidDocument> get(const std::string& cid_text);
  void put(const std::string& cid_text, const DidDocument& document);
  size_t size() const;

private:
  using Entry = std::pair<std::string, DidDocument>;

  size_t capacity_;
  mutable std::mutex mutex_;
  std::list<Entry> order_;  // most recently used first
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

enum class AuthState { Init, ChallengeSent, Verified, Failed };

std::string_view auth_state_name(AuthState s);

struct AuthSession {
  AuthState state = AuthState::Init;
  DidKey verifier_did;
  DidKey prover_did;
  std::string failure;  // diagnostic when state == Failed
};

/// Challenge-response authentication over content-addressed identities.
///
/// The verifier resolves the claimed CID to a document (through the cache),
/// derives the public inputs it is willing to accept, and checks the proof
/// against them after consuming the challenge nonce exactly once.
class AuthManager {
public:
  AuthManager(ContentStore& store, IpnsRegistry& registry, ProofBackend& backend,
              size_t cache_capacity = 1024, int64_t challenge_ttl_seconds = 300,
              ChallengeTable::Clock clock = {});

  /// Cache-first document lookup; a miss reads and parses store bytes.
  DidDocument resolve_document(const Cid& cid);  // throws not-found / integrity-violation / parse-error

  /// IPNS name -> current document, via resolve_document.
  DidDocument resolve_by_name(const std::string& ipns_name);

  NonceChallenge issue_challenge();

  /// Prover side: witness from the held document and keypair, publics from
  /// the registered CID and the verifier's challenge.
  Proof prove_ownership(const AgentIdentity& identity,
                        const NonceChallenge& challenge);  // throws ConstraintViolation

  /// Verifier side, total. Consumes the proof's nonce (single use), then
  /// checks the proof against the document behind cid. Diagnostics through
  /// last_failure.
  bool verify_ownership(const Cid& cid, const Proof& proof);

  /// Same checks minus nonce consumption, for callers that already consumed
  /// the nonce in an outer protocol step.
  bool verify_ownership_with_nonce_hash(const Cid& cid, const Proof& proof,
                                        const FieldElement& nonce_hash);

  ChallengeTable& challenges() { return challenges_; }
  ProofBackend& backend() { return backend_; }

  /// Number of backing-store reads so far; stable across cache hits.
  size_t store_fetches() const { return store_fetches_.load(); }

private:
  ContentStore& store_;
  IpnsRegistry& registry_;
  ProofBackend& backend_;
  DidCache cache_;
  ChallengeTable challenges_;
  std::atomic<size_t> store_fetches_{0};
};

struct MutualAuthResult {
  AuthSession initiated;  // initiator verifying responder
  AuthSession reciprocal; // responder verifying initiator
  bool ok = false;        // both directions Verified
};

/// Runs the challenge-response handshake in both directions.
MutualAuthResult mutual_authenticate(AuthManager& initiator_mgr, const AgentIdentity& initiator,
                                     AuthManager& responder_mgr, const AgentIdentity& responder);

}  // namespace diap
