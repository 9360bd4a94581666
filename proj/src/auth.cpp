// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/auth.hpp"

#include "diap/errors.hpp"

namespace diap {

AgentIdentity create_agent(ContentStore& store, IpnsRegistry& registry) {
  return create_agent(KeyPair::generate(), PeerId{random_bytes(32)}, store, registry);
}

AgentIdentity create_agent(const KeyPair& keypair, const PeerId& peer_id, ContentStore& store,
                           IpnsRegistry& registry, std::optional<int64_t> created_at) {
  RegisteredIdentity reg = register_identity(keypair, peer_id, store, registry, created_at);
  AgentIdentity agent;
  agent.keypair = keypair;
  agent.did = reg.document.id;
  agent.document = std::move(reg.document);
  agent.cid = reg.cid;
  agent.ipns_name = ipns_name_for(keypair.public_key);
  agent.peer_id = peer_id;
  return agent;
}

DidCache::DidCache(size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

std::optional<DidDocument> DidCache::get(const std::string& cid_text) {
  std::lock_guard lock(mutex_);
  auto it = index_.find(cid_text);
  if (it == index_.end()) return std::nullopt;
  order_.splice(order_.begin(), order_, it->second);  // refresh recency
  return it->second->second;
}

void DidCache::put(const std::string& cid_text, const DidDocument& document) {
  std::lock_guard lock(mutex_);
  auto it = index_.find(cid_text);
  if (it != index_.end()) {
    it->second->second = document;
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(cid_text, document);
  index_[cid_text] = order_.begin();
  if (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
}

size_t DidCache::size() const {
  std::lock_guard lock(mutex_);
  return order_.size();
}

std::string_view auth_state_name(AuthState s) {
  switch (s) {
    case AuthState::Init: return "init";
    case AuthState::ChallengeSent: return "challenge-sent";
    case AuthState::Verified: return "verified";
    case AuthState::Failed: return "failed";
  }
  return "init";
}

AuthManager::AuthManager(ContentStore& store, IpnsRegistry& registry, ProofBackend& backend,
                         size_t cache_capacity, int64_t challenge_ttl_seconds,
                         ChallengeTable::Clock clock)
    : store_(store),
      registry_(registry),
      backend_(backend),
      cache_(cache_capacity),
      challenges_(challenge_ttl_seconds, std::move(clock)) {}

DidDocument AuthManager::resolve_document(const Cid& cid) {
  if (auto cached = cache_.get(cid.text)) return *cached;
  Bytes raw = store_.get(cid);
  ++store_fetches_;
  DidDocument doc = parse_document(to_string(raw));
  cache_.put(cid.text, doc);
  return doc;
}

DidDocument AuthManager::resolve_by_name(const std::string& ipns_name) {
  return resolve_document(registry_.resolve(ipns_name));
}

NonceChallenge AuthManager::issue_challenge() { return challenges_.issue(); }

Proof AuthManager::prove_ownership(const AgentIdentity& identity, const NonceChallenge& challenge) {
  CircuitPublicInputs publics{
      .expected_did_hash = split_hash_to_fields(identity.cid.digest),
      .public_key_hash = identity.document.zkp_public_key_hash,
      .nonce_hash = challenge.nonce_hash,
  };
  CircuitWitness witness{
      .secret_key = derive_secret_fields(identity.keypair),
      .did_document_hash = document_hash_fields(identity.document),
      .nonce = challenge.nonce,
  };
  return backend_.prove(witness, publics);
}

bool AuthManager::verify_ownership(const Cid& cid, const Proof& proof) {
  ConsumeStatus status = challenges_.check_and_consume(proof.public_inputs.nonce_hash);
  if (status != ConsumeStatus::Ok) {
    set_last_failure(std::string(consume_status_name(status)));
    return false;
  }
  return verify_ownership_with_nonce_hash(cid, proof, proof.public_inputs.nonce_hash);
}

bool AuthManager::verify_ownership_with_nonce_hash(const Cid& cid, const Proof& proof,
                                                   const FieldElement& nonce_hash) {
  DidDocument doc;
  try {
    doc = resolve_document(cid);
  } catch (const Error& e) {
    set_last_failure(std::string(errc_name(e.code())));
    return false;
  }
  CircuitPublicInputs expected{
      .expected_did_hash = split_hash_to_fields(cid.digest),
      .public_key_hash = doc.zkp_public_key_hash,
      .nonce_hash = nonce_hash,
  };
  return verify_proof(proof, expected, backend_);
}

namespace {

// one direction of the handshake: verifier challenges, prover answers
AuthSession run_direction(AuthManager& verifier_mgr, const AgentIdentity& verifier,
                          AuthManager& prover_mgr, const AgentIdentity& prover) {
  AuthSession session;
  session.verifier_did = verifier.did;
  session.prover_did = prover.did;

  NonceChallenge challenge = verifier_mgr.issue_challenge();
  session.state = AuthState::ChallengeSent;

  Proof proof;
  try {
    proof = prover_mgr.prove_ownership(prover, challenge);
  } catch (const ConstraintViolation&) {
    session.state = AuthState::Failed;
    session.failure = "constraint-violation";
    return session;
  }

  if (verifier_mgr.verify_ownership(prover.cid, proof)) {
    session.state = AuthState::Verified;
  } else {
    session.state = AuthState::Failed;
    session.failure = last_failure();
  }
  return session;
}

}  // namespace

MutualAuthResult mutual_authenticate(AuthManager& initiator_mgr, const AgentIdentity& initiator,
                                     AuthManager& responder_mgr, const AgentIdentity& responder) {
  MutualAuthResult result;
  result.initiated = run_direction(initiator_mgr, initiator, responder_mgr, responder);
  result.reciprocal = run_direction(responder_mgr, responder, initiator_mgr, initiator);
  result.ok = result.initiated.state == AuthState::Verified &&
              result.reciprocal.state == AuthState::Verified;
  return result;
}

}  // namespace diap
