// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "diap/auth.hpp"
#include "diap/errors.hpp"
#include "helpers.hpp"

using namespace diap;

namespace {

struct World {
  ContentStore store;
  IpnsRegistry registry;
  EmbeddedBackend backend;
  int64_t now = 1000000;

  AuthManager manager(size_t cache_capacity = 1024) {
    return AuthManager(store, registry, backend, cache_capacity, 300, [this] { return now; });
  }
};

}  // namespace

TEST_CASE("agent creation wires every identity field together") {
  World w;
  AgentIdentity agent = create_agent(w.store, w.registry);
  CHECK(agent.did == derive_did_key(agent.keypair.public_key));
  CHECK(agent.document.id == agent.did);
  CHECK(agent.ipns_name == ipns_name_for(agent.keypair.public_key));
  CHECK(w.registry.resolve(agent.ipns_name) == agent.cid);
  CHECK(w.store.get(agent.cid) == to_bytes(canonical_serialize(agent.document)));
  CHECK(decrypt_peer_id(agent.keypair, agent.document.service_endpoint) == agent.peer_id);
}

TEST_CASE("challenge response round trip") {
  World w;
  AuthManager verifier = w.manager();
  AuthManager prover = w.manager();
  AgentIdentity agent = create_agent(w.store, w.registry);

  NonceChallenge challenge = verifier.issue_challenge();
  Proof proof = prover.prove_ownership(agent, challenge);
  CHECK(verifier.verify_ownership(agent.cid, proof));

  SUBCASE("the same proof cannot be consumed twice") {
    CHECK_FALSE(verifier.verify_ownership(agent.cid, proof));
    CHECK(last_failure() == "nonce-consumed");
  }
  SUBCASE("a proof for a foreign challenge is unknown here") {
    AuthManager stranger = w.manager();
    CHECK_FALSE(stranger.verify_ownership(agent.cid, proof));
    CHECK(last_failure() == "nonce-unknown");
  }
}

TEST_CASE("challenges expire") {
  World w;
  AuthManager verifier = w.manager();
  AuthManager prover = w.manager();
  AgentIdentity agent = create_agent(w.store, w.registry);

  NonceChallenge challenge = verifier.issue_challenge();
  Proof proof = prover.prove_ownership(agent, challenge);

  w.now += 300;  // at the limit: still fine
  CHECK(verifier.verify_ownership(agent.cid, proof));

  NonceChallenge late = verifier.issue_challenge();
  Proof late_proof = prover.prove_ownership(agent, late);
  w.now += 301;
  CHECK_FALSE(verifier.verify_ownership(agent.cid, late_proof));
  CHECK(last_failure() == "nonce-expired");
}

TEST_CASE("proving requires a consistent identity") {
  World w;
  AuthManager manager = w.manager();
  AgentIdentity honest = create_agent(w.store, w.registry);
  AgentIdentity other = create_agent(w.store, w.registry);

  SUBCASE("document swapped under the same cid fails the document binding") {
    AgentIdentity crossed = honest;
    crossed.document = other.document;  // holds a different document than the cid commits to
    try {
      manager.prove_ownership(crossed, manager.issue_challenge());
      FAIL("expected a constraint violation");
    } catch (const ConstraintViolation& e) {
      CHECK(e.index() == 1);
    }
  }
  SUBCASE("foreign keypair fails the secret binding") {
    AgentIdentity stolen = other;
    stolen.keypair = honest.keypair;  // right document, wrong secret
    try {
      manager.prove_ownership(stolen, manager.issue_challenge());
      FAIL("expected a constraint violation");
    } catch (const ConstraintViolation& e) {
      CHECK(e.index() == 2);
    }
  }
  SUBCASE("answering a different nonce than challenged fails the nonce binding") {
    NonceChallenge challenge = manager.issue_challenge();
    challenge.nonce[0] = challenge.nonce[0] + FieldElement(1);
    try {
      manager.prove_ownership(honest, challenge);
      FAIL("expected a constraint violation");
    } catch (const ConstraintViolation& e) {
      CHECK(e.index() == 3);
    }
  }
}

TEST_CASE("verification rejects a proof bound to a different identity") {
  World w;
  AuthManager verifier = w.manager();
  AuthManager prover = w.manager();
  AgentIdentity honest = create_agent(w.store, w.registry);
  AgentIdentity other = create_agent(w.store, w.registry);

  Proof proof = prover.prove_ownership(honest, verifier.issue_challenge());
  CHECK_FALSE(verifier.verify_ownership(other.cid, proof));
  CHECK(last_failure() == "expected-did-hash-mismatch");
}

TEST_CASE("verification detects tampered proofs and corrupt storage") {
  World w;
  AuthManager verifier = w.manager();
  AuthManager prover = w.manager();
  AgentIdentity agent = create_agent(w.store, w.registry);

  SUBCASE("tampered binding value") {
    Proof proof = prover.prove_ownership(agent, verifier.issue_challenge());
    proof.binding_proof = proof.binding_proof + FieldElement(1);
    CHECK_FALSE(verifier.verify_ownership(agent.cid, proof));
    CHECK(last_failure() == "proof-tag-mismatch");
  }
  SUBCASE("corrupted store record") {
    Proof proof = prover.prove_ownership(agent, verifier.issue_challenge());
    REQUIRE(w.store.tamper(agent.cid, 10));
    CHECK_FALSE(verifier.verify_ownership(agent.cid, proof));
    CHECK(last_failure() == "integrity-violation");
  }
  SUBCASE("record missing from the store") {
    Proof proof = prover.prove_ownership(agent, verifier.issue_challenge());
    Cid absent = compute_cid(to_bytes("no such document"));
    CHECK_FALSE(verifier.verify_ownership(absent, proof));
    CHECK(last_failure() == "not-found");
  }
}

TEST_CASE("document resolution caches by cid") {
  World w;
  AuthManager manager = w.manager();
  AgentIdentity agent = create_agent(w.store, w.registry);

  CHECK(manager.store_fetches() == 0);
  DidDocument first = manager.resolve_document(agent.cid);
  CHECK(manager.store_fetches() == 1);
  DidDocument again = manager.resolve_document(agent.cid);
  CHECK(manager.store_fetches() == 1);  // cache hit
  CHECK(canonical_serialize(first) == canonical_serialize(again));

  // a tampered record behind a cached cid stays invisible until eviction,
  // which is safe precisely because cids are immutable
  REQUIRE(w.store.tamper(agent.cid, 4));
  CHECK(canonical_serialize(manager.resolve_document(agent.cid)) == canonical_serialize(first));
}

TEST_CASE("cache evicts least recently used") {
  World w;
  AuthManager manager = w.manager(2);
  AgentIdentity a = create_agent(w.store, w.registry);
  AgentIdentity b = create_agent(w.store, w.registry);
  AgentIdentity c = create_agent(w.store, w.registry);

  manager.resolve_document(a.cid);
  manager.resolve_document(b.cid);
  manager.resolve_document(a.cid);  // refresh a; b is now the oldest
  manager.resolve_document(c.cid);  // evicts b
  CHECK(manager.store_fetches() == 3);
  manager.resolve_document(b.cid);
  CHECK(manager.store_fetches() == 4);  // b was evicted
  manager.resolve_document(a.cid);
  CHECK(manager.store_fetches() == 5);  // a fell out when b came back
}

TEST_CASE("ipns resolution feeds the document cache") {
  World w;
  AuthManager manager = w.manager();
  AgentIdentity agent = create_agent(w.store, w.registry);

  DidDocument doc = manager.resolve_by_name(agent.ipns_name);
  CHECK(doc.id == agent.did);
  CHECK(test::thrown_code([&] { manager.resolve_by_name("ipns:unpublished"); }) == Errc::not_found);
}

TEST_CASE("mutual authentication") {
  World w;
  AuthManager alice_mgr = w.manager();
  AuthManager bob_mgr = w.manager();
  AgentIdentity alice = create_agent(w.store, w.registry);
  AgentIdentity bob = create_agent(w.store, w.registry);

  SUBCASE("both directions verify for honest parties") {
    MutualAuthResult result = mutual_authenticate(alice_mgr, alice, bob_mgr, bob);
    CHECK(result.ok);
    CHECK(result.initiated.state == AuthState::Verified);
    CHECK(result.reciprocal.state == AuthState::Verified);
    CHECK(result.initiated.verifier_did == alice.did);
    CHECK(result.initiated.prover_did == bob.did);
    CHECK(result.reciprocal.verifier_did == bob.did);
  }
  SUBCASE("an impersonator fails its proving direction only") {
    AgentIdentity mallory = bob;
    mallory.keypair = KeyPair::generate();  // claims bob's identity without his key
    MutualAuthResult result = mutual_authenticate(alice_mgr, alice, bob_mgr, mallory);
    CHECK_FALSE(result.ok);
    CHECK(result.initiated.state == AuthState::Failed);
    CHECK(result.initiated.failure == "constraint-violation");
    CHECK(result.reciprocal.state == AuthState::Verified);  // alice still proves fine
  }
  SUBCASE("state names for reporting") {
    CHECK(auth_state_name(AuthState::Init) == "init");
    CHECK(auth_state_name(AuthState::ChallengeSent) == "challenge-sent");
    CHECK(auth_state_name(AuthState::Verified) == "verified");
    CHECK(auth_state_name(AuthState::Failed) == "failed");
  }
}
