// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "diap/did_document.hpp"
#include "helpers.hpp"

using namespace diap;
using test::counting_array;
using test::thrown_code;

namespace {

// Deterministic fixture: every input is a counting byte pattern, so an
// independent implementation can reproduce the exact document bytes.
KeyPair fixture_keypair() { return KeyPair::from_seed(counting_array(0x00)); }

PeerId fixture_peer_id() {
  auto a = counting_array(0x20);
  return PeerId{Bytes(a.begin(), a.end())};
}

std::array<uint8_t, 12> fixture_nonce() {
  std::array<uint8_t, 12> nonce{};
  for (size_t i = 0; i < nonce.size(); ++i) nonce[i] = static_cast<uint8_t>(0xA0 + i);
  return nonce;
}

constexpr int64_t kFixtureCreatedAt = 1700000000;

constexpr const char* kFixtureJson =
    R"({"createdAt":1700000000,"id":"did:key:z6MkehRgf7yJbgaGfYsdoAsKdBPE3dj2CYhowQdcjqSJgvVd",)"
    R"("publicKey":"FAe4sisG95oZ42w7buUn5qEE4TAnfTTFPiguZUHmhiF",)"
    R"("serviceEndpoint":{"ciphertext":"qCiwHl56bREy/9f9qzm4sbTFvwMwwgOrt9GqA9Z6tlUaHAk5EPmgyQc4SE75CCwL",)"
    R"("nonce":"oKGio6Slpqeoqaqr",)"
    R"("signature":"RDFL1omY6E9UTYK5NJ0MKoji6aSJbn+aMCHSl8IzgS9UQoKX6Q7PwHZ/Fg2h9fIpNrRNid6S7/Ta+HN4pKQqBQ=="},)"
    R"("zkpPublicKeyHash":"13394046005867679213142238973584784035310437057121088578559151249116996581015"})";

constexpr const char* kFixtureCid = "bafkreic2w4osocm4lkuvlrssdiiqft73yhue56fp5vc4tmjl57xbydiv6q";

DidDocument fixture_document() {
  KeyPair kp = fixture_keypair();
  EncryptedPeerEndpoint endpoint = encrypt_peer_id_with_nonce(kp, fixture_peer_id(), fixture_nonce());
  return build_document(kp, endpoint, kFixtureCreatedAt);
}

}  // namespace

TEST_CASE("fixture document serializes to frozen bytes") {
  DidDocument doc = fixture_document();
  std::string serialized = canonical_serialize(doc);
  CHECK(serialized == kFixtureJson);
  CHECK(serialized.size() == 475);
  CHECK(compute_cid(to_bytes(serialized)).text == kFixtureCid);
}

TEST_CASE("fixture document fields") {
  DidDocument doc = fixture_document();
  CHECK(doc.id.text == "did:key:z6MkehRgf7yJbgaGfYsdoAsKdBPE3dj2CYhowQdcjqSJgvVd");
  CHECK(to_hex(doc.public_key) == "03a107bff3ce10be1d70dd18e74bc09967e4d6309ba50d5f1ddc8664125531b8");
  CHECK(doc.created_at == kFixtureCreatedAt);
  CHECK(verify_endpoint_signature(doc.public_key, doc.service_endpoint));
  CHECK(decrypt_peer_id(fixture_keypair(), doc.service_endpoint) == fixture_peer_id());
}

TEST_CASE("parse round trips the canonical form") {
  DidDocument parsed = parse_document(kFixtureJson);
  CHECK(canonical_serialize(parsed) == kFixtureJson);
  CHECK(parsed.public_key == fixture_keypair().public_key);

  // whitespace and key order do not survive; output is always canonical
  std::string spaced = kFixtureJson;
  spaced.insert(1, " ");
  CHECK(canonical_serialize(parse_document(spaced)) == kFixtureJson);
}

TEST_CASE("self encryption") {
  KeyPair owner = KeyPair::generate();
  PeerId peer{random_bytes(32)};
  EncryptedPeerEndpoint endpoint = encrypt_peer_id(owner, peer);

  CHECK(endpoint.ciphertext.size() == peer.bytes.size() + 16);
  CHECK(decrypt_peer_id(owner, endpoint) == peer);
  CHECK(verify_endpoint_signature(owner.public_key, endpoint));

  SUBCASE("only the owner can decrypt") {
    KeyPair intruder = KeyPair::generate();
    CHECK(thrown_code([&] { decrypt_peer_id(intruder, endpoint); }) == Errc::decryption_failure);
  }
  SUBCASE("tampered ciphertext fails authentication") {
    EncryptedPeerEndpoint bad = endpoint;
    bad.ciphertext[0] ^= 0x01;
    CHECK(thrown_code([&] { decrypt_peer_id(owner, bad); }) == Errc::decryption_failure);
    CHECK_FALSE(verify_endpoint_signature(owner.public_key, bad));
  }
  SUBCASE("tampered tag fails authentication") {
    EncryptedPeerEndpoint bad = endpoint;
    bad.ciphertext.back() ^= 0x01;
    CHECK(thrown_code([&] { decrypt_peer_id(owner, bad); }) == Errc::decryption_failure);
  }
  SUBCASE("tampered aead nonce breaks both decryption and signature") {
    EncryptedPeerEndpoint bad = endpoint;
    bad.aead_nonce[3] ^= 0x01;
    CHECK(thrown_code([&] { decrypt_peer_id(owner, bad); }) == Errc::decryption_failure);
    CHECK_FALSE(verify_endpoint_signature(owner.public_key, bad));
  }
  SUBCASE("foreign signature is rejected") {
    EncryptedPeerEndpoint bad = endpoint;
    bad.signature.bytes[10] ^= 0x01;
    CHECK_FALSE(verify_endpoint_signature(owner.public_key, bad));
    CHECK_FALSE(verify_endpoint_signature(KeyPair::generate().public_key, endpoint));
  }

  SUBCASE("empty peer id round trips") {
    EncryptedPeerEndpoint e = encrypt_peer_id(owner, PeerId{});
    CHECK(e.ciphertext.size() == 16);  // tag only
    CHECK(decrypt_peer_id(owner, e) == PeerId{});
  }
}

TEST_CASE("document zkp hash commits to the circuit secret") {
  KeyPair kp = KeyPair::generate();
  DidDocument doc = build_document(kp, PeerId{random_bytes(8)}, 1);
  FieldPair sk = derive_secret_fields(kp);
  CHECK(doc.zkp_public_key_hash == hash_pair(sk[0], sk[1]));
}

TEST_CASE("parse rejects malformed documents") {
  CHECK(thrown_code([] { parse_document("{"); }) == Errc::parse_error);
  CHECK(thrown_code([] { parse_document("{}"); }) == Errc::parse_error);
  CHECK(thrown_code([] { parse_document("[1,2]"); }) == Errc::parse_error);

  auto mutate = [](std::string_view find, std::string_view replace) {
    std::string text = kFixtureJson;
    size_t pos = text.find(find);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, find.size(), replace);
    return text;
  };

  // id/publicKey cross check
  KeyPair other = KeyPair::generate();
  CHECK(thrown_code([&] {
          parse_document(mutate("FAe4sisG95oZ42w7buUn5qEE4TAnfTTFPiguZUHmhiF",
                                base58btc_encode(other.public_key)));
        }) == Errc::parse_error);
  // malformed did
  CHECK(thrown_code([&] { parse_document(mutate("did:key:z6MkehRgf7", "did:key:bogus1")); }) ==
        Errc::parse_error);
  // aead nonce of the wrong size
  CHECK(thrown_code([&] { parse_document(mutate("oKGio6Slpqeoqaqr", "oKGio6Slpqeo")); }) ==
        Errc::parse_error);
  // zkp hash not a canonical field element
  CHECK(thrown_code([&] {
          parse_document(mutate(
              "\"zkpPublicKeyHash\":\"13394046005867679213142238973584784035310437057121088578559151249116996581015\"",
              "\"zkpPublicKeyHash\":\"021\""));
        }) == Errc::parse_error);
  // created_at must be a number
  CHECK(thrown_code([&] { parse_document(mutate("1700000000,", "\"now\",")); }) == Errc::parse_error);
  // ciphertext too short to even hold the tag
  CHECK(thrown_code([&] {
          parse_document(mutate("qCiwHl56bREy/9f9qzm4sbTFvwMwwgOrt9GqA9Z6tlUaHAk5EPmgyQc4SE75CCwL",
                                base64_encode(Bytes(8, 0x21))));
        }) == Errc::parse_error);
}

TEST_CASE("registration stores and announces the document") {
  ContentStore store;
  IpnsRegistry registry;
  KeyPair kp = KeyPair::generate();
  PeerId peer{random_bytes(16)};

  RegisteredIdentity reg = register_identity(kp, peer, store, registry, 1234567);
  CHECK(reg.document.created_at == 1234567);
  CHECK(reg.document.id == derive_did_key(kp.public_key));
  CHECK(store.get(reg.cid) == to_bytes(canonical_serialize(reg.document)));
  CHECK(reg.record.sequence == 1);
  CHECK(registry.resolve(ipns_name_for(kp.public_key)) == reg.cid);

  // witness-side and store-side hash fields agree on the honest path
  CHECK(document_hash_fields(reg.document) == split_hash_to_fields(reg.cid.digest));

  // re-registration bumps the sequence and may move the pointer
  RegisteredIdentity second = register_identity(kp, peer, store, registry, 1234568);
  CHECK(second.record.sequence == 2);
  CHECK(registry.resolve(ipns_name_for(kp.public_key)) == second.cid);
  CHECK(second.cid != reg.cid);  // createdAt differs, so the bytes differ

  // default created_at is the current clock
  RegisteredIdentity dated = register_identity(KeyPair::generate(), peer, store, registry);
  CHECK(dated.document.created_at > 1700000000);
}
