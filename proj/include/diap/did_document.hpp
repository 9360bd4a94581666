// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "diap/cid.hpp"
#include "diap/content_store.hpp"
#include "diap/crypto_identity.hpp"
#include "diap/field.hpp"
#include "diap/zkp.hpp"

namespace diap {

/// Opaque transport-level peer identifier. Only its owner can read it back
/// out of a published document.
struct PeerId {
  Bytes bytes;
  friend bool operator==(const PeerId& a, const PeerId& b) { return a.bytes == b.bytes; }
  friend bool operator!=(const PeerId& a, const PeerId& b) { return !(a == b); }
};

/// Self-encrypted peer endpoint. The AES-256-GCM key is derived from the
/// owner's seed, so the owner is the only party able to decrypt; everyone
/// else can still verify provenance through the signature, which covers
/// ciphertext || aead_nonce.
struct EncryptedPeerEndpoint {
  Bytes ciphertext;  // AES-256-GCM output: ciphertext || 16-byte auth tag
  std::array<uint8_t, 12> aead_nonce{};
  Signature signature;
};

struct DidDocument {
  DidKey id;
  PublicKey public_key{};
  FieldElement zkp_public_key_hash;
  EncryptedPeerEndpoint service_endpoint;
  int64_t created_at = 0;
};

EncryptedPeerEndpoint encrypt_peer_id(const KeyPair& keypair, const PeerId& peer_id);

/// Deterministic variant for fixtures; production callers use the random one.
EncryptedPeerEndpoint encrypt_peer_id_with_nonce(const KeyPair& keypair, const PeerId& peer_id,
                                                 const std::array<uint8_t, 12>& aead_nonce);

PeerId decrypt_peer_id(const KeyPair& keypair,
                       const EncryptedPeerEndpoint& endpoint);  // throws decryption-failure

/// Total: true iff the signature over ciphertext || aead_nonce verifies under
/// public_key.
bool verify_endpoint_signature(const PublicKey& public_key, const EncryptedPeerEndpoint& endpoint);

DidDocument build_document(const KeyPair& keypair, const EncryptedPeerEndpoint& endpoint,
                           int64_t created_at);
DidDocument build_document(const KeyPair& keypair, const PeerId& peer_id, int64_t created_at);

/// Sorted-key compact JSON. Byte-for-byte stable across processes; the CID of
/// a document is the CID of exactly these bytes.
std::string canonical_serialize(const DidDocument& document);

/// Strict parse: every field present and well formed, and the id must be the
/// did:key of the embedded public key.
DidDocument parse_document(std::string_view json_text);  // throws parse-error

/// Split SHA-256 of the canonical serialization: the witness-side document
/// hash, equal to the split CID digest for a faithfully stored document.
FieldPair document_hash_fields(const DidDocument& document);

struct RegisteredIdentity {
  DidDocument document;
  Cid cid;
  IpnsRecord record;
};

/// Builds, stores, and announces a document: canonical bytes into the content
/// store, then an IPNS record pointing at the resulting CID with the next
/// sequence number. created_at defaults to the current unix time.
RegisteredIdentity register_identity(const KeyPair& keypair, const PeerId& peer_id,
                                     ContentStore& store, IpnsRegistry& registry,
                                     std::optional<int64_t> created_at = std::nullopt);

}  // namespace diap
