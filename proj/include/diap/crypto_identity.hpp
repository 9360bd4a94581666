// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>

#include "diap/bytes.hpp"

namespace diap {

using Seed = std::array<uint8_t, 32>;
using PublicKey = std::array<uint8_t, 32>;
using SymmetricKey = std::array<uint8_t, 32>;

/// Ed25519 keypair. The seed is the 32-byte private seed; it never appears in
/// any document, message, or proof produced by this library.
struct KeyPair {
  Seed seed{};
  PublicKey public_key{};

  static KeyPair generate();
  static KeyPair from_seed(const Seed& seed);
};

struct Signature {
  std::array<uint8_t, 64> bytes{};
  friend bool operator==(const Signature& a, const Signature& b) { return a.bytes == b.bytes; }
};

/// A did:key identifier: "did:key:z6Mk..." for ed25519 keys.
struct DidKey {
  std::string text;
  friend bool operator==(const DidKey& a, const DidKey& b) { return a.text == b.text; }
};

/// "did:key:" + base58btc multibase of the two-byte ed25519 multicodec prefix
/// (0xed 0x01) followed by the 32 public-key bytes.
DidKey derive_did_key(ByteSpan public_key);  // throws invalid-key on wrong length

/// Recovers the 32 public-key bytes; rejects anything that is not a
/// well-formed ed25519 did:key.
PublicKey decode_did_key(const DidKey& did);  // throws invalid-key

Signature sign(const KeyPair& keypair, ByteSpan message);

/// Total: returns false on malformed or mismatched signatures, never throws.
bool verify_signature(const PublicKey& public_key, ByteSpan message, const Signature& sig);

/// SHA-256(seed || salt). Deterministic; used to derive the AES-256 key that
/// self-encrypts the peer endpoint.
SymmetricKey derive_symmetric_key(const KeyPair& keypair, ByteSpan salt);  // throws invalid-salt

/// Salt under which peer endpoints are encrypted.
inline constexpr std::string_view kAesKeySalt = "DIAP_AES_KEY_V3";

}  // namespace diap
