// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/crypto_identity.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <memory>

#include "diap/errors.hpp"

namespace diap {
namespace {

using EvpPkey = std::unique_ptr<EVP_PKEY, decltype(&EVP_PKEY_free)>;
using EvpMdCtx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

EvpPkey private_key_from_seed(const Seed& seed) {
  EVP_PKEY* raw =
      EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size());
  if (raw == nullptr) throw Error(Errc::invalid_key, "ed25519 private key construction failed");
  return EvpPkey(raw, EVP_PKEY_free);
}

EvpPkey public_key_from_bytes(const PublicKey& pk) {
  EVP_PKEY* raw = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pk.data(), pk.size());
  if (raw == nullptr) throw Error(Errc::invalid_key, "ed25519 public key construction failed");
  return EvpPkey(raw, EVP_PKEY_free);
}

constexpr std::string_view kDidKeyPrefix = "did:key:";
// varint multicodec code 0xed for ed25519-pub
constexpr uint8_t kEd25519Multicodec[2] = {0xed, 0x01};

}  // namespace

KeyPair KeyPair::generate() {
  Seed seed{};
  if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
    throw Error(Errc::randomness_unavailable, "RAND_bytes failed");
  }
  return from_seed(seed);
}

KeyPair KeyPair::from_seed(const Seed& seed) {
  KeyPair kp;
  kp.seed = seed;
  EvpPkey pkey = private_key_from_seed(seed);
  size_t len = kp.public_key.size();
  if (EVP_PKEY_get_raw_public_key(pkey.get(), kp.public_key.data(), &len) != 1 ||
      len != kp.public_key.size()) {
    throw Error(Errc::invalid_key, "ed25519 public key derivation failed");
  }
  return kp;
}

DidKey derive_did_key(ByteSpan public_key) {
  if (public_key.size() != 32) throw Error(Errc::invalid_key, "public key must be 32 bytes");
  Bytes payload;
  payload.reserve(34);
  payload.push_back(kEd25519Multicodec[0]);
  payload.push_back(kEd25519Multicodec[1]);
  payload.insert(payload.end(), public_key.begin(), public_key.end());
  return DidKey{std::string(kDidKeyPrefix) + "z" + base58btc_encode(payload)};
}

PublicKey decode_did_key(const DidKey& did) {
  std::string_view text = did.text;
  if (!text.starts_with(kDidKeyPrefix)) throw Error(Errc::invalid_key, "missing did:key prefix");
  text.remove_prefix(kDidKeyPrefix.size());
  if (text.empty() || text[0] != 'z') throw Error(Errc::invalid_key, "unsupported multibase");
  text.remove_prefix(1);
  Bytes payload;
  try {
    payload = base58btc_decode(text);
  } catch (const Error&) {
    throw Error(Errc::invalid_key, "invalid base58 payload");
  }
  if (payload.size() != 34 || payload[0] != kEd25519Multicodec[0] ||
      payload[1] != kEd25519Multicodec[1]) {
    throw Error(Errc::invalid_key, "not an ed25519 did:key payload");
  }
  PublicKey pk{};
  std::copy(payload.begin() + 2, payload.end(), pk.begin());
  return pk;
}

Signature sign(const KeyPair& keypair, ByteSpan message) {
  EvpPkey pkey = private_key_from_seed(keypair.seed);
  EvpMdCtx ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
    throw Error(Errc::io_error, "ed25519 sign init failed");
  }
  Signature sig;
  size_t len = sig.bytes.size();
  if (EVP_DigestSign(ctx.get(), sig.bytes.data(), &len, message.data(), message.size()) != 1 ||
      len != sig.bytes.size()) {
    throw Error(Errc::io_error, "ed25519 sign failed");
  }
  return sig;
}

bool verify_signature(const PublicKey& public_key, ByteSpan message, const Signature& sig) {
  try {
    EvpPkey pkey = public_key_from_bytes(public_key);
    EvpMdCtx ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
      return false;
    }
    return EVP_DigestVerify(ctx.get(), sig.bytes.data(), sig.bytes.size(), message.data(),
                            message.size()) == 1;
  } catch (const Error&) {
    return false;
  }
}

SymmetricKey derive_symmetric_key(const KeyPair& keypair, ByteSpan salt) {
  if (salt.empty()) throw Error(Errc::invalid_salt, "salt must be non-empty");
  Bytes material(keypair.seed.begin(), keypair.seed.end());
  material.insert(material.end(), salt.begin(), salt.end());
  return sha256(material);
}

}  // namespace diap
