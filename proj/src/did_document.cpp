// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/did_document.hpp"

#include <chrono>
#include <memory>

#include <json.hpp>
#include <openssl/evp.h>

#include "diap/errors.hpp"

namespace diap {

using nlohmann::json;

namespace {

constexpr size_t kGcmTagLength = 16;

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

CipherCtx make_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw Error(Errc::io_error, "EVP_CIPHER_CTX_new failed");
  return ctx;
}

Bytes gcm_encrypt(const SymmetricKey& key, const std::array<uint8_t, 12>& nonce, ByteSpan plain) {
  CipherCtx ctx = make_ctx();
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
    throw Error(Errc::io_error, "gcm init failed");
  }
  Bytes out(plain.size() + kGcmTagLength);
  int len = 0;
  if (EVP_EncryptUpdate(ctx.get(), out.data(), &len, plain.data(), static_cast<int>(plain.size())) != 1) {
    throw Error(Errc::io_error, "gcm update failed");
  }
  int total = len;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len) != 1) {
    throw Error(Errc::io_error, "gcm final failed");
  }
  total += len;
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kGcmTagLength, out.data() + total) != 1) {
    throw Error(Errc::io_error, "gcm tag extraction failed");
  }
  out.resize(static_cast<size_t>(total) + kGcmTagLength);
  return out;
}

Bytes gcm_decrypt(const SymmetricKey& key, const std::array<uint8_t, 12>& nonce, ByteSpan sealed) {
  if (sealed.size() < kGcmTagLength) {
    throw Error(Errc::decryption_failure, "ciphertext shorter than the auth tag");
  }
  size_t body_len = sealed.size() - kGcmTagLength;
  CipherCtx ctx = make_ctx();
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
    throw Error(Errc::io_error, "gcm init failed");
  }
  Bytes out(body_len);
  int len = 0;
  if (body_len > 0 &&
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), static_cast<int>(body_len)) != 1) {
    throw Error(Errc::decryption_failure, "gcm update failed");
  }
  int total = len;
  // set the expected tag, then Final performs the authenticity check
  Bytes tag(sealed.begin() + static_cast<ptrdiff_t>(body_len), sealed.end());
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kGcmTagLength, tag.data()) != 1) {
    throw Error(Errc::io_error, "gcm tag set failed");
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + total, &len) != 1) {
    throw Error(Errc::decryption_failure, "authentication tag mismatch");
  }
  out.resize(static_cast<size_t>(total) + static_cast<size_t>(len));
  return out;
}

Bytes endpoint_signed_bytes(const EncryptedPeerEndpoint& endpoint) {
  Bytes msg = endpoint.ciphertext;
  msg.insert(msg.end(), endpoint.aead_nonce.begin(), endpoint.aead_nonce.end());
  return msg;
}

int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

EncryptedPeerEndpoint encrypt_peer_id_with_nonce(const KeyPair& keypair, const PeerId& peer_id,
                                                 const std::array<uint8_t, 12>& aead_nonce) {
  SymmetricKey key = derive_symmetric_key(keypair, to_bytes(kAesKeySalt));
  EncryptedPeerEndpoint endpoint;
  endpoint.aead_nonce = aead_nonce;
  endpoint.ciphertext = gcm_encrypt(key, aead_nonce, peer_id.bytes);
  endpoint.signature = sign(keypair, endpoint_signed_bytes(endpoint));
  return endpoint;
}

EncryptedPeerEndpoint encrypt_peer_id(const KeyPair& keypair, const PeerId& peer_id) {
  Bytes nonce = random_bytes(12);
  std::array<uint8_t, 12> aead_nonce{};
  std::copy(nonce.begin(), nonce.end(), aead_nonce.begin());
  return encrypt_peer_id_with_nonce(keypair, peer_id, aead_nonce);
}

PeerId decrypt_peer_id(const KeyPair& keypair, const EncryptedPeerEndpoint& endpoint) {
  SymmetricKey key = derive_symmetric_key(keypair, to_bytes(kAesKeySalt));
  return PeerId{gcm_decrypt(key, endpoint.aead_nonce, endpoint.ciphertext)};
}

bool verify_endpoint_signature(const PublicKey& public_key, const EncryptedPeerEndpoint& endpoint) {
  return verify_signature(public_key, endpoint_signed_bytes(endpoint), endpoint.signature);
}

DidDocument build_document(const KeyPair& keypair, const EncryptedPeerEndpoint& endpoint,
                           int64_t created_at) {
  DidDocument doc;
  doc.id = derive_did_key(keypair.public_key);
  doc.public_key = keypair.public_key;
  FieldPair sk = derive_secret_fields(keypair);
  doc.zkp_public_key_hash = hash_pair(sk[0], sk[1]);
  doc.service_endpoint = endpoint;
  doc.created_at = created_at;
  return doc;
}

DidDocument build_document(const KeyPair& keypair, const PeerId& peer_id, int64_t created_at) {
  return build_document(keypair, encrypt_peer_id(keypair, peer_id), created_at);
}

std::string canonical_serialize(const DidDocument& doc) {
  json j{
      {"createdAt", doc.created_at},
      {"id", doc.id.text},
      {"publicKey", base58btc_encode(doc.public_key)},
      {"serviceEndpoint",
       {{"ciphertext", base64_encode(doc.service_endpoint.ciphertext)},
        {"nonce", base64_encode(doc.service_endpoint.aead_nonce)},
        {"signature", base64_encode(doc.service_endpoint.signature.bytes)}}},
      {"zkpPublicKeyHash", doc.zkp_public_key_hash.to_decimal()},
  };
  return j.dump();
}

DidDocument parse_document(std::string_view text) {
  try {
    json j = json::parse(text);
    DidDocument doc;
    doc.created_at = j.at("createdAt").get<int64_t>();
    doc.id = DidKey{j.at("id").get<std::string>()};

    Bytes pk = base58btc_decode(j.at("publicKey").get<std::string>());
    if (pk.size() != doc.public_key.size()) throw Error(Errc::parse_error, "bad publicKey length");
    std::copy(pk.begin(), pk.end(), doc.public_key.begin());
    if (decode_did_key(doc.id) != doc.public_key) {
      throw Error(Errc::parse_error, "id does not match publicKey");
    }

    doc.zkp_public_key_hash = FieldElement::from_decimal(j.at("zkpPublicKeyHash").get<std::string>());

    const json& se = j.at("serviceEndpoint");
    doc.service_endpoint.ciphertext = base64_decode(se.at("ciphertext").get<std::string>());
    if (doc.service_endpoint.ciphertext.size() < kGcmTagLength) {
      throw Error(Errc::parse_error, "ciphertext shorter than the auth tag");
    }
    Bytes nonce = base64_decode(se.at("nonce").get<std::string>());
    if (nonce.size() != doc.service_endpoint.aead_nonce.size()) {
      throw Error(Errc::parse_error, "bad aead nonce length");
    }
    std::copy(nonce.begin(), nonce.end(), doc.service_endpoint.aead_nonce.begin());
    Bytes sig = base64_decode(se.at("signature").get<std::string>());
    if (sig.size() != doc.service_endpoint.signature.bytes.size()) {
      throw Error(Errc::parse_error, "bad signature length");
    }
    std::copy(sig.begin(), sig.end(), doc.service_endpoint.signature.bytes.begin());
    return doc;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad document: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error) throw;
    throw Error(Errc::parse_error, std::string("bad document: ") + e.what());
  }
}

FieldPair document_hash_fields(const DidDocument& doc) {
  return split_hash_to_fields(sha256(to_bytes(canonical_serialize(doc))));
}

RegisteredIdentity register_identity(const KeyPair& keypair, const PeerId& peer_id,
                                     ContentStore& store, IpnsRegistry& registry,
                                     std::optional<int64_t> created_at) {
  RegisteredIdentity out;
  out.document = build_document(keypair, peer_id, created_at.value_or(unix_now()));
  out.cid = store.put(to_bytes(canonical_serialize(out.document)));
  std::string name = ipns_name_for(keypair.public_key);
  out.record = registry.publish(keypair, out.cid, registry.current_sequence(name) + 1);
  return out;
}

}  // namespace diap
