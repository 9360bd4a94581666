// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "diap/cid.hpp"
#include "diap/crypto_identity.hpp"

namespace diap {

/// Content-addressed blob store. Contents are retrievable only by CID, and
/// every read re-hashes the returned bytes so a corrupted backend is detected
/// rather than trusted.
///
/// With a directory configured, blobs persist as one file per record named by
/// the hex digest; otherwise everything lives in memory.
class ContentStore {
public:
  ContentStore() = default;
  explicit ContentStore(std::filesystem::path dir);  // throws store-error

  Cid put(ByteSpan content);          // throws store-error on I/O failure
  Bytes get(const Cid& cid) const;    // throws not-found / integrity-violation
  bool contains(const Cid& cid) const;

  /// Test/demo hook: flips one byte of the stored record in place. Returns
  /// false if the record does not exist or the index is out of range.
  bool tamper(const Cid& cid, size_t byte_index);

  size_t record_count() const;

private:
  std::optional<Bytes> read_raw(const Digest32& digest) const;

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mutex_;
  std::map<std::string, Bytes> blobs_;  // hex digest -> content (memory mode)
};

/// Signed, sequence-numbered mutable pointer from a key-derived name to the
/// latest CID. Names have the form "ipns:z6Mk..." and embed the publisher's
/// public key, so resolution re-verifies the record signature with no lookup.
struct IpnsRecord {
  std::string name;
  Cid value;
  uint64_t sequence = 0;
  Signature signature;

  /// Signed bytes: length-prefixed name, CID text, and decimal sequence.
  Bytes signing_bytes() const;
};

std::string ipns_name_for(const PublicKey& public_key);
PublicKey ipns_name_to_public_key(const std::string& name);  // throws invalid-key

class IpnsRegistry {
public:
  IpnsRegistry() = default;
  explicit IpnsRegistry(std::filesystem::path dir);  // throws store-error

  /// Signs and stores a record for the publisher-derived name. The sequence
  /// must be strictly greater than the last accepted one for that name.
  IpnsRecord publish(const KeyPair& publisher, const Cid& cid, uint64_t sequence);

  /// Accepts an externally produced record after verifying its signature and
  /// sequence monotonicity.
  void ingest(const IpnsRecord& record);  // throws record-signature-invalid / stale-sequence

  Cid resolve(const std::string& name) const;  // throws not-found / record-signature-invalid
  uint64_t current_sequence(const std::string& name) const;  // 0 when unpublished

  /// Test hook: flips one byte of the stored signature for name.
  bool tamper_signature(const std::string& name);

private:
  std::filesystem::path record_path(const std::string& name) const;
  std::optional<IpnsRecord> load(const std::string& name) const;
  void store(const IpnsRecord& record);

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mutex_;  // serializes publishes; guards the map
  std::map<std::string, IpnsRecord> records_;
};

}  // namespace diap
