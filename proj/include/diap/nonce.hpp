// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>

#include "diap/field.hpp"
#include "diap/zkp.hpp"

namespace diap {

/// A challenge handed to a prover. The preimage pair goes into the witness;
/// only the hash appears in public inputs and on the wire.
struct NonceChallenge {
  FieldPair nonce;
  FieldElement nonce_hash;
  int64_t issued_at = 0;
};

enum class ConsumeStatus {
  Ok,
  Unknown,
  AlreadyConsumed,
  Expired,
};

/// Diagnostic name: "ok", "nonce-unknown", "nonce-consumed", "nonce-expired".
std::string_view consume_status_name(ConsumeStatus s);

/// Single-use challenge issuance with expiry.
///
/// check_and_consume is an atomic test-and-set: of any number of concurrent
/// calls for the same hash, exactly one observes Ok. Consumed entries stay
/// resident until they expire so replays keep reporting AlreadyConsumed
/// rather than Unknown.
class ChallengeTable {
public:
  using Clock = std::function<int64_t()>;

  /// ttl_seconds: a challenge is still valid exactly ttl seconds after
  /// issuance and invalid one second later. A default-constructed clock
  /// reads the system clock (unix seconds).
  explicit ChallengeTable(int64_t ttl_seconds = 300, Clock clock = {});

  NonceChallenge issue();

  ConsumeStatus check_and_consume(const FieldElement& nonce_hash);

  size_t size() const;
  int64_t ttl_seconds() const { return ttl_; }

private:
  struct Entry {
    int64_t issued_at = 0;
    bool consumed = false;
  };

  bool expired(const Entry& e, int64_t now) const { return now - e.issued_at > ttl_; }
  void sweep_locked(int64_t now);

  int64_t ttl_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::array<uint8_t, 32>, Entry> entries_;  // keyed by hash bytes
};

}  // namespace diap
