// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/nonce.hpp"

#include <chrono>

#include "diap/errors.hpp"

namespace diap {

namespace {

int64_t system_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Entries are swept only once the table is visibly large; below that, expiry
// is handled lazily on lookup.
constexpr size_t kSweepThreshold = 10000;

}  // namespace

std::string_view consume_status_name(ConsumeStatus s) {
  switch (s) {
    case ConsumeStatus::Ok: return "ok";
    case ConsumeStatus::Unknown: return "nonce-unknown";
    case ConsumeStatus::AlreadyConsumed: return "nonce-consumed";
    case ConsumeStatus::Expired: return "nonce-expired";
  }
  return "nonce-unknown";
}

ChallengeTable::ChallengeTable(int64_t ttl_seconds, Clock clock)
    : ttl_(ttl_seconds), clock_(clock ? std::move(clock) : Clock(system_now)) {
  if (ttl_ < 0) throw Error(Errc::invalid_input, "negative ttl");
}

NonceChallenge ChallengeTable::issue() {
  NonceChallenge challenge;
  Bytes r = random_bytes(32);
  ByteSpan rs(r);
  challenge.nonce = {FieldElement::from_bytes_be_half(rs.subspan(0, 16)),
                     FieldElement::from_bytes_be_half(rs.subspan(16, 16))};
  challenge.nonce_hash = hash_pair(challenge.nonce[0], challenge.nonce[1]);
  challenge.issued_at = clock_();

  std::lock_guard lock(mutex_);
  if (entries_.size() > kSweepThreshold) sweep_locked(challenge.issued_at);
  entries_[challenge.nonce_hash.to_bytes_be()] = Entry{challenge.issued_at, false};
  return challenge;
}

ConsumeStatus ChallengeTable::check_and_consume(const FieldElement& nonce_hash) {
  int64_t now = clock_();
  std::lock_guard lock(mutex_);
  auto it = entries_.find(nonce_hash.to_bytes_be());
  if (it == entries_.end()) return ConsumeStatus::Unknown;
  if (expired(it->second, now)) {
    entries_.erase(it);
    return ConsumeStatus::Expired;
  }
  if (it->second.consumed) return ConsumeStatus::AlreadyConsumed;
  it->second.consumed = true;
  return ConsumeStatus::Ok;
}

size_t ChallengeTable::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void ChallengeTable::sweep_locked(int64_t now) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    it = expired(it->second, now) ? entries_.erase(it) : std::next(it);
  }
}

}  // namespace diap
