// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "diap/bytes.hpp"

namespace diap {

/// CIDv1, raw codec (0x55), SHA-256 multihash (0x12), base32-lower text form.
struct Cid {
  uint64_t version = 1;
  uint64_t codec = 0x55;
  uint64_t hash_algo = 0x12;
  Digest32 digest{};
  std::string text;

  static Cid from_digest(const Digest32& digest);
  static Cid parse(std::string_view text);  // throws parse-error

  /// version || codec || multihash(algo || length || digest), varint-coded.
  Bytes to_binary() const;

  friend bool operator==(const Cid& a, const Cid& b) { return a.digest == b.digest; }
  friend bool operator!=(const Cid& a, const Cid& b) { return !(a == b); }
};

Cid compute_cid(ByteSpan content);

}  // namespace diap
