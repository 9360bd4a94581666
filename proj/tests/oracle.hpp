// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent big-integer reference for the field tests. Everything here goes
// through boost::multiprecision so the hand-written limb arithmetic in the
// library is never checked against itself.

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "diap/field.hpp"

namespace diap::test {

using boost::multiprecision::cpp_int;

inline const cpp_int kOracleModulus(
    "21888242871839275222246405745257275088548364400416034343698204186575808495617");

inline cpp_int to_int(const FieldElement& e) {
  cpp_int v = 0;
  for (uint8_t b : e.to_bytes_be()) {
    v <<= 8;
    v |= b;
  }
  return v;
}

inline FieldElement from_int(cpp_int v) {
  v %= kOracleModulus;
  if (v < 0) v += kOracleModulus;
  std::array<uint8_t, 32> be{};
  for (int i = 31; i >= 0; --i) {
    be[static_cast<size_t>(i)] = static_cast<uint8_t>(v & 0xff);
    v >>= 8;
  }
  return FieldElement::from_bytes_be_reduce(be);
}

/// Deterministic stream of field elements spread over the whole range,
/// including values with all limbs populated.
class ElementStream {
public:
  explicit ElementStream(uint64_t seed) : rng_(seed) {}

  cpp_int next_int() {
    cpp_int v = 0;
    for (int i = 0; i < 4; ++i) {
      v <<= 64;
      v |= cpp_int(rng_());
    }
    return v % kOracleModulus;
  }

  FieldElement next() { return from_int(next_int()); }

private:
  std::mt19937_64 rng_;
};

}  // namespace diap::test
