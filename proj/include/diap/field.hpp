// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "diap/bytes.hpp"

namespace diap {

/// Element of the BN254 scalar field
/// p = 21888242871839275222246405745257275088548364400416034343698204186575808495617.
///
/// Values are kept in canonical form (0 <= value < p) as four 64-bit limbs,
/// least significant first. Multiplication reduces through Montgomery REDC
/// internally; the stored representation is always the plain integer.
class FieldElement {
public:
  using Limbs = std::array<uint64_t, 4>;

  constexpr FieldElement() : limbs_{0, 0, 0, 0} {}
  constexpr explicit FieldElement(uint64_t v) : limbs_{v, 0, 0, 0} {}

  /// Canonical limbs, least significant first. Value must already be < p.
  static FieldElement from_limbs(const Limbs& limbs);  // throws invalid-input if >= p

  /// Big-endian 32-byte value, reduced mod p.
  static FieldElement from_bytes_be_reduce(ByteSpan bytes32);  // throws invalid-digest on size

  /// Big-endian 16-byte value; always < 2^128 < p, so no reduction happens.
  static FieldElement from_bytes_be_half(ByteSpan bytes16);  // throws invalid-digest on size

  /// Decimal string of a canonical representative; rejects values >= p.
  static FieldElement from_decimal(std::string_view s);  // throws parse-error

  static const FieldElement& modulus_minus_one();

  std::string to_decimal() const;
  std::array<uint8_t, 32> to_bytes_be() const;
  const Limbs& limbs() const { return limbs_; }
  bool is_zero() const { return limbs_[0] == 0 && limbs_[1] == 0 && limbs_[2] == 0 && limbs_[3] == 0; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.limbs_ == b.limbs_; }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

private:
  Limbs limbs_;
};

FieldElement field_add(const FieldElement& a, const FieldElement& b);
FieldElement field_sub(const FieldElement& a, const FieldElement& b);
FieldElement field_mul(const FieldElement& a, const FieldElement& b);

using FieldPair = std::array<FieldElement, 2>;

}  // namespace diap
