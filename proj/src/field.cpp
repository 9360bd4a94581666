// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/field.hpp"

#include <algorithm>

#include "diap/errors.hpp"

namespace diap {
namespace {

using uint128_t = unsigned __int128;
using Limbs = FieldElement::Limbs;

// 0x30644E72E131A029 B85045B68181585D 2833E84879B97091 43E1F593F0000001
constexpr Limbs kModulus = {0x43E1F593F0000001ULL, 0x2833E84879B97091ULL, 0xB85045B68181585DULL,
                            0x30644E72E131A029ULL};

// (2^256)^2 mod p
constexpr Limbs kRSquared = {0x1BB8E645AE216DA7ULL, 0x53FE3AB1E35C59E3ULL, 0x8C49833D53BB8085ULL,
                             0x0216D0B17F4E44A5ULL};

// -p^{-1} mod 2^64
constexpr uint64_t kPInv = 0xC2E1F593EFFFFFFFULL;

bool geq(const Limbs& a, const Limbs& b) {
  for (int i = 3; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return true;
}

// a -= b, assumes a >= b
void sub_in_place(Limbs& a, const Limbs& b) {
  uint64_t borrow = 0;
  for (int i = 0; i < 4; ++i) {
    uint128_t d = static_cast<uint128_t>(a[i]) - b[i] - borrow;
    a[i] = static_cast<uint64_t>(d);
    borrow = static_cast<uint64_t>((d >> 64) & 1);
  }
}

// returns carry out
uint64_t add_in_place(Limbs& a, const Limbs& b) {
  uint64_t carry = 0;
  for (int i = 0; i < 4; ++i) {
    uint128_t s = static_cast<uint128_t>(a[i]) + b[i] + carry;
    a[i] = static_cast<uint64_t>(s);
    carry = static_cast<uint64_t>(s >> 64);
  }
  return carry;
}

// CIOS Montgomery multiplication: a * b * 2^-256 mod p, inputs < p.
Limbs mont_mul(const Limbs& a, const Limbs& b) {
  uint64_t t[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    uint64_t carry = 0;
    for (int j = 0; j < 4; ++j) {
      uint128_t cur = static_cast<uint128_t>(a[i]) * b[j] + t[j] + carry;
      t[j] = static_cast<uint64_t>(cur);
      carry = static_cast<uint64_t>(cur >> 64);
    }
    uint128_t cur = static_cast<uint128_t>(t[4]) + carry;
    t[4] = static_cast<uint64_t>(cur);
    t[5] = static_cast<uint64_t>(cur >> 64);

    uint64_t m = t[0] * kPInv;
    cur = static_cast<uint128_t>(m) * kModulus[0] + t[0];
    carry = static_cast<uint64_t>(cur >> 64);
    for (int j = 1; j < 4; ++j) {
      cur = static_cast<uint128_t>(m) * kModulus[j] + t[j] + carry;
      t[j - 1] = static_cast<uint64_t>(cur);
      carry = static_cast<uint64_t>(cur >> 64);
    }
    cur = static_cast<uint128_t>(t[4]) + carry;
    t[3] = static_cast<uint64_t>(cur);
    t[4] = t[5] + static_cast<uint64_t>(cur >> 64);
  }
  Limbs r = {t[0], t[1], t[2], t[3]};
  if (t[4] != 0 || geq(r, kModulus)) sub_in_place(r, kModulus);
  return r;
}

// (value * 10 + digit), returns false on 256-bit overflow
bool mul10_add(Limbs& v, uint64_t digit) {
  uint64_t carry = digit;
  for (int i = 0; i < 4; ++i) {
    uint128_t cur = static_cast<uint128_t>(v[i]) * 10 + carry;
    v[i] = static_cast<uint64_t>(cur);
    carry = static_cast<uint64_t>(cur >> 64);
  }
  return carry == 0;
}

// v /= 10, returns remainder
uint64_t divmod10(Limbs& v) {
  uint64_t rem = 0;
  for (int i = 3; i >= 0; --i) {
    uint128_t cur = (static_cast<uint128_t>(rem) << 64) | v[i];
    v[i] = static_cast<uint64_t>(cur / 10);
    rem = static_cast<uint64_t>(cur % 10);
  }
  return rem;
}

}  // namespace

FieldElement FieldElement::from_limbs(const Limbs& limbs) {
  if (geq(limbs, kModulus)) throw Error(Errc::invalid_input, "field element not canonical");
  FieldElement e;
  e.limbs_ = limbs;
  return e;
}

FieldElement FieldElement::from_bytes_be_reduce(ByteSpan bytes32) {
  if (bytes32.size() != 32) throw Error(Errc::invalid_digest, "expected 32 bytes");
  Limbs v{};
  for (int limb = 0; limb < 4; ++limb) {
    uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x = (x << 8) | bytes32[static_cast<size_t>((3 - limb) * 8 + i)];
    v[limb] = x;
  }
  // value < 2^256 < 6p, so a handful of subtractions suffice
  while (geq(v, kModulus)) sub_in_place(v, kModulus);
  FieldElement e;
  e.limbs_ = v;
  return e;
}

FieldElement FieldElement::from_bytes_be_half(ByteSpan bytes16) {
  if (bytes16.size() != 16) throw Error(Errc::invalid_digest, "expected 16 bytes");
  Limbs v{};
  uint64_t hi = 0, lo = 0;
  for (int i = 0; i < 8; ++i) hi = (hi << 8) | bytes16[static_cast<size_t>(i)];
  for (int i = 8; i < 16; ++i) lo = (lo << 8) | bytes16[static_cast<size_t>(i)];
  v[1] = hi;
  v[0] = lo;
  FieldElement e;
  e.limbs_ = v;
  return e;
}

FieldElement FieldElement::from_decimal(std::string_view s) {
  if (s.empty()) throw Error(Errc::parse_error, "empty decimal string");
  if (s.size() > 1 && s[0] == '0') throw Error(Errc::parse_error, "leading zero in decimal string");
  Limbs v{};
  for (char c : s) {
    if (c < '0' || c > '9') throw Error(Errc::parse_error, "invalid decimal digit");
    if (!mul10_add(v, static_cast<uint64_t>(c - '0'))) {
      throw Error(Errc::parse_error, "decimal value exceeds 256 bits");
    }
  }
  if (geq(v, kModulus)) throw Error(Errc::parse_error, "decimal value not a canonical field element");
  FieldElement e;
  e.limbs_ = v;
  return e;
}

const FieldElement& FieldElement::modulus_minus_one() {
  static const FieldElement e = [] {
    Limbs v = kModulus;
    v[0] -= 1;  // p is odd
    FieldElement x;
    x = FieldElement::from_limbs(v);
    return x;
  }();
  return e;
}

std::string FieldElement::to_decimal() const {
  if (is_zero()) return "0";
  Limbs v = limbs_;
  std::string out;
  while (!(v[0] == 0 && v[1] == 0 && v[2] == 0 && v[3] == 0)) {
    out.push_back(static_cast<char>('0' + divmod10(v)));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::array<uint8_t, 32> FieldElement::to_bytes_be() const {
  std::array<uint8_t, 32> out{};
  for (int limb = 0; limb < 4; ++limb) {
    uint64_t x = limbs_[static_cast<size_t>(limb)];
    for (int i = 0; i < 8; ++i) {
      out[static_cast<size_t>((3 - limb) * 8 + (7 - i))] = static_cast<uint8_t>(x & 0xff);
      x >>= 8;
    }
  }
  return out;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  FieldElement r = a;
  add_in_place(r.limbs_, b.limbs_);  // a + b < 2p < 2^256, no carry out
  if (geq(r.limbs_, kModulus)) sub_in_place(r.limbs_, kModulus);
  return r;
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  FieldElement r = a;
  if (!geq(r.limbs_, b.limbs_)) add_in_place(r.limbs_, kModulus);
  sub_in_place(r.limbs_, b.limbs_);
  return r;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  // plain -> plain: (a*b*R^-1) * R^2 * R^-1 = a*b mod p
  FieldElement r;
  r.limbs_ = mont_mul(mont_mul(a.limbs_, b.limbs_), kRSquared);
  return r;
}

FieldElement field_add(const FieldElement& a, const FieldElement& b) { return a + b; }
FieldElement field_sub(const FieldElement& a, const FieldElement& b) { return a - b; }
FieldElement field_mul(const FieldElement& a, const FieldElement& b) { return a * b; }

}  // namespace diap
