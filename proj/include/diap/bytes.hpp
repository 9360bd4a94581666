// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diap {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;
using Digest32 = std::array<uint8_t, 32>;

Bytes to_bytes(std::string_view s);
std::string to_string(ByteSpan b);

/// Cryptographically secure random bytes; throws randomness-unavailable if
/// the system RNG fails.
Bytes random_bytes(size_t n);

Digest32 sha256(ByteSpan data);

std::string to_hex(ByteSpan b);
Bytes from_hex(std::string_view hex);  // throws parse-error

// RFC 4648 standard alphabet with padding.
std::string base64_encode(ByteSpan b);
Bytes base64_decode(std::string_view s);  // throws parse-error

// Bitcoin base58 alphabet (base58btc), leading zero bytes encode as '1'.
std::string base58btc_encode(ByteSpan b);
Bytes base58btc_decode(std::string_view s);  // throws parse-error

// RFC 4648 base32, lowercase, no padding; the multibase 'b' text form.
std::string base32_lower_encode(ByteSpan b);
Bytes base32_lower_decode(std::string_view s);  // throws parse-error

void append_u32_be(Bytes& out, uint32_t v);
uint32_t read_u32_be(ByteSpan b);  // from first 4 bytes

/// Length-prefixed concatenation of byte fields: u32-be(len) then the bytes,
/// per field. Injective regardless of field contents.
Bytes length_prefixed(std::initializer_list<ByteSpan> fields);

}  // namespace diap
