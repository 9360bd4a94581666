// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/bytes.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <cstring>

#include "diap/errors.hpp"

namespace diap {

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string to_string(ByteSpan b) { return std::string(b.begin(), b.end()); }

Bytes random_bytes(size_t n) {
  Bytes out(n);
  if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
    throw Error(Errc::randomness_unavailable, "RAND_bytes failed");
  }
  return out;
}

Digest32 sha256(ByteSpan data) {
  Digest32 out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw Error(Errc::io_error, "SHA-256 failed");
  }
  return out;
}

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr std::string_view kBase64 =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
constexpr std::string_view kBase58 =
    "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
constexpr std::string_view kBase32Lower = "abcdefghijklmnopqrstuvwxyz234567";
}  // namespace

std::string to_hex(ByteSpan b) {
  std::string out;
  out.reserve(b.size() * 2);
  for (uint8_t c : b) {
    out.push_back(kHexDigits[c >> 4]);
    out.push_back(kHexDigits[c & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(Errc::parse_error, "odd hex length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::parse_error, "invalid hex digit");
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

std::string base64_encode(ByteSpan b) {
  std::string out;
  out.reserve((b.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= b.size()) {
    uint32_t v = (b[i] << 16) | (b[i + 1] << 8) | b[i + 2];
    out.push_back(kBase64[(v >> 18) & 0x3f]);
    out.push_back(kBase64[(v >> 12) & 0x3f]);
    out.push_back(kBase64[(v >> 6) & 0x3f]);
    out.push_back(kBase64[v & 0x3f]);
    i += 3;
  }
  size_t rest = b.size() - i;
  if (rest == 1) {
    uint32_t v = b[i] << 16;
    out.push_back(kBase64[(v >> 18) & 0x3f]);
    out.push_back(kBase64[(v >> 12) & 0x3f]);
    out.push_back('=');
    out.push_back('=');
  } else if (rest == 2) {
    uint32_t v = (b[i] << 16) | (b[i + 1] << 8);
    out.push_back(kBase64[(v >> 18) & 0x3f]);
    out.push_back(kBase64[(v >> 12) & 0x3f]);
    out.push_back(kBase64[(v >> 6) & 0x3f]);
    out.push_back('=');
  }
  return out;
}

Bytes base64_decode(std::string_view s) {
  if (s.size() % 4 != 0) throw Error(Errc::parse_error, "base64 length not a multiple of 4");
  static const auto table = [] {
    std::array<int8_t, 256> t;
    t.fill(-1);
    for (size_t i = 0; i < kBase64.size(); ++i) t[static_cast<uint8_t>(kBase64[i])] = static_cast<int8_t>(i);
    return t;
  }();
  Bytes out;
  out.reserve(s.size() / 4 * 3);
  for (size_t i = 0; i < s.size(); i += 4) {
    int pad = 0;
    uint32_t v = 0;
    for (size_t j = 0; j < 4; ++j) {
      char c = s[i + j];
      if (c == '=') {
        if (i + 4 != s.size() || j < 2) throw Error(Errc::parse_error, "bad base64 padding");
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw Error(Errc::parse_error, "bad base64 padding");
      int8_t d = table[static_cast<uint8_t>(c)];
      if (d < 0) throw Error(Errc::parse_error, "invalid base64 digit");
      v = (v << 6) | static_cast<uint32_t>(d);
    }
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<uint8_t>(v & 0xff));
  }
  return out;
}

std::string base58btc_encode(ByteSpan b) {
  size_t zeros = 0;
  while (zeros < b.size() && b[zeros] == 0) ++zeros;

  // Big-number repeated division, base 256 -> base 58.
  std::vector<uint8_t> digits;  // base58 digits, least significant first
  for (size_t i = zeros; i < b.size(); ++i) {
    uint32_t carry = b[i];
    for (auto& d : digits) {
      uint32_t v = (static_cast<uint32_t>(d) << 8) | carry;
      d = static_cast<uint8_t>(v % 58);
      carry = v / 58;
    }
    while (carry > 0) {
      digits.push_back(static_cast<uint8_t>(carry % 58));
      carry /= 58;
    }
  }
  std::string out(zeros, '1');
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) out.push_back(kBase58[*it]);
  return out;
}

Bytes base58btc_decode(std::string_view s) {
  static const auto table = [] {
    std::array<int8_t, 256> t;
    t.fill(-1);
    for (size_t i = 0; i < kBase58.size(); ++i) t[static_cast<uint8_t>(kBase58[i])] = static_cast<int8_t>(i);
    return t;
  }();
  size_t ones = 0;
  while (ones < s.size() && s[ones] == '1') ++ones;

  std::vector<uint8_t> bytes;  // base256 digits, least significant first
  for (size_t i = ones; i < s.size(); ++i) {
    int8_t d = table[static_cast<uint8_t>(s[i])];
    if (d < 0) throw Error(Errc::parse_error, "invalid base58 digit");
    uint32_t carry = static_cast<uint32_t>(d);
    for (auto& v : bytes) {
      uint32_t cur = static_cast<uint32_t>(v) * 58 + carry;
      v = static_cast<uint8_t>(cur & 0xff);
      carry = cur >> 8;
    }
    while (carry > 0) {
      bytes.push_back(static_cast<uint8_t>(carry & 0xff));
      carry >>= 8;
    }
  }
  Bytes out(ones, 0);
  out.insert(out.end(), bytes.rbegin(), bytes.rend());
  return out;
}

std::string base32_lower_encode(ByteSpan b) {
  std::string out;
  out.reserve((b.size() * 8 + 4) / 5);
  uint32_t buffer = 0;
  int bits = 0;
  for (uint8_t c : b) {
    buffer = (buffer << 8) | c;
    bits += 8;
    while (bits >= 5) {
      out.push_back(kBase32Lower[(buffer >> (bits - 5)) & 0x1f]);
      bits -= 5;
    }
  }
  if (bits > 0) out.push_back(kBase32Lower[(buffer << (5 - bits)) & 0x1f]);
  return out;
}

Bytes base32_lower_decode(std::string_view s) {
  static const auto table = [] {
    std::array<int8_t, 256> t;
    t.fill(-1);
    for (size_t i = 0; i < kBase32Lower.size(); ++i)
      t[static_cast<uint8_t>(kBase32Lower[i])] = static_cast<int8_t>(i);
    return t;
  }();
  Bytes out;
  out.reserve(s.size() * 5 / 8);
  uint32_t buffer = 0;
  int bits = 0;
  for (char c : s) {
    int8_t d = table[static_cast<uint8_t>(c)];
    if (d < 0) throw Error(Errc::parse_error, "invalid base32 digit");
    buffer = (buffer << 5) | static_cast<uint32_t>(d);
    bits += 5;
    if (bits >= 8) {
      out.push_back(static_cast<uint8_t>((buffer >> (bits - 8)) & 0xff));
      bits -= 8;
    }
  }
  // Trailing bits must be zero padding.
  if (bits > 0 && (buffer & ((1u << bits) - 1)) != 0) {
    throw Error(Errc::parse_error, "nonzero base32 padding bits");
  }
  return out;
}

void append_u32_be(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t read_u32_be(ByteSpan b) {
  return (static_cast<uint32_t>(b[0]) << 24) | (static_cast<uint32_t>(b[1]) << 16) |
         (static_cast<uint32_t>(b[2]) << 8) | static_cast<uint32_t>(b[3]);
}

Bytes length_prefixed(std::initializer_list<ByteSpan> fields) {
  Bytes out;
  for (ByteSpan f : fields) {
    append_u32_be(out, static_cast<uint32_t>(f.size()));
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

}  // namespace diap
