// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/cid.hpp"

#include "diap/errors.hpp"

namespace diap {
namespace {

void append_varint(Bytes& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<uint8_t>(v));
}

uint64_t read_varint(ByteSpan b, size_t& pos) {
  uint64_t v = 0;
  int shift = 0;
  while (true) {
    if (pos >= b.size() || shift > 63) throw Error(Errc::parse_error, "truncated varint");
    uint8_t c = b[pos++];
    v |= static_cast<uint64_t>(c & 0x7f) << shift;
    if ((c & 0x80) == 0) return v;
    shift += 7;
  }
}

}  // namespace

Cid Cid::from_digest(const Digest32& digest) {
  Cid cid;
  cid.digest = digest;
  cid.text = "b" + base32_lower_encode(cid.to_binary());
  return cid;
}

Bytes Cid::to_binary() const {
  Bytes out;
  append_varint(out, version);
  append_varint(out, codec);
  append_varint(out, hash_algo);
  append_varint(out, digest.size());
  out.insert(out.end(), digest.begin(), digest.end());
  return out;
}

Cid Cid::parse(std::string_view text) {
  if (text.empty() || text[0] != 'b') throw Error(Errc::parse_error, "expected multibase base32 CID");
  Bytes bin = base32_lower_decode(text.substr(1));
  size_t pos = 0;
  uint64_t version = read_varint(bin, pos);
  uint64_t codec = read_varint(bin, pos);
  uint64_t algo = read_varint(bin, pos);
  uint64_t len = read_varint(bin, pos);
  if (version != 1) throw Error(Errc::parse_error, "unsupported CID version");
  if (codec != 0x55) throw Error(Errc::parse_error, "unsupported CID codec");
  if (algo != 0x12 || len != 32) throw Error(Errc::parse_error, "unsupported multihash");
  if (bin.size() - pos != len) throw Error(Errc::parse_error, "CID digest length mismatch");
  Cid cid;
  std::copy(bin.begin() + static_cast<long>(pos), bin.end(), cid.digest.begin());
  cid.text = std::string(text);
  // Re-encode to reject non-canonical text forms.
  if (cid.text != "b" + base32_lower_encode(cid.to_binary())) {
    throw Error(Errc::parse_error, "non-canonical CID text");
  }
  return cid;
}

Cid compute_cid(ByteSpan content) { return Cid::from_digest(sha256(content)); }

}  // namespace diap
