// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "diap/bytes.hpp"
#include "helpers.hpp"

using namespace diap;
using test::thrown_code;

TEST_CASE("hex round trip and rejection") {
  CHECK(to_hex(Bytes{}) == "");
  CHECK(to_hex(Bytes{0x00, 0xff, 0x10}) == "00ff10");
  CHECK(from_hex("00ff10") == Bytes{0x00, 0xff, 0x10});
  CHECK(from_hex("DEADbeef") == Bytes{0xde, 0xad, 0xbe, 0xef});
  CHECK(thrown_code([] { from_hex("abc"); }) == Errc::parse_error);
  CHECK(thrown_code([] { from_hex("zz"); }) == Errc::parse_error);
}

TEST_CASE("sha256 known digests") {
  CHECK(to_hex(sha256(Bytes{})) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(to_hex(sha256(to_bytes("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("base64 rfc4648 vectors") {
  const std::pair<const char*, const char*> vectors[] = {
      {"", ""},           {"f", "Zg=="},     {"fo", "Zm8="},
      {"foo", "Zm9v"},    {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="},
      {"foobar", "Zm9vYmFy"},
  };
  for (auto [plain, encoded] : vectors) {
    CHECK(base64_encode(to_bytes(plain)) == encoded);
    CHECK(to_string(base64_decode(encoded)) == plain);
  }
  CHECK(thrown_code([] { base64_decode("Zg="); }) == Errc::parse_error);
  CHECK(thrown_code([] { base64_decode("Z!=="); }) == Errc::parse_error);
  CHECK(thrown_code([] { base64_decode("====" ); }) == Errc::parse_error);
}

TEST_CASE("base58btc") {
  CHECK(base58btc_encode(to_bytes("Hello World!")) == "2NEpo7TZRRrLZSi2U");
  CHECK(to_string(base58btc_decode("2NEpo7TZRRrLZSi2U")) == "Hello World!");
  CHECK(base58btc_encode(Bytes{}) == "");
  // leading zero bytes map to leading '1's
  CHECK(base58btc_encode(Bytes{0x00, 0x01}) == "12");
  CHECK(base58btc_decode("12") == Bytes{0x00, 0x01});
  CHECK(thrown_code([] { base58btc_decode("0O"); }) == Errc::parse_error);
  CHECK(thrown_code([] { base58btc_decode("l"); }) == Errc::parse_error);

  Bytes blob = from_hex("00000287fc94b2fe");
  CHECK(base58btc_decode(base58btc_encode(blob)) == blob);
}

TEST_CASE("base32 lower unpadded rfc4648 vectors") {
  const std::pair<const char*, const char*> vectors[] = {
      {"", ""},          {"f", "my"},        {"fo", "mzxq"},
      {"foo", "mzxw6"},  {"foob", "mzxw6yq"}, {"fooba", "mzxw6ytb"},
      {"foobar", "mzxw6ytboi"},
  };
  for (auto [plain, encoded] : vectors) {
    CHECK(base32_lower_encode(to_bytes(plain)) == encoded);
    CHECK(to_string(base32_lower_decode(encoded)) == plain);
  }
  CHECK(thrown_code([] { base32_lower_decode("MY"); }) == Errc::parse_error);
  CHECK(thrown_code([] { base32_lower_decode("m1"); }) == Errc::parse_error);
  // "mz" decodes to a stray nonzero padding bit pattern only if crafted; "b"
  // alone is an impossible length for any byte string.
  CHECK(thrown_code([] { base32_lower_decode("b"); }) == Errc::parse_error);
}

TEST_CASE("u32 big endian helpers") {
  Bytes out;
  append_u32_be(out, 0x01020304u);
  CHECK(out == Bytes{0x01, 0x02, 0x03, 0x04});
  CHECK(read_u32_be(out) == 0x01020304u);
  append_u32_be(out, 0);
  CHECK(out.size() == 8);
}

TEST_CASE("length prefixed concatenation") {
  Bytes t = to_bytes("t");
  Bytes empty;
  Bytes zero = to_bytes("0");
  CHECK(to_hex(length_prefixed({t, empty, zero})) == "0000000174000000000000000130");
  // injective: ("ab","c") and ("a","bc") differ
  Bytes ab = to_bytes("ab"), c = to_bytes("c"), a = to_bytes("a"), bc = to_bytes("bc");
  CHECK(length_prefixed({ab, c}) != length_prefixed({a, bc}));
}

TEST_CASE("random bytes") {
  Bytes a = random_bytes(32);
  Bytes b = random_bytes(32);
  CHECK(a.size() == 32);
  CHECK(a != b);
  CHECK(random_bytes(0).empty());
}
