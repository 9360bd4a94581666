// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "diap/cid.hpp"
#include "helpers.hpp"

using namespace diap;
using test::thrown_code;

TEST_CASE("cid of empty content") {
  Cid cid = compute_cid(Bytes{});
  CHECK(cid.text == "bafkreihdwdcefgh4dqkjv67uzcmw7ojee6xedzdetojuzjevtenxquvyku");
  CHECK(to_hex(cid.digest) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("cid binary layout") {
  Cid cid = compute_cid(to_bytes("hello"));
  Bytes bin = cid.to_binary();
  REQUIRE(bin.size() == 36);
  CHECK(bin[0] == 0x01);  // version
  CHECK(bin[1] == 0x55);  // raw codec
  CHECK(bin[2] == 0x12);  // sha2-256
  CHECK(bin[3] == 0x20);  // digest length
  CHECK(Bytes(bin.begin() + 4, bin.end()) == Bytes(cid.digest.begin(), cid.digest.end()));
  CHECK(cid.text == "b" + base32_lower_encode(bin));
}

TEST_CASE("cid parse round trip") {
  for (const char* content : {"", "a", "some longer content with spaces"}) {
    Cid cid = compute_cid(to_bytes(content));
    Cid parsed = Cid::parse(cid.text);
    CHECK(parsed == cid);
    CHECK(parsed.text == cid.text);
  }
}

TEST_CASE("cid parse rejects malformed text") {
  Cid good = compute_cid(to_bytes("x"));

  CHECK(thrown_code([] { Cid::parse(""); }) == Errc::parse_error);
  // wrong multibase prefix
  std::string z_prefixed = good.text;
  z_prefixed[0] = 'z';
  CHECK(thrown_code([&] { Cid::parse(z_prefixed); }) == Errc::parse_error);
  // uppercase is not the canonical form
  std::string upper = good.text;
  upper[1] = static_cast<char>(std::toupper(upper[1]));
  CHECK(thrown_code([&] { Cid::parse(upper); }) == Errc::parse_error);
  // truncated payload
  CHECK(thrown_code([&] { Cid::parse(good.text.substr(0, good.text.size() - 2)); }) ==
        Errc::parse_error);

  // structurally valid base32 but wrong codec byte
  Bytes bin = good.to_binary();
  bin[1] = 0x70;
  std::string wrong_codec = "b" + base32_lower_encode(bin);
  CHECK(thrown_code([&] { Cid::parse(wrong_codec); }) == Errc::parse_error);
  // wrong hash algorithm
  bin = good.to_binary();
  bin[2] = 0x13;
  std::string wrong_algo = "b" + base32_lower_encode(bin);
  CHECK(thrown_code([&] { Cid::parse(wrong_algo); }) == Errc::parse_error);
  // wrong digest length byte
  bin = good.to_binary();
  bin[3] = 0x1f;
  std::string wrong_len = "b" + base32_lower_encode(bin);
  CHECK(thrown_code([&] { Cid::parse(wrong_len); }) == Errc::parse_error);
}

TEST_CASE("cid equality is digest equality") {
  Cid a = compute_cid(to_bytes("same"));
  Cid b = compute_cid(to_bytes("same"));
  Cid c = compute_cid(to_bytes("different"));
  CHECK(a == b);
  CHECK(a != c);
}
