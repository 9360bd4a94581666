// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <utility>

#include "diap/bytes.hpp"
#include "diap/errors.hpp"

namespace diap::test {

/// Runs f and reports the diap error code it threw, if any.
template <typename F>
std::optional<Errc> thrown_code(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

template <size_t N>
std::array<uint8_t, N> array_from_hex(std::string_view hex) {
  Bytes b = from_hex(hex);
  if (b.size() != N) throw std::logic_error("bad test vector length");
  std::array<uint8_t, N> out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

/// 32-byte array filled with first..first+31.
inline std::array<uint8_t, 32> counting_array(uint8_t first) {
  std::array<uint8_t, 32> out{};
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<uint8_t>(first + i);
  return out;
}

}  // namespace diap::test
