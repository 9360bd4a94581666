// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diap {

enum class Errc {
  invalid_key,
  invalid_salt,
  invalid_input,
  invalid_digest,
  not_found,
  integrity_violation,
  stale_sequence,
  record_signature_invalid,
  parse_error,
  decryption_failure,
  constraint_violation,
  nonce_unknown,
  nonce_consumed,
  nonce_expired,
  timeout,
  channel_closed,
  rpc_error,
  protocol_error,
  peer_unreachable,
  resolution_failure,
  endpoint_signature_invalid,
  store_error,
  io_error,
  randomness_unavailable,
};

/// Stable kebab-case name, used in CLI output and diagnostics.
std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

/// Raised when a circuit witness fails a constraint; index is 1-based and
/// identifies the first assertion that did not hold.
class ConstraintViolation : public Error {
public:
  explicit ConstraintViolation(int index);
  int index() const noexcept { return index_; }

private:
  int index_;
};

// Thread-local diagnostic channel. Verification entry points that return a
// total boolean record the failure reason here so callers (and the CLI) can
// report causes without the predicate ever throwing.
void set_last_failure(std::string reason);
const std::string& last_failure();

}  // namespace diap
