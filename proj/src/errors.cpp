// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/errors.hpp"

namespace diap {

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_key: return "invalid-key";
    case Errc::invalid_salt: return "invalid-salt";
    case Errc::invalid_input: return "invalid-input";
    case Errc::invalid_digest: return "invalid-digest";
    case Errc::not_found: return "not-found";
    case Errc::integrity_violation: return "integrity-violation";
    case Errc::stale_sequence: return "stale-sequence";
    case Errc::record_signature_invalid: return "record-signature-invalid";
    case Errc::parse_error: return "parse-error";
    case Errc::decryption_failure: return "decryption-failure";
    case Errc::constraint_violation: return "constraint-violation";
    case Errc::nonce_unknown: return "nonce-unknown";
    case Errc::nonce_consumed: return "nonce-consumed";
    case Errc::nonce_expired: return "nonce-expired";
    case Errc::timeout: return "timeout";
    case Errc::channel_closed: return "channel-closed";
    case Errc::rpc_error: return "rpc-error";
    case Errc::protocol_error: return "protocol-error";
    case Errc::peer_unreachable: return "peer-unreachable";
    case Errc::resolution_failure: return "resolution-failure";
    case Errc::endpoint_signature_invalid: return "endpoint-signature-invalid";
    case Errc::store_error: return "store-error";
    case Errc::io_error: return "io-error";
    case Errc::randomness_unavailable: return "randomness-unavailable";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

ConstraintViolation::ConstraintViolation(int index)
    : Error(Errc::constraint_violation, "constraint " + std::to_string(index)), index_(index) {}

namespace {
thread_local std::string tl_last_failure;
}

void set_last_failure(std::string reason) { tl_last_failure = std::move(reason); }

const std::string& last_failure() { return tl_last_failure; }

}  // namespace diap
