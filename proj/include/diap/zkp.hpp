// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "diap/crypto_identity.hpp"
#include "diap/field.hpp"

namespace diap {

/// Salt under which the circuit secret key is derived from the ed25519 seed.
inline constexpr std::string_view kZkpSecretSalt = "DIAP_ZKP_SK_V1";

/// Splits a 32-byte digest into two field elements: the big-endian high and
/// low halves. Each half is < 2^128, comfortably below the modulus, so the
/// mapping is injective and needs no reduction.
FieldPair split_hash_to_fields(const Digest32& digest);

/// Circuit secret key for a keypair: split_hash_to_fields(SHA-256(seed || salt)).
FieldPair derive_secret_fields(const KeyPair& keypair);

/// Algebraic two-to-one compression used inside the circuit:
/// hash_pair(x, y) = x*y + x + y (mod p).
FieldElement hash_pair(const FieldElement& x, const FieldElement& y);

/// Statement proved: "I hold the secret key and document behind this
/// identity, and I am answering this challenge."
struct CircuitPublicInputs {
  FieldPair expected_did_hash;   // split hash of the registered document
  FieldElement public_key_hash;  // hash_pair over the circuit secret key
  FieldElement nonce_hash;       // hash_pair over the challenge nonce

  friend bool operator==(const CircuitPublicInputs& a, const CircuitPublicInputs& b) {
    return a.expected_did_hash == b.expected_did_hash && a.public_key_hash == b.public_key_hash &&
           a.nonce_hash == b.nonce_hash;
  }
};

struct CircuitWitness {
  FieldPair secret_key;
  FieldPair did_document_hash;  // split hash of the document the prover holds
  FieldPair nonce;              // challenge preimage
};

/// Constraint system, in assertion order:
///   1. did_document_hash == expected_did_hash           (both halves)
///   2. hash_pair(secret_key) == public_key_hash
///   3. hash_pair(nonce) == nonce_hash
///   4. binding output = (sk0+sk1)*(h0+h1) + n0 + n1
/// Constraint 4 is the computed output, so it cannot fail at proving time;
/// its integrity is what the proof tag covers.

/// 0 when every assertion holds, otherwise the 1-based index of the first
/// failing constraint.
int check_constraints(const CircuitWitness& witness, const CircuitPublicInputs& publics);

/// Runs the constraint system and returns the binding output.
FieldElement evaluate_circuit(const CircuitWitness& witness,
                              const CircuitPublicInputs& publics);  // throws ConstraintViolation

struct Proof {
  CircuitPublicInputs public_inputs;
  FieldElement binding_proof;
  std::string backend_id;
  Digest32 tag{};

  friend bool operator==(const Proof& a, const Proof& b) {
    return a.public_inputs == b.public_inputs && a.binding_proof == b.binding_proof &&
           a.backend_id == b.backend_id && a.tag == b.tag;
  }
};

/// Integrity tag over the whole proof body: SHA-256 of the length-prefixed
/// backend id followed by the five 32-byte field encodings.
Digest32 proof_tag(std::string_view backend_id, const CircuitPublicInputs& publics,
                   const FieldElement& binding_proof);

class ProofBackend {
public:
  virtual ~ProofBackend() = default;
  virtual std::string_view id() const = 0;

  /// Checks the witness against the publics and emits a proof.
  virtual Proof prove(const CircuitWitness& witness,
                      const CircuitPublicInputs& publics) = 0;  // throws ConstraintViolation

  /// Total: checks whatever the backend can check without the witness and
  /// records a diagnostic through set_last_failure on rejection.
  virtual bool verify(const Proof& proof) = 0;
};

/// Transparent in-process evaluator.
///
/// This backend enforces the constraint system at proving time and a tag
/// integrity check at verification time. It provides NO cryptographic
/// soundness and NO zero-knowledge: a forged prover could fabricate
/// consistent public inputs, and the binding output leaks a function of the
/// witness. It exists so the protocol layers above it (challenge binding,
/// replay handling, transport) are real end to end while remaining swappable
/// for a genuine SNARK backend behind the same interface.
class EmbeddedBackend final : public ProofBackend {
public:
  std::string_view id() const override { return "embedded"; }
  Proof prove(const CircuitWitness& witness, const CircuitPublicInputs& publics) override;
  bool verify(const Proof& proof) override;
};

/// Full proof check: backend acceptance plus exact public-input agreement
/// with what the verifier independently expects. Total; diagnostics through
/// set_last_failure.
bool verify_proof(const Proof& proof, const CircuitPublicInputs& expected, ProofBackend& backend);

std::string proof_to_json(const Proof& proof);
Proof proof_from_json(std::string_view json_text);  // throws parse-error

}  // namespace diap
