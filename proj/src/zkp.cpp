// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/zkp.hpp"

#include <json.hpp>

#include "diap/errors.hpp"

namespace diap {

using nlohmann::json;

FieldPair split_hash_to_fields(const Digest32& digest) {
  ByteSpan all(digest);
  return {FieldElement::from_bytes_be_half(all.subspan(0, 16)),
          FieldElement::from_bytes_be_half(all.subspan(16, 16))};
}

FieldPair derive_secret_fields(const KeyPair& keypair) {
  Bytes material(keypair.seed.begin(), keypair.seed.end());
  Bytes salt = to_bytes(kZkpSecretSalt);
  material.insert(material.end(), salt.begin(), salt.end());
  return split_hash_to_fields(sha256(material));
}

FieldElement hash_pair(const FieldElement& x, const FieldElement& y) {
  return x * y + x + y;
}

int check_constraints(const CircuitWitness& w, const CircuitPublicInputs& p) {
  if (w.did_document_hash != p.expected_did_hash) return 1;
  if (hash_pair(w.secret_key[0], w.secret_key[1]) != p.public_key_hash) return 2;
  if (hash_pair(w.nonce[0], w.nonce[1]) != p.nonce_hash) return 3;
  return 0;
}

FieldElement evaluate_circuit(const CircuitWitness& w, const CircuitPublicInputs& p) {
  if (int failed = check_constraints(w, p); failed != 0) {
    throw ConstraintViolation(failed);
  }
  FieldElement key_sum = w.secret_key[0] + w.secret_key[1];
  FieldElement hash_sum = w.did_document_hash[0] + w.did_document_hash[1];
  return key_sum * hash_sum + w.nonce[0] + w.nonce[1];
}

Digest32 proof_tag(std::string_view backend_id, const CircuitPublicInputs& p,
                   const FieldElement& binding_proof) {
  Bytes material = length_prefixed({to_bytes(backend_id)});
  for (const FieldElement* e : {&p.expected_did_hash[0], &p.expected_did_hash[1],
                                &p.public_key_hash, &p.nonce_hash, &binding_proof}) {
    auto be = e->to_bytes_be();
    material.insert(material.end(), be.begin(), be.end());
  }
  return sha256(material);
}

Proof EmbeddedBackend::prove(const CircuitWitness& witness, const CircuitPublicInputs& publics) {
  Proof proof;
  proof.public_inputs = publics;
  proof.binding_proof = evaluate_circuit(witness, publics);
  proof.backend_id = std::string(id());
  proof.tag = proof_tag(proof.backend_id, proof.public_inputs, proof.binding_proof);
  return proof;
}

bool EmbeddedBackend::verify(const Proof& proof) {
  if (proof.backend_id != id()) {
    set_last_failure("proof-backend-mismatch");
    return false;
  }
  if (proof.tag != proof_tag(proof.backend_id, proof.public_inputs, proof.binding_proof)) {
    set_last_failure("proof-tag-mismatch");
    return false;
  }
  return true;
}

bool verify_proof(const Proof& proof, const CircuitPublicInputs& expected, ProofBackend& backend) {
  if (!backend.verify(proof)) return false;  // diagnostic already recorded
  if (proof.public_inputs.expected_did_hash != expected.expected_did_hash) {
    set_last_failure("expected-did-hash-mismatch");
    return false;
  }
  if (proof.public_inputs.public_key_hash != expected.public_key_hash) {
    set_last_failure("public-key-hash-mismatch");
    return false;
  }
  if (proof.public_inputs.nonce_hash != expected.nonce_hash) {
    set_last_failure("nonce-hash-mismatch");
    return false;
  }
  return true;
}

std::string proof_to_json(const Proof& proof) {
  json j{
      {"backendId", proof.backend_id},
      {"bindingProof", proof.binding_proof.to_decimal()},
      {"publicInputs",
       {{"expectedDidHash0", proof.public_inputs.expected_did_hash[0].to_decimal()},
        {"expectedDidHash1", proof.public_inputs.expected_did_hash[1].to_decimal()},
        {"nonceHash", proof.public_inputs.nonce_hash.to_decimal()},
        {"publicKeyHash", proof.public_inputs.public_key_hash.to_decimal()}}},
      {"tag", to_hex(proof.tag)},
  };
  return j.dump();
}

Proof proof_from_json(std::string_view text) {
  try {
    json j = json::parse(text);
    Proof proof;
    proof.backend_id = j.at("backendId").get<std::string>();
    proof.binding_proof = FieldElement::from_decimal(j.at("bindingProof").get<std::string>());
    const json& pi = j.at("publicInputs");
    proof.public_inputs.expected_did_hash = {
        FieldElement::from_decimal(pi.at("expectedDidHash0").get<std::string>()),
        FieldElement::from_decimal(pi.at("expectedDidHash1").get<std::string>())};
    proof.public_inputs.nonce_hash = FieldElement::from_decimal(pi.at("nonceHash").get<std::string>());
    proof.public_inputs.public_key_hash =
        FieldElement::from_decimal(pi.at("publicKeyHash").get<std::string>());
    Bytes tag = from_hex(j.at("tag").get<std::string>());
    if (tag.size() != proof.tag.size()) throw Error(Errc::parse_error, "bad tag length");
    std::copy(tag.begin(), tag.end(), proof.tag.begin());
    return proof;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad proof: ") + e.what());
  }
}

}  // namespace diap
