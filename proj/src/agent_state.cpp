// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/agent_state.hpp"

#include <fstream>
#include <json.hpp>

#include "diap/did_document.hpp"
#include "diap/errors.hpp"

namespace diap {

AgentStateFile state_from_identity(const AgentIdentity& identity) {
  AgentStateFile state;
  state.seed = identity.keypair.seed;
  state.did = identity.did.text;
  state.cid = identity.cid.text;
  state.ipns_name = identity.ipns_name;
  state.peer_id = identity.peer_id.bytes;
  return state;
}

std::string state_to_json(const AgentStateFile& state) {
  nlohmann::json j;
  j["cid"] = state.cid;
  j["did"] = state.did;
  j["ipnsName"] = state.ipns_name;
  j["peerId"] = base64_encode(state.peer_id);
  j["seed"] = base64_encode(ByteSpan(state.seed.data(), state.seed.size()));
  return j.dump();
}

AgentStateFile state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("bad agent state: ") + e.what());
  }
  if (!j.is_object() || !j.contains("cid") || !j.contains("did") || !j.contains("ipnsName") ||
      !j.contains("peerId") || !j.contains("seed") || !j["cid"].is_string() ||
      !j["did"].is_string() || !j["ipnsName"].is_string() || !j["peerId"].is_string() ||
      !j["seed"].is_string()) {
    throw Error(Errc::parse_error, "agent state: missing or mistyped field");
  }
  AgentStateFile state;
  state.cid = j["cid"].get<std::string>();
  state.did = j["did"].get<std::string>();
  state.ipns_name = j["ipnsName"].get<std::string>();
  Bytes seed_bytes;
  try {
    state.peer_id = base64_decode(j["peerId"].get<std::string>());
    seed_bytes = base64_decode(j["seed"].get<std::string>());
  } catch (const Error& e) {
    throw Error(Errc::parse_error, std::string("agent state: ") + e.what());
  }
  if (seed_bytes.size() != state.seed.size()) {
    throw Error(Errc::parse_error, "agent state: seed must decode to 32 bytes");
  }
  std::copy(seed_bytes.begin(), seed_bytes.end(), state.seed.begin());
  return state;
}

void write_state_file(const std::filesystem::path& path, const AgentStateFile& state, bool force) {
  if (!force && std::filesystem::exists(path)) {
    throw Error(Errc::io_error,
                "refusing to overwrite " + path.string() + " (pass force to replace)");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  out << state_to_json(state) << '\n';
  if (!out.flush()) throw Error(Errc::io_error, "write failed for " + path.string());
}

AgentStateFile read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return state_from_json(text);
}

AgentIdentity load_identity(const AgentStateFile& state, ContentStore& store) {
  KeyPair keypair = KeyPair::from_seed(state.seed);
  DidKey did = derive_did_key(keypair.public_key);
  if (did.text != state.did) {
    throw Error(Errc::invalid_key, "agent state: seed does not derive the stored did");
  }
  Cid cid = Cid::parse(state.cid);
  Bytes document_bytes = store.get(cid);
  DidDocument document = parse_document(to_string(document_bytes));
  if (document.id.text != state.did) {
    throw Error(Errc::integrity_violation, "agent state: document at cid names a different did");
  }
  AgentIdentity identity;
  identity.keypair = keypair;
  identity.did = did;
  identity.document = document;
  identity.cid = cid;
  identity.ipns_name = state.ipns_name;
  identity.peer_id = PeerId{state.peer_id};
  return identity;
}

}  // namespace diap
