// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "diap/auth.hpp"

namespace diap {

/// On-disk snapshot of an agent: enough to reconstruct the full identity
/// given access to the content store that holds the document.
///
/// The seed is stored unencrypted. Anyone who can read the file can act as
/// the agent; protect it with filesystem permissions or keep it ephemeral.
struct AgentStateFile {
  Seed seed{};
  std::string did;
  std::string cid;
  std::string ipns_name;
  Bytes peer_id;
};

AgentStateFile state_from_identity(const AgentIdentity& identity);

/// Canonical JSON, keys sorted: cid, did, ipnsName, peerId (base64),
/// seed (base64).
std::string state_to_json(const AgentStateFile& state);

/// Strict parse; throws Error(parse_error) on any malformed field.
AgentStateFile state_from_json(const std::string& text);

/// Refuses to overwrite an existing file unless force is set.
void write_state_file(const std::filesystem::path& path, const AgentStateFile& state, bool force);

AgentStateFile read_state_file(const std::filesystem::path& path);

/// Rebuilds the in-memory identity: rederives the keypair from the seed,
/// fetches the document bytes by CID, and cross-checks that the seed, the
/// stored DID, and the document all describe the same agent.
AgentIdentity load_identity(const AgentStateFile& state, ContentStore& store);

}  // namespace diap
