// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface over the library: agent lifecycle, identity
// resolution, the authentication / pubsub / direct-messaging demos, and
// standalone prove/verify for circuit instances.
//
// Exit codes: 0 success, 1 demo or verification failure, 2 usage or input
// parse errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "diap/agent_state.hpp"
#include "diap/errors.hpp"
#include "diap/messaging.hpp"
#include "diap/rpc.hpp"

using namespace diap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::filesystem::path store_dir_or_fail(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DIAP_STORE"); env != nullptr && *env != '\0') return env;
  throw Error(Errc::invalid_input, "no content store configured (use --store or DIAP_STORE)");
}

struct Network {
  ContentStore store;
  IpnsRegistry registry;

  explicit Network(const std::filesystem::path& dir) : store(dir), registry(dir) {}
};

AgentIdentity load_agent(const std::filesystem::path& state_path, ContentStore& store) {
  return load_identity(read_state_file(state_path), store);
}

Bytes echo_handler(const std::string& method, ByteSpan payload) {
  if (method == "ping") return Bytes(payload.begin(), payload.end());
  throw Error(Errc::rpc_error, "unknown method: " + method);
}

void emit(bool as_json, const nlohmann::json& j, const std::string& human) {
  if (as_json) {
    std::cout << j.dump() << std::endl;
  } else {
    std::cout << human << std::endl;
  }
}

// ---- agent new ------------------------------------------------------------

int cmd_agent_new(const std::string& store_flag, const std::string& name, bool force,
                  bool as_json) {
  Network net(store_dir_or_fail(store_flag));
  AgentIdentity agent = create_agent(net.store, net.registry);
  std::filesystem::path path =
      name.size() > 5 && name.ends_with(".json") ? name : name + ".agent.json";
  write_state_file(path, state_from_identity(agent), force);
  nlohmann::json j{{"cid", agent.cid.text},
                   {"did", agent.did.text},
                   {"file", path.string()},
                   {"ipnsName", agent.ipns_name}};
  emit(as_json, j,
       "did=" + agent.did.text + "\ncid=" + agent.cid.text + "\nipns_name=" + agent.ipns_name +
           "\nfile=" + path.string());
  return kExitOk;
}

// ---- identity resolve -------------------------------------------------------

int cmd_identity_resolve(const std::string& store_flag, const std::string& id, bool as_json) {
  Network net(store_dir_or_fail(store_flag));
  Cid cid = id.starts_with("ipns:") ? net.registry.resolve(id) : Cid::parse(id);
  DidDocument doc = parse_document(to_string(net.store.get(cid)));
  if (as_json) {
    nlohmann::json j{{"cid", cid.text},
                     {"document", nlohmann::json::parse(canonical_serialize(doc))}};
    std::cout << j.dump() << std::endl;
  } else {
    std::cout << "did=" << doc.id.text << "\ncid=" << cid.text
              << "\ncreated_at=" << doc.created_at
              << "\nzkp_public_key_hash=" << doc.zkp_public_key_hash.to_decimal() << std::endl;
  }
  return kExitOk;
}

// ---- auth demo --------------------------------------------------------------

int cmd_auth_demo(const std::string& store_flag, const std::string& a_path,
                  const std::string& b_path, const std::string& tamper, bool replay,
                  bool as_json) {
  Network net(store_dir_or_fail(store_flag));
  AgentIdentity a = load_agent(a_path, net.store);
  AgentIdentity b = load_agent(b_path, net.store);
  // The tamper flag corrupts one stored byte for the duration of the
  // handshake, then puts it back: the shared store survives the demo.
  const Cid* tampered = tamper == "a" ? &a.cid : tamper == "b" ? &b.cid : nullptr;
  if (tampered != nullptr) net.store.tamper(*tampered, 0);

  EmbeddedBackend backend;
  AuthManager manager_a(net.store, net.registry, backend);
  AuthManager manager_b(net.store, net.registry, backend);
  MutualAuthResult result;
  try {
    result = mutual_authenticate(manager_a, a, manager_b, b);
  } catch (...) {
    if (tampered != nullptr) net.store.tamper(*tampered, 0);
    throw;
  }
  if (tampered != nullptr) net.store.tamper(*tampered, 0);

  nlohmann::json j{{"mutualTrust", result.ok}};
  std::string human = std::string("mutual_trust=") + (result.ok ? "true" : "false");
  if (!result.ok) {
    const AuthSession& failed =
        result.initiated.state == AuthState::Failed ? result.initiated : result.reciprocal;
    std::string stage =
        result.initiated.state == AuthState::Failed ? "a-verifies-b" : "b-verifies-a";
    j["stage"] = stage;
    j["reason"] = failed.failure;
    human += " stage=" + stage + " reason=" + failed.failure;
  }
  emit(as_json, j, human);
  if (!result.ok) return kExitFailure;

  if (replay) {
    // Same proof presented twice: the second verification must burn nothing
    // and report the nonce as already consumed.
    NonceChallenge challenge = manager_b.issue_challenge();
    Proof proof = manager_b.prove_ownership(a, challenge);
    bool first = manager_b.verify_ownership(a.cid, proof);
    bool second = manager_b.verify_ownership(a.cid, proof);
    std::string reason = last_failure();
    nlohmann::json rj{{"firstAccepted", first}, {"replayAccepted", second}, {"reason", reason}};
    emit(as_json, rj,
         std::string("replay_rejected=") + (second ? "false" : "true") + " reason=" + reason);
    return kExitFailure;
  }
  return kExitOk;
}

// ---- pubsub demo ------------------------------------------------------------

int cmd_pubsub_demo(const std::string& store_flag, const std::vector<std::string>& agent_paths,
                    const std::string& topic, int tamper_count, bool duplicate, bool as_json) {
  Network net(store_dir_or_fail(store_flag));
  if (static_cast<size_t>(tamper_count) > agent_paths.size()) {
    throw Error(Errc::invalid_input, "--tamper exceeds the number of publishers");
  }
  std::vector<AgentIdentity> agents;
  for (const auto& path : agent_paths) agents.push_back(load_agent(path, net.store));

  EmbeddedBackend backend;
  AuthManager manager(net.store, net.registry, backend);
  InProcessBus bus;
  PubsubAuthenticator authenticator(bus, manager);
  auto subscription = authenticator.subscribe_verified(topic);

  Bytes last_honest_wire;
  for (size_t i = 0; i < agents.size(); ++i) {
    Bytes content = to_bytes("greetings from " + agents[i].did.text);
    NonceChallenge challenge = manager.issue_challenge();
    AuthenticatedMessage msg = authenticator.build_envelope(agents[i], topic, content, challenge);
    if (i < static_cast<size_t>(tamper_count)) {
      msg.content[0] ^= 0x01;  // breaks the content signature
      bus.publish(topic, to_bytes(message_to_json(msg)));
    } else {
      Bytes wire = to_bytes(message_to_json(msg));
      last_honest_wire = wire;
      bus.publish(topic, wire);
    }
  }
  if (duplicate && !last_honest_wire.empty()) bus.publish(topic, last_honest_wire);

  size_t accepted = 0;
  while (subscription->next(std::chrono::milliseconds(100))) ++accepted;
  size_t rejected = subscription->rejected();
  size_t expected = agents.size() - static_cast<size_t>(tamper_count);

  nlohmann::json j{{"accepted", accepted},
                   {"published", agents.size() + (duplicate ? 1 : 0)},
                   {"rejected", rejected}};
  std::string human = "published=" + std::to_string(agents.size() + (duplicate ? 1 : 0)) +
                      " accepted=" + std::to_string(accepted) +
                      " rejected=" + std::to_string(rejected);
  if (rejected > 0) {
    j["lastRejection"] = subscription->last_rejection();
    human += " last_rejection=" + subscription->last_rejection();
  }
  emit(as_json, j, human);
  return accepted == expected ? kExitOk : kExitFailure;
}

// ---- direct demo ------------------------------------------------------------

int dial_and_ping(const AgentIdentity& remote, PeerRegistry& peers, size_t payload_size,
                  std::chrono::milliseconds timeout, bool as_json) {
  RpcClient client(connect_via_identity(remote.document, remote.peer_id, peers));
  Bytes payload = random_bytes(payload_size);
  auto start = std::chrono::steady_clock::now();
  Bytes reply = client.call("ping", payload, timeout);
  auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start)
          .count();
  client.close();
  if (reply != payload) {
    emit(as_json, nlohmann::json{{"ok", false}, {"reason", "echo-mismatch"}},
         "direct_ok=false reason=echo-mismatch");
    return kExitFailure;
  }
  emit(as_json,
       nlohmann::json{{"latencyMicros", micros}, {"ok", true}, {"payloadBytes", payload_size}},
       "direct_ok=true payload_bytes=" + std::to_string(payload_size) +
           " latency_micros=" + std::to_string(micros));
  return kExitOk;
}

int cmd_direct_demo(const std::string& store_flag, const std::string& self_path,
                    const std::string& peer_path, bool listen, bool dial, bool no_listen,
                    uint16_t port, int duration_seconds, size_t payload_size, int timeout_seconds,
                    bool as_json) {
  Network net(store_dir_or_fail(store_flag));
  PeerRegistry peers;
  auto timeout = std::chrono::seconds(timeout_seconds);

  if (listen) {
    AgentIdentity self = load_agent(self_path, net.store);
    DirectListener listener(self, peers, echo_handler, port);
    std::cout << "listening port=" << listener.port() << std::endl;
    std::this_thread::sleep_for(std::chrono::seconds(duration_seconds));
    listener.stop();
    return kExitOk;
  }

  if (peer_path.empty()) {
    throw Error(Errc::invalid_input, "direct demo needs a peer state file unless --listen");
  }
  AgentIdentity peer = load_agent(peer_path, net.store);

  if (dial) {
    if (port == 0) throw Error(Errc::invalid_input, "--dial requires --port");
    peers.register_peer(peer.peer_id, PeerEndpointInfo{"127.0.0.1", port});
    return dial_and_ping(peer, peers, payload_size, timeout, as_json);
  }

  if (no_listen) {
    // Register an endpoint that nobody is serving: grab an ephemeral port,
    // release it, and point the registry at the corpse.
    uint16_t dead_port = 0;
    shutdown_and_close(listen_loopback(dead_port));
    peers.register_peer(peer.peer_id, PeerEndpointInfo{"127.0.0.1", dead_port});
    return dial_and_ping(peer, peers, payload_size, timeout, as_json);
  }

  DirectListener listener(peer, peers, echo_handler, port);
  int rc = dial_and_ping(peer, peers, payload_size, timeout, as_json);
  listener.stop();
  return rc;
}

// ---- prove / verify ---------------------------------------------------------

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, path.string() + ": " + e.what());
  }
}

FieldElement field_from(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(Errc::parse_error, "expected decimal string field: " + key);
  }
  return FieldElement::from_decimal(j[key].get<std::string>());
}

FieldPair pair_from(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2 || !j[key][0].is_string() ||
      !j[key][1].is_string()) {
    throw Error(Errc::parse_error, "expected a two-element decimal array: " + key);
  }
  return {FieldElement::from_decimal(j[key][0].get<std::string>()),
          FieldElement::from_decimal(j[key][1].get<std::string>())};
}

CircuitPublicInputs publics_from_file(const std::filesystem::path& path) {
  nlohmann::json j = load_json_file(path);
  CircuitPublicInputs publics;
  publics.expected_did_hash = pair_from(j, "expectedDidHash");
  publics.public_key_hash = field_from(j, "publicKeyHash");
  publics.nonce_hash = field_from(j, "nonceHash");
  return publics;
}

int cmd_prove(const std::string& witness_path, const std::string& public_path,
              const std::string& out_path) {
  nlohmann::json w = load_json_file(witness_path);
  CircuitWitness witness;
  witness.secret_key = pair_from(w, "secretKey");
  witness.did_document_hash = pair_from(w, "didDocumentHash");
  witness.nonce = pair_from(w, "nonce");
  CircuitPublicInputs publics = publics_from_file(public_path);

  EmbeddedBackend backend;
  Proof proof = backend.prove(witness, publics);  // throws ConstraintViolation
  std::string text = proof_to_json(proof);
  if (out_path.empty()) {
    std::cout << text << std::endl;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + out_path + " for writing");
    out << text << '\n';
    if (!out.flush()) throw Error(Errc::io_error, "write failed for " + out_path);
    std::cout << "proof_written=" << out_path << std::endl;
  }
  return kExitOk;
}

int cmd_verify(const std::string& proof_path, const std::string& public_path, bool as_json) {
  std::ifstream in(proof_path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + proof_path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Proof proof = proof_from_json(text);  // throws parse-error
  CircuitPublicInputs publics = publics_from_file(public_path);

  EmbeddedBackend backend;
  bool ok = verify_proof(proof, publics, backend);
  std::string reason = ok ? "" : last_failure();
  nlohmann::json j{{"verified", ok}};
  if (!ok) j["reason"] = reason;
  emit(as_json, j,
       ok ? std::string("verified=true") : "verified=false reason=" + reason);
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"content-addressed agent identities with proof-backed messaging"};
  app.require_subcommand(1);
  app.fallthrough();  // app-level flags may appear after the subcommand
  std::string store_flag;
  app.add_option("--store,-s", store_flag,
                 "content store directory (or DIAP_STORE environment variable)");
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable canonical JSON output");

  // agent new
  auto* agent = app.add_subcommand("agent", "agent lifecycle");
  agent->require_subcommand(1);
  auto* agent_new = agent->add_subcommand("new", "create, register, and persist a fresh agent");
  std::string new_name;
  bool new_force = false;
  agent_new->add_option("name", new_name, "agent name; writes <name>.agent.json")->required();
  agent_new->add_flag("--force", new_force, "overwrite an existing state file");

  // identity resolve
  auto* identity = app.add_subcommand("identity", "identity lookups");
  identity->require_subcommand(1);
  auto* resolve = identity->add_subcommand("resolve", "fetch a document by CID or ipns name");
  std::string resolve_id;
  resolve->add_option("id", resolve_id, "CID text or ipns:z6Mk... name")->required();

  // auth demo
  auto* auth = app.add_subcommand("auth", "authentication flows");
  auth->require_subcommand(1);
  auto* auth_demo = auth->add_subcommand("demo", "mutual challenge-response authentication");
  std::string auth_a, auth_b, auth_tamper;
  bool auth_replay = false;
  auth_demo->add_option("a", auth_a, "initiator state file")->required();
  auth_demo->add_option("b", auth_b, "responder state file")->required();
  auth_demo->add_option("--tamper", auth_tamper, "corrupt one stored document before the handshake")
      ->check(CLI::IsMember({"a", "b"}));
  auth_demo->add_flag("--replay", auth_replay, "present one proof twice and report the rejection");

  // pubsub demo
  auto* pubsub = app.add_subcommand("pubsub", "broadcast messaging");
  pubsub->require_subcommand(1);
  auto* pubsub_demo = pubsub->add_subcommand("demo", "authenticated publish and verify loop");
  std::vector<std::string> pubsub_agents;
  std::string pubsub_topic = "diap/demo";
  int pubsub_tamper = 0;
  bool pubsub_duplicate = false;
  pubsub_demo->add_option("agents", pubsub_agents, "two or more state files")
      ->required()
      ->expected(-2);
  pubsub_demo->add_option("--topic", pubsub_topic, "bus topic");
  pubsub_demo->add_option("--tamper", pubsub_tamper, "mutate this many envelopes before delivery")
      ->check(CLI::NonNegativeNumber);
  pubsub_demo->add_flag("--duplicate", pubsub_duplicate,
                        "redeliver one honest envelope verbatim");

  // direct demo
  auto* direct = app.add_subcommand("direct", "direct peer-to-peer messaging");
  direct->require_subcommand(1);
  auto* direct_demo = direct->add_subcommand("demo", "identity-routed echo over a direct channel");
  std::string direct_self, direct_peer;
  bool direct_listen = false, direct_dial = false, direct_no_listen = false;
  uint16_t direct_port = 0;
  int direct_duration = 10, direct_timeout = 5;
  size_t direct_payload = 32;
  direct_demo->add_option("self", direct_self, "local agent state file")->required();
  direct_demo->add_option("peer", direct_peer, "remote agent state file");
  direct_demo->add_flag("--listen", direct_listen, "serve echo requests as 'self', then exit");
  direct_demo->add_flag("--dial", direct_dial, "connect to a --listen process on --port");
  direct_demo->add_flag("--no-listen", direct_no_listen,
                        "dial an endpoint nobody serves (failure demo)");
  direct_demo->add_option("--port", direct_port, "listen port, or the remote port for --dial");
  direct_demo->add_option("--duration", direct_duration, "seconds a --listen process stays up");
  direct_demo->add_option("--payload-size", direct_payload, "ping payload bytes");
  direct_demo->add_option("--timeout", direct_timeout, "call timeout in seconds");

  // prove / verify
  auto* prove = app.add_subcommand("prove", "generate an ownership proof from files");
  std::string prove_witness, prove_public, prove_out;
  prove->add_option("--witness", prove_witness, "witness JSON file")->required();
  prove->add_option("--public", prove_public, "public inputs JSON file")->required();
  prove->add_option("--out", prove_out, "proof output path (stdout when omitted)");

  auto* verify = app.add_subcommand("verify", "check a proof against expected public inputs");
  std::string verify_proof, verify_public;
  verify->add_option("--proof", verify_proof, "proof JSON file")->required();
  verify->add_option("--public", verify_public, "public inputs JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (agent_new->parsed()) return cmd_agent_new(store_flag, new_name, new_force, as_json);
    if (resolve->parsed()) return cmd_identity_resolve(store_flag, resolve_id, as_json);
    if (auth_demo->parsed()) {
      return cmd_auth_demo(store_flag, auth_a, auth_b, auth_tamper, auth_replay, as_json);
    }
    if (pubsub_demo->parsed()) {
      return cmd_pubsub_demo(store_flag, pubsub_agents, pubsub_topic, pubsub_tamper,
                             pubsub_duplicate, as_json);
    }
    if (direct_demo->parsed()) {
      return cmd_direct_demo(store_flag, direct_self, direct_peer, direct_listen, direct_dial,
                             direct_no_listen, direct_port, direct_duration, direct_payload,
                             direct_timeout, as_json);
    }
    if (prove->parsed()) return cmd_prove(prove_witness, prove_public, prove_out);
    if (verify->parsed()) return cmd_verify(verify_proof, verify_public, as_json);
  } catch (const ConstraintViolation& e) {
    std::cerr << "constraint-violation " << e.index() << std::endl;
    return kExitFailure;
  } catch (const Error& e) {
    std::cerr << e.what() << std::endl;
    return e.code() == Errc::parse_error || e.code() == Errc::invalid_input ? kExitUsage
                                                                            : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << std::endl;
    return kExitFailure;
  }
  return kExitUsage;
}
