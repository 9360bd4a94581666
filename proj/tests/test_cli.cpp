// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the installed command-line binary, driven through
// /bin/sh so each scenario exercises a real process boundary.
#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "diap/bytes.hpp"

#ifndef DIAP_CLI_PATH
#error "DIAP_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> chunk{};
  size_t n = 0;
  while ((n = fread(chunk.data(), 1, chunk.size(), pipe)) > 0) {
    result.output.append(chunk.data(), n);
  }
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// One workspace per test case: a store directory plus agent state files,
// removed on destruction.
struct CliWorld {
  std::filesystem::path dir;
  std::string bin = DIAP_CLI_PATH;

  CliWorld() {
    dir = std::filesystem::temp_directory_path() / ("diap-cli-" + diap::to_hex(diap::random_bytes(8)));
    std::filesystem::create_directories(dir);
  }
  ~CliWorld() { std::filesystem::remove_all(dir); }

  std::string in_dir(const std::string& rel) const { return (dir / rel).string(); }

  // Builds "<bin> <args> --store <dir>" with everything rooted in dir.
  std::string cli(const std::string& args) const {
    return bin + " " + args + " --store " + in_dir("net");
  }

  RunResult new_agent(const std::string& name) {
    return run(cli("agent new " + in_dir(name)));
  }
};

std::string json_field(const std::string& file, const std::string& key) {
  std::ifstream in(file);
  REQUIRE(in.good());
  return nlohmann::json::parse(in).at(key).get<std::string>();
}

}  // namespace

TEST_CASE("cli: agent lifecycle and resolution") {
  CliWorld w;

  RunResult created = w.new_agent("alice");
  CHECK(created.exit_code == 0);
  CHECK(contains(created.output, "did=did:key:z6Mk"));
  CHECK(contains(created.output, "cid=bafkrei"));
  CHECK(std::filesystem::exists(w.in_dir("alice.agent.json")));

  SUBCASE("rerun refuses, force replaces") {
    RunResult again = w.new_agent("alice");
    CHECK(again.exit_code != 0);
    CHECK(contains(again.output, "refusing to overwrite"));
    std::string cid_before = json_field(w.in_dir("alice.agent.json"), "cid");

    RunResult forced = run(w.cli("agent new " + w.in_dir("alice") + " --force"));
    CHECK(forced.exit_code == 0);
    CHECK(json_field(w.in_dir("alice.agent.json"), "cid") != cid_before);  // fresh keys
  }

  SUBCASE("distinct agents get distinct cids") {
    w.new_agent("bob");
    CHECK(json_field(w.in_dir("alice.agent.json"), "cid") !=
          json_field(w.in_dir("bob.agent.json"), "cid"));
  }

  SUBCASE("resolve by cid and by ipns name") {
    std::string cid = json_field(w.in_dir("alice.agent.json"), "cid");
    std::string ipns = json_field(w.in_dir("alice.agent.json"), "ipnsName");
    std::string did = json_field(w.in_dir("alice.agent.json"), "did");

    RunResult by_cid = run(w.cli("identity resolve " + cid));
    CHECK(by_cid.exit_code == 0);
    CHECK(contains(by_cid.output, "did=" + did));

    RunResult by_name = run(w.cli("identity resolve " + ipns));
    CHECK(by_name.exit_code == 0);
    CHECK(contains(by_name.output, "cid=" + cid));

    RunResult as_json = run(w.cli("identity resolve " + cid + " --json"));
    CHECK(as_json.exit_code == 0);
    auto j = nlohmann::json::parse(as_json.output);
    CHECK(j["cid"] == cid);
    CHECK(j["document"]["id"] == did);
  }

  SUBCASE("unknown cid fails cleanly") {
    RunResult missing = run(
        w.cli("identity resolve bafkreihdwdcefgh4dqkjv67uzcmw7ojee6xedzdetojuzjevtenxquvyku"));
    CHECK(missing.exit_code == 1);
    CHECK(contains(missing.output, "not-found"));
  }

  SUBCASE("no store configured is a usage error") {
    RunResult bare = run("env -u DIAP_STORE " + w.bin + " agent new " + w.in_dir("nobody"));
    CHECK(bare.exit_code == 2);
    CHECK(contains(bare.output, "no content store configured"));
  }

  SUBCASE("DIAP_STORE environment variable substitutes for the flag") {
    std::string cid = json_field(w.in_dir("alice.agent.json"), "cid");
    RunResult env_run =
        run("DIAP_STORE=" + w.in_dir("net") + " " + w.bin + " identity resolve " + cid);
    CHECK(env_run.exit_code == 0);
  }
}

TEST_CASE("cli: mutual authentication demo") {
  CliWorld w;
  w.new_agent("alice");
  w.new_agent("bob");
  std::string pair = w.in_dir("alice.agent.json") + " " + w.in_dir("bob.agent.json");

  SUBCASE("honest pair establishes trust, repeatably") {
    for (int i = 0; i < 2; ++i) {
      RunResult honest = run(w.cli("auth demo " + pair));
      CHECK(honest.exit_code == 0);
      CHECK(contains(honest.output, "mutual_trust=true"));
    }
  }

  SUBCASE("tampered responder document fails with the integrity diagnostic") {
    RunResult tampered = run(w.cli("auth demo " + pair + " --tamper b"));
    CHECK(tampered.exit_code == 1);
    CHECK(contains(tampered.output, "mutual_trust=false"));
    CHECK(contains(tampered.output, "stage=a-verifies-b"));
    CHECK(contains(tampered.output, "reason=integrity-violation"));

    // The tamper flag must leave the shared store intact.
    RunResult after = run(w.cli("auth demo " + pair));
    CHECK(after.exit_code == 0);
  }

  SUBCASE("tampering the initiator fails the reciprocal direction") {
    RunResult tampered = run(w.cli("auth demo " + pair + " --tamper a --json"));
    CHECK(tampered.exit_code == 1);
    auto j = nlohmann::json::parse(tampered.output);
    CHECK(j["mutualTrust"] == false);
    CHECK(j["stage"] == "b-verifies-a");
    CHECK(j["reason"] == "integrity-violation");
  }

  SUBCASE("replayed proof is rejected as consumed") {
    RunResult replay = run(w.cli("auth demo " + pair + " --replay"));
    CHECK(replay.exit_code == 1);
    CHECK(contains(replay.output, "mutual_trust=true"));  // the honest handshake still passes
    CHECK(contains(replay.output, "replay_rejected=true"));
    CHECK(contains(replay.output, "reason=nonce-consumed"));
  }
}

TEST_CASE("cli: pubsub demo") {
  CliWorld w;
  w.new_agent("alice");
  w.new_agent("bob");
  w.new_agent("carol");
  std::string trio = w.in_dir("alice.agent.json") + " " + w.in_dir("bob.agent.json") + " " +
                     w.in_dir("carol.agent.json");

  SUBCASE("all honest") {
    RunResult r = run(w.cli("pubsub demo " + trio + " --topic diap/test"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "published=3 accepted=3 rejected=0"));
  }

  SUBCASE("one tampered envelope is rejected, exit still zero") {
    RunResult r = run(w.cli("pubsub demo " + trio + " --tamper 1"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "accepted=2 rejected=1"));
    CHECK(contains(r.output, "last_rejection=message-signature-invalid"));
  }

  SUBCASE("duplicate delivery never double-counts") {
    RunResult r = run(w.cli("pubsub demo " + trio + " --duplicate --json"));
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.output);
    CHECK(j["published"] == 4);
    CHECK(j["accepted"] == 3);
    CHECK(j["rejected"] == 1);
    CHECK(j["lastRejection"] == "nonce-consumed");
  }

  SUBCASE("tamper count beyond publishers is a usage error") {
    RunResult r = run(w.cli("pubsub demo " + trio + " --tamper 4"));
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("cli: direct demo") {
  CliWorld w;
  w.new_agent("alice");
  w.new_agent("bob");
  std::string pair = w.in_dir("alice.agent.json") + " " + w.in_dir("bob.agent.json");

  SUBCASE("in-process echo round trip") {
    RunResult r = run(w.cli("direct demo " + pair));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "direct_ok=true"));
    CHECK(contains(r.output, "latency_micros="));
  }

  SUBCASE("large payload echoes intact") {
    RunResult r = run(w.cli("direct demo " + pair + " --payload-size 1048576 --json"));
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.output);
    CHECK(j["ok"] == true);
    CHECK(j["payloadBytes"] == 1048576);
  }

  SUBCASE("nobody listening yields peer-unreachable") {
    RunResult r = run(w.cli("direct demo " + pair + " --no-listen"));
    CHECK(r.exit_code == 1);
    CHECK(contains(r.output, "peer-unreachable"));
  }

  SUBCASE("two separate processes: listener and dialer") {
    std::string script =
        "set -u\n"
        "log=" + w.in_dir("listen.log") + "\n"
        ": > \"$log\"\n" +
        w.cli("direct demo " + w.in_dir("bob.agent.json") + " --listen --duration 8") +
        " > \"$log\" &\n"
        "lpid=$!\n"
        "i=0\n"
        "while [ $i -lt 80 ]; do grep -q 'port=' \"$log\" && break; sleep 0.1; i=$((i+1)); done\n"
        "port=$(sed -n 's/.*port=\\([0-9]*\\).*/\\1/p' \"$log\")\n" +
        w.cli("direct demo " + pair + " --dial --port \"$port\"") + "\n"
        "rc=$?\n"
        "kill $lpid 2>/dev/null; wait $lpid 2>/dev/null\n"
        "exit $rc\n";
    std::ofstream out(w.in_dir("two_proc.sh"));
    out << script;
    out.close();
    RunResult r = run("/bin/sh " + w.in_dir("two_proc.sh"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "direct_ok=true"));
  }
}

TEST_CASE("cli: prove and verify from files") {
  CliWorld w;
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(w.in_dir(name));
    out << text;
  };
  write("witness.json", R"({"secretKey":["1","2"],"didDocumentHash":["3","4"],"nonce":["5","6"]})");
  write("public.json", R"({"expectedDidHash":["3","4"],"publicKeyHash":"5","nonceHash":"41"})");

  RunResult proved = run(w.bin + " prove --witness " + w.in_dir("witness.json") + " --public " +
                         w.in_dir("public.json") + " --out " + w.in_dir("proof.json"));
  CHECK(proved.exit_code == 0);

  SUBCASE("proof file carries the expected binding and verifies") {
    auto proof = nlohmann::json::parse(std::ifstream(w.in_dir("proof.json")));
    CHECK(proof["bindingProof"] == "32");
    CHECK(proof["backendId"] == "embedded");

    RunResult verified = run(w.bin + " verify --proof " + w.in_dir("proof.json") + " --public " +
                             w.in_dir("public.json"));
    CHECK(verified.exit_code == 0);
    CHECK(contains(verified.output, "verified=true"));
  }

  SUBCASE("violating witness names the constraint") {
    write("public2.json", R"({"expectedDidHash":["3","4"],"publicKeyHash":"6","nonceHash":"41"})");
    RunResult r = run(w.bin + " prove --witness " + w.in_dir("witness.json") + " --public " +
                      w.in_dir("public2.json"));
    CHECK(r.exit_code == 1);
    CHECK(contains(r.output, "constraint-violation 2"));
  }

  SUBCASE("hand-edited binding fails tag verification") {
    auto proof = nlohmann::json::parse(std::ifstream(w.in_dir("proof.json")));
    proof["bindingProof"] = "33";
    write("forged.json", proof.dump());
    RunResult r = run(w.bin + " verify --proof " + w.in_dir("forged.json") + " --public " +
                      w.in_dir("public.json") + " --json");
    CHECK(r.exit_code == 1);
    auto j = nlohmann::json::parse(r.output);
    CHECK(j["verified"] == false);
    CHECK(j["reason"] == "proof-tag-mismatch");
  }

  SUBCASE("malformed input files exit 2") {
    write("junk.json", "not json at all");
    RunResult bad_witness = run(w.bin + " prove --witness " + w.in_dir("junk.json") +
                                " --public " + w.in_dir("public.json"));
    CHECK(bad_witness.exit_code == 2);

    RunResult bad_proof = run(w.bin + " verify --proof " + w.in_dir("junk.json") + " --public " +
                              w.in_dir("public.json"));
    CHECK(bad_proof.exit_code == 2);

    write("overfield.json",
          R"({"secretKey":["1","2"],"didDocumentHash":["3","4"],"nonce":["5",)"
          R"("21888242871839275222246405745257275088548364400416034343698204186575808495617"]})");
    RunResult overflow = run(w.bin + " prove --witness " + w.in_dir("overfield.json") +
                             " --public " + w.in_dir("public.json"));
    CHECK(overflow.exit_code == 2);
  }
}
