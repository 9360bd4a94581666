// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/content_store.hpp"

#include <fstream>

#include <json.hpp>

#include "diap/errors.hpp"

namespace diap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Bytes read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::store_error, "cannot read " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, ByteSpan content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::store_error, "cannot write " + p.string());
  out.write(reinterpret_cast<const char*>(content.data()), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::store_error, "short write to " + p.string());
}

}  // namespace

ContentStore::ContentStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(*dir_ / "objects", ec);
  if (ec) throw Error(Errc::store_error, "cannot create store directory: " + ec.message());
}

Cid ContentStore::put(ByteSpan content) {
  Cid cid = compute_cid(content);
  std::string key = to_hex(cid.digest);
  std::lock_guard lock(mutex_);
  if (dir_) {
    fs::path p = *dir_ / "objects" / key;
    if (!fs::exists(p)) write_file(p, content);
  } else {
    blobs_.emplace(key, Bytes(content.begin(), content.end()));
  }
  return cid;
}

std::optional<Bytes> ContentStore::read_raw(const Digest32& digest) const {
  std::string key = to_hex(digest);
  if (dir_) {
    fs::path p = *dir_ / "objects" / key;
    if (!fs::exists(p)) return std::nullopt;
    return read_file(p);
  }
  auto it = blobs_.find(key);
  if (it == blobs_.end()) return std::nullopt;
  return it->second;
}

Bytes ContentStore::get(const Cid& cid) const {
  std::lock_guard lock(mutex_);
  auto raw = read_raw(cid.digest);
  if (!raw) throw Error(Errc::not_found, "no record for " + cid.text);
  if (sha256(*raw) != cid.digest) {
    throw Error(Errc::integrity_violation, "stored bytes do not hash to " + cid.text);
  }
  return std::move(*raw);
}

bool ContentStore::contains(const Cid& cid) const {
  std::lock_guard lock(mutex_);
  return read_raw(cid.digest).has_value();
}

bool ContentStore::tamper(const Cid& cid, size_t byte_index) {
  std::lock_guard lock(mutex_);
  auto raw = read_raw(cid.digest);
  if (!raw || byte_index >= raw->size()) return false;
  (*raw)[byte_index] ^= 0x01;
  if (dir_) {
    write_file(*dir_ / "objects" / to_hex(cid.digest), *raw);
  } else {
    blobs_[to_hex(cid.digest)] = std::move(*raw);
  }
  return true;
}

size_t ContentStore::record_count() const {
  std::lock_guard lock(mutex_);
  if (dir_) {
    size_t n = 0;
    for (const auto& e : fs::directory_iterator(*dir_ / "objects")) {
      if (e.is_regular_file()) ++n;
    }
    return n;
  }
  return blobs_.size();
}

// --- IPNS ---

std::string ipns_name_for(const PublicKey& public_key) {
  DidKey did = derive_did_key(public_key);
  // reuse the multibase payload after "did:key:"
  return "ipns:" + did.text.substr(8);
}

PublicKey ipns_name_to_public_key(const std::string& name) {
  if (name.rfind("ipns:", 0) != 0) throw Error(Errc::invalid_key, "missing ipns prefix");
  return decode_did_key(DidKey{"did:key:" + name.substr(5)});
}

Bytes IpnsRecord::signing_bytes() const {
  std::string seq = std::to_string(sequence);
  return length_prefixed({to_bytes(name), to_bytes(value.text), to_bytes(seq)});
}

namespace {

json record_to_json(const IpnsRecord& r) {
  return json{{"name", r.name},
              {"sequence", r.sequence},
              {"signature", base64_encode(r.signature.bytes)},
              {"value", r.value.text}};
}

IpnsRecord record_from_json(const json& j) {
  IpnsRecord r;
  r.name = j.at("name").get<std::string>();
  r.sequence = j.at("sequence").get<uint64_t>();
  r.value = Cid::parse(j.at("value").get<std::string>());
  Bytes sig = base64_decode(j.at("signature").get<std::string>());
  if (sig.size() != r.signature.bytes.size()) throw Error(Errc::parse_error, "bad signature length");
  std::copy(sig.begin(), sig.end(), r.signature.bytes.begin());
  return r;
}

bool record_signature_ok(const IpnsRecord& r) {
  PublicKey pk;
  try {
    pk = ipns_name_to_public_key(r.name);
  } catch (const Error&) {
    return false;
  }
  return verify_signature(pk, r.signing_bytes(), r.signature);
}

}  // namespace

IpnsRegistry::IpnsRegistry(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(*dir_ / "ipns", ec);
  if (ec) throw Error(Errc::store_error, "cannot create ipns directory: " + ec.message());
}

fs::path IpnsRegistry::record_path(const std::string& name) const {
  // "ipns:zXXXX" -> "<payload>.json"; the payload is filesystem-safe base58
  return *dir_ / "ipns" / (name.substr(5) + ".json");
}

std::optional<IpnsRecord> IpnsRegistry::load(const std::string& name) const {
  if (dir_) {
    fs::path p = record_path(name);
    if (!fs::exists(p)) return std::nullopt;
    Bytes raw = read_file(p);
    try {
      return record_from_json(json::parse(raw.begin(), raw.end()));
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, std::string("bad ipns record: ") + e.what());
    }
  }
  auto it = records_.find(name);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void IpnsRegistry::store(const IpnsRecord& record) {
  if (dir_) {
    std::string body = record_to_json(record).dump();
    write_file(record_path(record.name), to_bytes(body));
  } else {
    records_[record.name] = record;
  }
}

IpnsRecord IpnsRegistry::publish(const KeyPair& publisher, const Cid& cid, uint64_t sequence) {
  IpnsRecord record;
  record.name = ipns_name_for(publisher.public_key);
  record.value = cid;
  record.sequence = sequence;
  record.signature = sign(publisher, record.signing_bytes());

  std::lock_guard lock(mutex_);
  auto existing = load(record.name);
  if (existing && sequence <= existing->sequence) {
    throw Error(Errc::stale_sequence,
                "sequence " + std::to_string(sequence) + " <= " + std::to_string(existing->sequence));
  }
  if (!record_signature_ok(record)) {
    throw Error(Errc::record_signature_invalid, "refusing to ingest record for " + record.name);
  }
  store(record);
  return record;
}

void IpnsRegistry::ingest(const IpnsRecord& record) {
  std::lock_guard lock(mutex_);
  if (!record_signature_ok(record)) {
    throw Error(Errc::record_signature_invalid, "refusing to ingest record for " + record.name);
  }
  auto existing = load(record.name);
  if (existing && record.sequence <= existing->sequence) {
    throw Error(Errc::stale_sequence, "sequence " + std::to_string(record.sequence) +
                                          " <= " + std::to_string(existing->sequence));
  }
  store(record);
}

Cid IpnsRegistry::resolve(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto record = load(name);
  if (!record) throw Error(Errc::not_found, "no record for " + name);
  if (!record_signature_ok(*record)) {
    throw Error(Errc::record_signature_invalid, "stored record for " + name + " fails verification");
  }
  return record->value;
}

uint64_t IpnsRegistry::current_sequence(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto record = load(name);
  return record ? record->sequence : 0;
}

bool IpnsRegistry::tamper_signature(const std::string& name) {
  std::lock_guard lock(mutex_);
  auto record = load(name);
  if (!record) return false;
  record->signature.bytes[0] ^= 0x01;
  store(*record);
  return true;
}

}  // namespace diap
