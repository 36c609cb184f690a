/*
 * Copyright 2026 The Trident Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "trident/protocol/messages.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <sstream>

#include "trident/common/error.hpp"

namespace trident::protocol {

namespace {

constexpr std::uint8_t kMagic[4] = {'I', 'M', 'P', 'L'};

bool is_setup(const TranscriptEntry& e) { return e.type == MsgType::kKeyMaterial; }

}  // namespace

const char* to_string(Role r) {
  switch (r) {
    case Role::kClient: return "client";
    case Role::kCloud: return "cloud";
    case Role::kProxy: return "proxy";
  }
  return "?";
}

Role parse_role(const std::string& s) {
  if (s == "client") return Role::kClient;
  if (s == "cloud") return Role::kCloud;
  if (s == "proxy") return Role::kProxy;
  throw ParameterError("unknown role '" + s + "' (expected client, cloud or proxy)");
}

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::kHello: return "Hello";
    case MsgType::kKeyMaterial: return "KeyMaterial";
    case MsgType::kInputCiphertexts: return "InputCiphertexts";
    case MsgType::kMaskedResult: return "MaskedResult";
    case MsgType::kGarbledBundle: return "GarbledBundle";
    case MsgType::kEvalLabels: return "EvalLabels";
    case MsgType::kActivationCiphertexts: return "ActivationCiphertexts";
    case MsgType::kFinalResult: return "FinalResult";
    case MsgType::kDone: return "Done";
  }
  return "?";
}

const char* to_string(Traffic t) { return t == Traffic::kOffline ? "offline" : "online"; }

Traffic traffic_of(MsgType t) {
  return t == MsgType::kKeyMaterial || t == MsgType::kGarbledBundle ? Traffic::kOffline : Traffic::kOnline;
}

const char* phase_of(MsgType t) {
  switch (t) {
    case MsgType::kKeyMaterial: return "setup";
    case MsgType::kInputCiphertexts: return "input";
    case MsgType::kMaskedResult: return "linear";
    case MsgType::kGarbledBundle:
    case MsgType::kEvalLabels:
    case MsgType::kActivationCiphertexts: return "activation";
    case MsgType::kFinalResult: return "result";
    case MsgType::kHello:
    case MsgType::kDone: return "control";
  }
  return "?";
}

Bytes encode_frame(const Message& m) {
  ByteWriter w;
  w.bytes(kMagic);
  w.u8(kFrameVersion);
  w.u8(static_cast<std::uint8_t>(m.type));
  w.u64(kRoutingBytes + m.body.size());
  w.u8(static_cast<std::uint8_t>(m.from));
  w.u8(static_cast<std::uint8_t>(m.to));
  w.u8(m.sub);
  w.u8(m.reencrypted ? 1 : 0);
  w.u32(m.inference);
  w.u32(m.stage);
  w.bytes(m.body);
  return w.take();
}

FrameHeader decode_frame_header(std::span<const std::uint8_t> header) {
  ByteReader r(header);
  const auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw IntegrityError("frame: bad magic");
  if (r.u8() != kFrameVersion) throw IntegrityError("frame: unsupported version");
  const auto type = r.u8();
  if (type > static_cast<std::uint8_t>(MsgType::kDone)) throw IntegrityError("frame: unknown message type");
  const auto len = r.u64();
  if (len < kRoutingBytes) throw IntegrityError("frame: payload too short");
  return {static_cast<MsgType>(type), len};
}

Message decode_frame_payload(MsgType type, std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  Message m;
  m.type = type;
  const auto from = r.u8(), to = r.u8();
  if (from > 2 || to > 2) throw IntegrityError("frame: unknown role");
  m.from = static_cast<Role>(from);
  m.to = static_cast<Role>(to);
  m.sub = r.u8();
  m.reencrypted = r.u8() != 0;
  m.inference = r.u32();
  m.stage = r.u32();
  const auto body = r.bytes(r.remaining());
  m.body.assign(body.begin(), body.end());
  return m;
}

Message decode_frame(std::span<const std::uint8_t> frame) {
  if (frame.size() < kFrameHeaderBytes) throw IntegrityError("frame: truncated header");
  const auto h = decode_frame_header(frame.first(kFrameHeaderBytes));
  if (frame.size() - kFrameHeaderBytes != h.length) throw IntegrityError("frame: length mismatch");
  return decode_frame_payload(h.type, frame.subspan(kFrameHeaderBytes));
}

void Transcript::record(const Message& m, std::size_t frame_bytes) {
  TranscriptEntry e{m.from,      m.to,   m.type, m.sub, m.inference, m.stage, m.reencrypted,
                    traffic_of(m.type), frame_bytes, {}};
  if (keep_payloads_) e.payload = m.body;
  entries_.push_back(std::move(e));
}

std::size_t Transcript::bytes(const std::function<bool(const TranscriptEntry&)>& pred) const {
  std::size_t n = 0;
  for (const auto& e : entries_) {
    if (pred(e)) n += e.bytes;
  }
  return n;
}

std::size_t Transcript::total_bytes() const {
  return bytes([](const TranscriptEntry&) { return true; });
}

std::size_t Transcript::client_inference_bytes(std::uint32_t inference) const {
  return bytes([&](const TranscriptEntry& e) {
    return !is_setup(e) && e.type != MsgType::kDone && e.inference == inference &&
           (e.from == Role::kClient || e.to == Role::kClient);
  });
}

std::size_t Transcript::inference_bytes(std::uint32_t inference) const {
  return bytes([&](const TranscriptEntry& e) {
    return !is_setup(e) && e.type != MsgType::kDone && e.inference == inference;
  });
}

std::size_t Transcript::reencrypted_messages(std::uint32_t inference) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [&](const auto& e) {
    return e.reencrypted && e.inference == inference && !is_setup(e);
  }));
}

bool Transcript::payload_contains(Role to, std::span<const std::uint8_t> needle) const {
  if (needle.empty()) return false;
  for (const auto& e : entries_) {
    if (e.to != to) continue;
    if (std::search(e.payload.begin(), e.payload.end(), needle.begin(), needle.end()) != e.payload.end()) {
      return true;
    }
  }
  return false;
}

std::string Transcript::to_csv() const {
  std::ostringstream os;
  os << "party,peer,message,phase,inference,stage,traffic,bytes\n";
  for (const auto& e : entries_) {
    os << to_string(e.from) << ',' << to_string(e.to) << ',' << to_string(e.type) << ','
       << phase_of(e.type) << ',' << e.inference << ',' << e.stage << ',' << to_string(e.traffic) << ','
       << e.bytes << '\n';
  }
  return os.str();
}

std::string Transcript::summary() const {
  std::map<std::string, std::array<std::size_t, 2>> rows;
  for (const auto& e : entries_) {
    const std::string key = std::string(to_string(e.from)) + " -> " + to_string(e.to);
    rows[key][static_cast<int>(e.traffic)] += e.bytes;
  }
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-18s %14s %14s\n", "link", "offline bytes", "online bytes");
  os << line;
  for (const auto& [k, v] : rows) {
    std::snprintf(line, sizeof line, "%-18s %14zu %14zu\n", k.c_str(), v[0], v[1]);
    os << line;
  }
  std::snprintf(line, sizeof line, "%-18s %14zu\n", "total", total_bytes());
  os << line;
  return os.str();
}

}  // namespace trident::protocol
