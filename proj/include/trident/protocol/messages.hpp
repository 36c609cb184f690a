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

#ifndef TRIDENT_PROTOCOL_MESSAGES_HPP_
#define TRIDENT_PROTOCOL_MESSAGES_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "trident/common/bytes.hpp"

namespace trident::protocol {

enum class Role : std::uint8_t { kClient = 0, kCloud = 1, kProxy = 2 };
const char* to_string(Role r);
Role parse_role(const std::string& s);

enum class MsgType : std::uint8_t {
  kHello = 0,  // transport only, never recorded
  kKeyMaterial = 1,
  kInputCiphertexts = 2,
  kMaskedResult = 3,
  kGarbledBundle = 4,
  kEvalLabels = 5,
  kActivationCiphertexts = 6,
  kFinalResult = 7,
  kDone = 8,
};
const char* to_string(MsgType t);

// Sub-kinds carried next to the type.
enum class KeyKind : std::uint8_t { kClientEval = 0, kProxySecret = 1, kProxyEval = 2 };
enum class LabelStep : std::uint8_t { kRequest = 0, kResponse = 1 };

struct Message {
  Role from = Role::kClient;
  Role to = Role::kCloud;
  MsgType type = MsgType::kHello;
  std::uint8_t sub = 0;
  std::uint32_t inference = 0;
  std::uint32_t stage = 0;
  bool reencrypted = false;  // carries the session's re-encrypted ciphertexts
  Bytes body;
};

// Frame: "IMPL", version, type, u64 LE payload length, payload. The payload
// starts with the routing header (from, to, sub, flags, inference, stage).
inline constexpr std::size_t kFrameHeaderBytes = 14;
inline constexpr std::size_t kRoutingBytes = 12;
inline constexpr std::uint8_t kFrameVersion = 1;

Bytes encode_frame(const Message& m);
struct FrameHeader {
  MsgType type;
  std::uint64_t length;
};
// Validates magic and version; throws IntegrityError otherwise.
FrameHeader decode_frame_header(std::span<const std::uint8_t> header);
Message decode_frame_payload(MsgType type, std::span<const std::uint8_t> payload);
Message decode_frame(std::span<const std::uint8_t> frame);

enum class Traffic : std::uint8_t { kOffline = 0, kOnline = 1 };
const char* to_string(Traffic t);
Traffic traffic_of(MsgType t);
const char* phase_of(MsgType t);

struct TranscriptEntry {
  Role from;
  Role to;
  MsgType type;
  std::uint8_t sub;
  std::uint32_t inference;
  std::uint32_t stage;
  bool reencrypted;
  Traffic traffic;
  std::size_t bytes;  // whole frame
  Bytes payload;      // kept only when the transcript asks for it
};

class Transcript {
 public:
  explicit Transcript(bool keep_payloads = false) : keep_payloads_(keep_payloads) {}
  void record(const Message& m, std::size_t frame_bytes);
  const std::vector<TranscriptEntry>& entries() const { return entries_; }

  std::size_t bytes(const std::function<bool(const TranscriptEntry&)>& pred) const;
  std::size_t total_bytes() const;
  // Bytes sent or received by the client for one inference (setup excluded).
  std::size_t client_inference_bytes(std::uint32_t inference) const;
  // Every byte attributed to one inference, setup excluded.
  std::size_t inference_bytes(std::uint32_t inference) const;
  std::size_t reencrypted_messages(std::uint32_t inference) const;
  // True if `needle` occurs inside any recorded payload addressed to `to`.
  bool payload_contains(Role to, std::span<const std::uint8_t> needle) const;

  // One row per message: party, peer, phase, stage, traffic, bytes.
  std::string to_csv() const;
  std::string summary() const;

 private:
  bool keep_payloads_;
  std::vector<TranscriptEntry> entries_;
};

}  // namespace trident::protocol

#endif  // TRIDENT_PROTOCOL_MESSAGES_HPP_
