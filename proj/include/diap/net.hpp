// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "diap/bytes.hpp"

namespace diap {

/// Upper bound on a single frame body. A peer announcing more than this is
/// treated as a protocol violation, not a large message.
inline constexpr size_t kMaxFrameBytes = 16 * 1024 * 1024;

/// Blocking framed IO over a connected socket or socketpair fd. A frame is a
/// u32 big-endian body length followed by the body.
void write_frame(int fd, ByteSpan body);  // throws channel-closed / protocol-error

/// Returns the next frame body, or nullopt on clean EOF at a frame boundary.
/// Oversized announcements and mid-frame EOF are protocol errors.
std::optional<Bytes> read_frame(int fd);

/// Listening socket on 127.0.0.1. port 0 picks an ephemeral port; the chosen
/// port is written back.
int listen_loopback(uint16_t& port);  // throws io-error

/// Blocks for one inbound connection; returns the connected fd or -1 once the
/// listening socket has been shut down.
int accept_client(int listen_fd);

int connect_loopback(const std::string& host, uint16_t port);  // throws peer-unreachable

/// Unblocks any reader/writer, then releases the descriptor.
void shutdown_and_close(int fd);

}  // namespace diap
