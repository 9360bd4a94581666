// diap-cpp: decentralized agent identity and authenticated messaging
// Copyright 2026 The diap-cpp Authors.
// SPDX-License-Identifier: Apache-2.0
#include "diap/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "diap/errors.hpp"

namespace diap {

namespace {

void write_all(int fd, const uint8_t* data, size_t len) {
  while (len > 0) {
    ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::channel_closed, std::string("send: ") + std::strerror(errno));
    }
    data += n;
    len -= static_cast<size_t>(n);
  }
}

// reads exactly len bytes; returns bytes read so far on EOF
size_t read_exact(int fd, uint8_t* data, size_t len) {
  size_t done = 0;
  while (done < len) {
    ssize_t n = ::recv(fd, data + done, len - done, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::channel_closed, std::string("recv: ") + std::strerror(errno));
    }
    if (n == 0) break;
    done += static_cast<size_t>(n);
  }
  return done;
}

}  // namespace

void write_frame(int fd, ByteSpan body) {
  if (body.size() > kMaxFrameBytes) {
    throw Error(Errc::protocol_error, "frame exceeds the size cap");
  }
  Bytes header;
  append_u32_be(header, static_cast<uint32_t>(body.size()));
  write_all(fd, header.data(), header.size());
  if (!body.empty()) write_all(fd, body.data(), body.size());
}

std::optional<Bytes> read_frame(int fd) {
  uint8_t header[4];
  size_t got = read_exact(fd, header, sizeof header);
  if (got == 0) return std::nullopt;  // clean EOF between frames
  if (got < sizeof header) throw Error(Errc::protocol_error, "truncated frame header");
  uint32_t len = read_u32_be(ByteSpan(header, sizeof header));
  if (len > kMaxFrameBytes) throw Error(Errc::protocol_error, "announced frame exceeds the size cap");
  Bytes body(len);
  if (read_exact(fd, body.data(), len) < len) {
    throw Error(Errc::protocol_error, "truncated frame body");
  }
  return body;
}

int listen_loopback(uint16_t& port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error(Errc::io_error, std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd, 16) < 0) {
    int saved = errno;
    ::close(fd);
    throw Error(Errc::io_error, std::string("bind/listen: ") + std::strerror(saved));
  }
  socklen_t len = sizeof addr;
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0) {
    port = ntohs(addr.sin_port);
  }
  return fd;
}

int accept_client(int listen_fd) {
  for (;;) {
    int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd >= 0) return fd;
    if (errno == EINTR) continue;
    return -1;  // listener shut down
  }
}

int connect_loopback(const std::string& host, uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error(Errc::io_error, std::string("socket: ") + std::strerror(errno));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw Error(Errc::peer_unreachable, "bad address " + host);
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    int saved = errno;
    ::close(fd);
    throw Error(Errc::peer_unreachable,
                host + ":" + std::to_string(port) + ": " + std::strerror(saved));
  }
  return fd;
}

void shutdown_and_close(int fd) {
  if (fd < 0) return;
  ::shutdown(fd, SHUT_RDWR);
  ::close(fd);
}

}  // namespace diap
