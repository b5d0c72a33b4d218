#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>

namespace comkex::wire {

/// Reliable ordered byte stream. Failures throw Error(Transport).
class Transport {
public:
    virtual ~Transport() = default;

    virtual void send(std::span<const std::uint8_t> bytes) = 0;
    /// Blocks until at least one byte arrives; returns 0 at end of stream.
    virtual std::size_t receive(std::span<std::uint8_t> buffer) = 0;
    /// Signals end of stream to the peer.
    virtual void close() = 0;
};

/// Two connected in-process endpoints.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_memory_pair();

/// Connected TCP stream. Owns the descriptor.
class SocketTransport final : public Transport {
public:
    explicit SocketTransport(int fd) noexcept : fd_(fd) {}
    ~SocketTransport() override;
    SocketTransport(const SocketTransport&) = delete;
    SocketTransport& operator=(const SocketTransport&) = delete;

    void send(std::span<const std::uint8_t> bytes) override;
    std::size_t receive(std::span<std::uint8_t> buffer) override;
    void close() override;

private:
    int fd_;
};

/// "host:port" split; throws Error(Transport) on a malformed address.
std::pair<std::string, std::uint16_t> split_address(const std::string& addr);

std::unique_ptr<SocketTransport> connect_tcp(const std::string& host, std::uint16_t port, int timeout_ms = 10000);

class TcpListener {
public:
    /// Port 0 picks an ephemeral port; see port().
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const noexcept { return port_; }
    std::unique_ptr<SocketTransport> accept(int timeout_ms = 10000);

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace comkex::wire
