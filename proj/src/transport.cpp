#include "comkex/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include "comkex/errors.hpp"

namespace comkex::wire {

namespace {

[[noreturn]] void sys_fail(const std::string& what)
{
    fail(Errc::Transport, what + ": " + std::strerror(errno));
}

struct Channel {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::uint8_t> bytes;
    bool closed = false;
};

class MemoryTransport final : public Transport {
public:
    MemoryTransport(std::shared_ptr<Channel> in, std::shared_ptr<Channel> out)
        : in_(std::move(in)), out_(std::move(out))
    {
    }
    ~MemoryTransport() override { close(); }

    void send(std::span<const std::uint8_t> bytes) override
    {
        std::lock_guard lock(out_->mu);
        if (out_->closed)
            fail(Errc::Transport, "send on closed channel");
        out_->bytes.insert(out_->bytes.end(), bytes.begin(), bytes.end());
        out_->cv.notify_all();
    }

    std::size_t receive(std::span<std::uint8_t> buffer) override
    {
        std::unique_lock lock(in_->mu);
        in_->cv.wait(lock, [&] { return !in_->bytes.empty() || in_->closed; });
        const std::size_t n = std::min(buffer.size(), in_->bytes.size());
        std::copy_n(in_->bytes.begin(), n, buffer.begin());
        in_->bytes.erase(in_->bytes.begin(), in_->bytes.begin() + static_cast<std::ptrdiff_t>(n));
        return n;
    }

    void close() override
    {
        std::lock_guard lock(out_->mu);
        out_->closed = true;
        out_->cv.notify_all();
    }

private:
    std::shared_ptr<Channel> in_;
    std::shared_ptr<Channel> out_;
};

void set_timeouts(int fd, int timeout_ms)
{
    timeval tv{};
    tv.tv_sec = timeout_ms / 1000;
    tv.tv_usec = (timeout_ms % 1000) * 1000;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

addrinfo* resolve(const std::string& host, std::uint16_t port, bool passive)
{
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    if (passive)
        hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res); rc != 0)
        fail(Errc::Transport, "cannot resolve " + host + ": " + ::gai_strerror(rc));
    return res;
}

}  // namespace

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_memory_pair()
{
    auto a_to_b = std::make_shared<Channel>();
    auto b_to_a = std::make_shared<Channel>();
    return {std::make_unique<MemoryTransport>(b_to_a, a_to_b), std::make_unique<MemoryTransport>(a_to_b, b_to_a)};
}

SocketTransport::~SocketTransport()
{
    if (fd_ >= 0)
        ::close(fd_);
}

void SocketTransport::send(std::span<const std::uint8_t> bytes)
{
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            sys_fail("send");
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::size_t SocketTransport::receive(std::span<std::uint8_t> buffer)
{
    for (;;) {
        ssize_t n = ::recv(fd_, buffer.data(), buffer.size(), 0);
        if (n >= 0)
            return static_cast<std::size_t>(n);
        if (errno == EINTR)
            continue;
        sys_fail("recv");
    }
}

void SocketTransport::close()
{
    if (fd_ >= 0)
        ::shutdown(fd_, SHUT_WR);
}

std::pair<std::string, std::uint16_t> split_address(const std::string& addr)
{
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos)
        fail(Errc::Transport, "address \"" + addr + "\" is not host:port");
    std::uint16_t port = 0;
    const char* first = addr.data() + colon + 1;
    const char* last = addr.data() + addr.size();
    auto [ptr, ec] = std::from_chars(first, last, port);
    if (ec != std::errc{} || ptr != last || first == last)
        fail(Errc::Transport, "bad port in \"" + addr + "\"");
    return {addr.substr(0, colon), port};
}

std::unique_ptr<SocketTransport> connect_tcp(const std::string& host, std::uint16_t port, int timeout_ms)
{
    addrinfo* res = resolve(host, port, false);
    int fd = -1;
    int last_errno = 0;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_errno = errno;
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0)
            break;
        last_errno = errno;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) {
        errno = last_errno;
        sys_fail("connect to " + host + ":" + std::to_string(port));
    }
    set_timeouts(fd, timeout_ms);
    return std::make_unique<SocketTransport>(fd);
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port)
{
    addrinfo* res = resolve(host, port, true);
    fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd_ < 0) {
        ::freeaddrinfo(res);
        sys_fail("socket");
    }
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd_, res->ai_addr, res->ai_addrlen) != 0) {
        ::freeaddrinfo(res);
        ::close(fd_);
        sys_fail("bind " + host + ":" + std::to_string(port));
    }
    ::freeaddrinfo(res);
    if (::listen(fd_, 64) != 0) {
        ::close(fd_);
        sys_fail("listen");
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener()
{
    if (fd_ >= 0)
        ::close(fd_);
}

std::unique_ptr<SocketTransport> TcpListener::accept(int timeout_ms)
{
    for (;;) {
        int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0) {
            set_timeouts(fd, timeout_ms);
            return std::make_unique<SocketTransport>(fd);
        }
        if (errno == EINTR)
            continue;
        sys_fail("accept");
    }
}

}  // namespace comkex::wire
