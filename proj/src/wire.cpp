#include "ppgmotion/wire.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

namespace ppg::wire {

std::string encode(const WireRecord& record) {
    if (record.value >= kKindBit)
        throw std::invalid_argument("wire encode: value must be below 2^31");
    const std::uint32_t carrier =
        record.kind == RecordKind::Time ? (record.value | kKindBit) : record.value;
    return std::to_string(carrier) + ",";
}

std::vector<WireRecord> StreamDecoder::push(std::string_view bytes) {
    std::vector<WireRecord> out;
    for (char ch : bytes) {
        if (ch == ',') {
            if (!bad_ && digits_ > 0 && acc_ <= 0xffffffffull) {
                const auto carrier = static_cast<std::uint32_t>(acc_);
                out.push_back({(carrier & kKindBit) ? RecordKind::Time : RecordKind::Sensor,
                               carrier & ~kKindBit});
            } else {
                ++malformed_;
            }
            acc_ = 0;
            digits_ = 0;
            bad_ = false;
        } else if (ch >= '0' && ch <= '9' && !bad_) {
            acc_ = acc_ * 10 + static_cast<std::uint64_t>(ch - '0');
            if (++digits_ > 10 || acc_ > 0xffffffffull) bad_ = true;
        } else {
            bad_ = true;
        }
    }
    return out;
}

void StreamDecoder::finish() {
    if (digits_ > 0 || bad_) {
        ++malformed_;
        acc_ = 0;
        digits_ = 0;
        bad_ = false;
    }
}

// ---- sockets ----

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

TcpStream::~TcpStream() { close(); }

long TcpStream::read_some(char* buf, std::size_t len) {
    if (fd_ < 0) return -1;
    return ::recv(fd_, buf, len, 0);
}

bool TcpStream::write_all(std::string_view bytes) {
    const char* data = bytes.data();
    std::size_t left = bytes.size();
    while (left > 0) {
        const auto sent = ::send(fd_, data, left, MSG_NOSIGNAL);
        if (sent <= 0) return false;
        data += sent;
        left -= static_cast<std::size_t>(sent);
    }
    return true;
}

void TcpStream::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void TcpStream::set_nodelay() {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw std::runtime_error("tcp listen: socket() failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw std::runtime_error("tcp listen: bad host address " + host);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd_);
        throw std::runtime_error("tcp listen: bind failed on " + host + ":" + std::to_string(port));
    }
    if (::listen(fd_, 4) != 0) {
        ::close(fd_);
        throw std::runtime_error("tcp listen: listen failed");
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() { close(); }

void TcpListener::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpStream TcpListener::accept_one() {
    const int client = ::accept(fd_, nullptr, nullptr);
    if (client < 0) throw std::runtime_error("tcp listen: accept failed");
    return TcpStream(client);
}

TcpStream tcp_connect(const std::string& host, std::uint16_t port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("tcp connect: socket() failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw std::runtime_error("tcp connect: bad host address " + host);
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw std::runtime_error("tcp connect: connect failed to " + host + ":" +
                                 std::to_string(port));
    }
    return TcpStream(fd);
}

// ---- device session ----

SessionStats serve_session(TcpStream client, const SessionConfig& config,
                           const std::vector<double>& samples) {
    SessionStats stats;
    client.set_nodelay();
    const double rate = config.sample_rate;
    const auto limit = static_cast<std::size_t>(std::llround(config.session_limit_s * rate));
    const std::size_t count = std::min(samples.size(), limit);
    const auto start = std::chrono::steady_clock::now();

    std::string buffer;
    for (std::size_t i = 0; i < count; ++i) {
        if (config.time_beacon_every > 0 && i % config.time_beacon_every == 0) {
            const auto ms = static_cast<std::uint32_t>(
                std::llround(static_cast<double>(i) * 1000.0 / rate));
            buffer += encode({RecordKind::Time, std::min(ms, kKindBit - 1)});
            ++stats.time_records;
        }
        const double clamped = std::clamp(std::round(samples[i]), 0.0, 2147483647.0);
        buffer += encode({RecordKind::Sensor, static_cast<std::uint32_t>(clamped)});
        ++stats.sensor_records;

        if (buffer.size() >= 4096 || i + 1 == count) {
            if (!client.write_all(buffer)) {
                stats.client_disconnected = true;
                return stats;
            }
            buffer.clear();
        }
        if (config.pace) {
            const auto due = start + std::chrono::microseconds(
                                         static_cast<long long>(1e6 * static_cast<double>(i) / rate));
            std::this_thread::sleep_until(due);
        }
    }
    return stats;
}

// ---- receiver ----

ReceiverResult run_receiver(const std::string& host, std::uint16_t port, double sample_rate,
                            double expected_duration_s) {
    if (!(sample_rate > 0.0)) throw std::invalid_argument("receiver: bad sample rate");
    TcpStream stream = tcp_connect(host, port);

    ReceiverResult result;
    result.recording.sample_rate = sample_rate;
    result.recording.source_id = host + ":" + std::to_string(port);

    StreamDecoder decoder;
    double last_time_s = 0.0;
    std::size_t since_beacon = 0;
    bool socket_error = false;

    char buf[4096];
    while (true) {
        const long n = stream.read_some(buf, sizeof(buf));
        if (n == 0) break;
        if (n < 0) {
            socket_error = true;
            break;
        }
        for (const WireRecord& rec : decoder.push({buf, static_cast<std::size_t>(n)})) {
            ++result.record_count;
            if (rec.kind == RecordKind::Time) {
                last_time_s = static_cast<double>(rec.value) / 1000.0;
                since_beacon = 0;
            } else {
                const double t =
                    last_time_s + static_cast<double>(since_beacon) / sample_rate;
                ++since_beacon;
                result.recording.time_s.push_back(t);
                result.recording.value.push_back(static_cast<double>(rec.value));
            }
        }
    }
    decoder.finish();
    result.malformed = decoder.malformed_count();
    if (!result.recording.time_s.empty())
        result.session_duration_s =
            result.recording.time_s.back() - result.recording.time_s.front() + 1.0 / sample_rate;
    result.truncated =
        socket_error ||
        (expected_duration_s > 0.0 && result.session_duration_s < expected_duration_s - 1.0);
    return result;
}

}  // namespace ppg::wire
