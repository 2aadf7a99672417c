#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppgmotion/types.hpp"

namespace ppg::wire {

enum class RecordKind { Sensor = 0, Time = 1 };

// One 32-bit carrier: bit 31 high marks time data (milliseconds since the
// session started), low marks sensor data. Values are 31-bit unsigned.
struct WireRecord {
    RecordKind kind = RecordKind::Sensor;
    std::uint32_t value = 0;

    bool operator==(const WireRecord&) const = default;
};

inline constexpr std::uint32_t kKindBit = 0x80000000u;

// ASCII decimal carrier followed by a comma. Throws when value >= 2^31.
std::string encode(const WireRecord& record);

// Incremental token parser. Buffers partial tokens across arbitrary chunk
// boundaries; malformed tokens (non-digit bytes, overflow) are counted and
// parsing realigns at the next comma.
class StreamDecoder {
  public:
    std::vector<WireRecord> push(std::string_view bytes);
    std::size_t malformed_count() const { return malformed_; }
    // A trailing unterminated token counts as malformed at end of stream.
    void finish();

  private:
    std::uint64_t acc_ = 0;
    std::size_t digits_ = 0;
    bool bad_ = false;
    std::size_t malformed_ = 0;
};

// Minimal RAII wrappers over POSIX TCP sockets, shared by the device, the
// receiver and the loopback tests.
class TcpStream {
  public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept;
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;
    ~TcpStream();

    bool valid() const { return fd_ >= 0; }
    // Bytes read; 0 on orderly close, negative on error.
    long read_some(char* buf, std::size_t len);
    bool write_all(std::string_view bytes);
    void close();
    void set_nodelay();

  private:
    int fd_ = -1;
};

class TcpListener {
  public:
    // port 0 picks an ephemeral port; see port().
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }
    TcpStream accept_one();
    void close();

  private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

TcpStream tcp_connect(const std::string& host, std::uint16_t port);

struct SessionConfig {
    std::string listen_host = "127.0.0.1";
    std::uint16_t port = 0;
    double session_limit_s = 60.0;
    double sample_rate = 100.0;
    bool pace = false;           // wall-clock pacing; off streams at full speed
    std::size_t time_beacon_every = 10;  // sensor records per time record
};

struct SessionStats {
    std::size_t sensor_records = 0;
    std::size_t time_records = 0;
    bool client_disconnected = false;
};

// Serves one client session from the given sample source: interleaves Time
// beacons and Sensor records, stops at the session limit or when the client
// goes away, then closes the connection.
SessionStats serve_session(TcpStream client, const SessionConfig& config,
                           const std::vector<double>& samples);

struct ReceiverResult {
    Recording recording;
    std::size_t malformed = 0;
    bool truncated = false;
    double session_duration_s = 0.0;
    std::size_t record_count = 0;
};

// Connects, decodes until the remote closes, and pairs each sensor record
// with the latest time beacon (sample times interpolated at sample_rate).
// expected_duration_s > 0 flags sessions that end visibly early as truncated.
ReceiverResult run_receiver(const std::string& host, std::uint16_t port, double sample_rate,
                            double expected_duration_s = 0.0);

}  // namespace ppg::wire
