#include <random>
#include <string>
#include <thread>
#include <vector>

#include <doctest.h>

#include "ppgmotion/wire.hpp"

using namespace ppg;
using wire::RecordKind;
using wire::WireRecord;

TEST_CASE("encode: protocol framing byte strings") {
    CHECK(wire::encode({RecordKind::Sensor, 1234}) == "1234,");
    CHECK(wire::encode({RecordKind::Time, 0}) == "2147483648,");
    CHECK(wire::encode({RecordKind::Time, 5000}) == "2147488648,");
}

TEST_CASE("encode rejects values with bit 31 set") {
    CHECK_THROWS(wire::encode({RecordKind::Sensor, 0x80000000u}));
    CHECK_THROWS(wire::encode({RecordKind::Time, 0xFFFFFFFFu}));
}

TEST_CASE("decode: tokens split across arbitrary chunk boundaries") {
    wire::StreamDecoder decoder;
    std::vector<WireRecord> records;
    for (const char* chunk : {"12", "34,21474", "83648,"}) {
        for (const auto& r : decoder.push(chunk)) records.push_back(r);
    }
    REQUIRE(records.size() == 2);
    CHECK(records[0] == WireRecord{RecordKind::Sensor, 1234});
    CHECK(records[1] == WireRecord{RecordKind::Time, 0});
    CHECK(decoder.malformed_count() == 0);
}

TEST_CASE("decode: malformed token dropped, stream realigns") {
    wire::StreamDecoder decoder;
    const auto records = decoder.push("abc,77,");
    REQUIRE(records.size() == 1);
    CHECK(records[0] == WireRecord{RecordKind::Sensor, 77});
    CHECK(decoder.malformed_count() == 1);
}

TEST_CASE("decode: overflowing and empty tokens count as malformed") {
    wire::StreamDecoder decoder;
    auto records = decoder.push("99999999999,,42,");
    REQUIRE(records.size() == 1);
    CHECK(records[0].value == 42);
    CHECK(decoder.malformed_count() == 2);
    decoder.finish();
    CHECK(decoder.malformed_count() == 2);
    // trailing partial token counts once the stream ends
    wire::StreamDecoder tail;
    tail.push("123");
    tail.finish();
    CHECK(tail.malformed_count() == 1);
}

TEST_CASE("round trip: random records under random fragmentation") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::uint32_t> value(0, 0x7FFFFFFFu);
    std::uniform_int_distribution<int> kind(0, 1);
    std::vector<WireRecord> sent;
    std::string bytes;
    for (int i = 0; i < 10000; ++i) {
        WireRecord r{kind(rng) ? RecordKind::Time : RecordKind::Sensor, value(rng)};
        sent.push_back(r);
        bytes += wire::encode(r);
    }
    wire::StreamDecoder decoder;
    std::vector<WireRecord> got;
    std::uniform_int_distribution<std::size_t> chunk_len(1, 17);
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const std::size_t len = std::min(chunk_len(rng), bytes.size() - pos);
        for (const auto& r : decoder.push({bytes.data() + pos, len})) got.push_back(r);
        pos += len;
    }
    CHECK(got == sent);
    CHECK(decoder.malformed_count() == 0);
}

TEST_CASE("kind preservation: bit 31 of the carrier decides the record kind") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<std::uint32_t> carrier(0, 0xFFFFFFFFu);
    wire::StreamDecoder decoder;
    for (int i = 0; i < 2000; ++i) {
        const std::uint32_t c = carrier(rng);
        const auto records = decoder.push(std::to_string(c) + ",");
        REQUIRE(records.size() == 1);
        CHECK((records[0].kind == RecordKind::Time) == ((c & wire::kKindBit) != 0));
        CHECK(records[0].value == (c & ~wire::kKindBit));
    }
}

TEST_CASE("loopback session: full session delivers one row per sensor record") {
    std::vector<double> samples(6000);
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = 50000.0 + static_cast<double>(i % 97);

    wire::SessionConfig config;
    config.session_limit_s = 60.0;
    config.sample_rate = 100.0;

    wire::TcpListener listener("127.0.0.1", 0);
    std::thread device([&] {
        auto client = listener.accept_one();
        wire::serve_session(std::move(client), config, samples);
    });
    const auto result = wire::run_receiver("127.0.0.1", listener.port(), 100.0, 60.0);
    device.join();

    CHECK(result.recording.size() == samples.size());
    CHECK(result.malformed == 0);
    CHECK(!result.truncated);
    // replayed values survive exactly and times are strictly increasing
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(result.recording.value[i] == samples[i]);
        if (i > 0) CHECK(result.recording.time_s[i] > result.recording.time_s[i - 1]);
    }
    CHECK(result.session_duration_s == doctest::Approx(60.0).epsilon(0.01));
}

TEST_CASE("loopback session: session limit caps the stream") {
    const std::vector<double> samples(12000, 1000.0);
    wire::SessionConfig config;
    config.session_limit_s = 30.0;  // half of the available samples
    config.sample_rate = 100.0;
    wire::TcpListener listener("127.0.0.1", 0);
    wire::SessionStats stats;
    std::thread device([&] {
        auto client = listener.accept_one();
        stats = wire::serve_session(std::move(client), config, samples);
    });
    const auto result = wire::run_receiver("127.0.0.1", listener.port(), 100.0, 30.0);
    device.join();
    CHECK(stats.sensor_records == 3000);
    CHECK(result.recording.size() == 3000);
    CHECK(!result.truncated);
}

TEST_CASE("loopback session: device killed mid-session flags truncation") {
    const std::vector<double> samples(1000, 42.0);  // 10 s worth at 100 Hz
    wire::SessionConfig config;
    config.session_limit_s = 60.0;
    config.sample_rate = 100.0;
    wire::TcpListener listener("127.0.0.1", 0);
    std::thread device([&] {
        auto client = listener.accept_one();
        wire::serve_session(std::move(client), config, samples);  // closes after 10 s of data
    });
    const auto result = wire::run_receiver("127.0.0.1", listener.port(), 100.0, 60.0);
    device.join();
    CHECK(result.recording.size() == 1000);
    CHECK(result.truncated);
}

TEST_CASE("device survives an early client disconnect and serves again") {
    const std::vector<double> samples(60000, 7.0);
    wire::SessionConfig config;
    config.session_limit_s = 600.0;
    config.sample_rate = 100.0;
    wire::TcpListener listener("127.0.0.1", 0);
    wire::SessionStats first, second;
    std::thread device([&] {
        first = wire::serve_session(listener.accept_one(), config, samples);
        second = wire::serve_session(listener.accept_one(), config, samples);
    });
    {
        auto probe = wire::tcp_connect("127.0.0.1", listener.port());
        char buf[256];
        probe.read_some(buf, sizeof(buf));
        probe.close();  // walk away mid-stream
    }
    const auto result = wire::run_receiver("127.0.0.1", listener.port(), 100.0, 0.0);
    device.join();
    CHECK(first.client_disconnected);
    CHECK(!second.client_disconnected);
    CHECK(result.recording.size() == 60000);
}

TEST_CASE("time beacons decode as non-decreasing timestamps") {
    const std::vector<double> samples(2000, 5.0);
    wire::SessionConfig config;
    config.session_limit_s = 20.0;
    config.sample_rate = 100.0;
    wire::TcpListener listener("127.0.0.1", 0);
    std::thread device([&] {
        auto client = listener.accept_one();
        wire::serve_session(std::move(client), config, samples);
    });
    // raw decode, watching the Time records themselves
    auto stream = wire::tcp_connect("127.0.0.1", listener.port());
    wire::StreamDecoder decoder;
    char buf[4096];
    std::uint32_t last_time = 0;
    bool monotone = true;
    std::size_t time_records = 0;
    while (true) {
        const long n = stream.read_some(buf, sizeof(buf));
        if (n <= 0) break;
        for (const auto& r : decoder.push({buf, static_cast<std::size_t>(n)})) {
            if (r.kind == RecordKind::Time) {
                if (r.value < last_time) monotone = false;
                last_time = r.value;
                ++time_records;
            }
        }
    }
    device.join();
    CHECK(monotone);
    CHECK(time_records == 200);  // one beacon per 10 sensor records
}
