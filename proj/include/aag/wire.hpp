/* wire.hpp -- length-prefixed binary protocol for the two-party exchange.
 *
 * Each direction starts with the magic "AAGK", then frames of
 * u32 big-endian payload length, a type byte, and the payload. The session is
 * a strict ping-pong: HELLO, PARAMS, TRANSMIT, CONFIRM, each initiator-first.
 */
#pragma once

#include <memory>

#include "aag/protocol.hpp"

namespace aag {

constexpr std::uint32_t kMaxPayload = 16u << 20;
constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::uint8_t kWireMagic[4] = {0x41, 0x41, 0x47, 0x4B}; // "AAGK"

namespace msg {
constexpr std::uint8_t hello = 0x01;
constexpr std::uint8_t params = 0x02;
constexpr std::uint8_t transmit = 0x03;
constexpr std::uint8_t confirm = 0x04;
constexpr std::uint8_t error = 0x7F;
} // namespace msg

struct WireMessage {
    std::uint8_t type = 0;
    Bytes payload;

    bool operator==(const WireMessage&) const = default;
};

// Blocking reliable byte stream.
class ByteStream {
public:
    virtual ~ByteStream() = default;
    // Returns the number of bytes read, 0 on orderly EOF.
    virtual std::size_t read_some(std::uint8_t* out, std::size_t max) = 0;
    virtual void write_all(std::span<const std::uint8_t> data) = 0;
};

void read_exact(ByteStream& stream, std::span<std::uint8_t> out);

Bytes encode_frame(const WireMessage& m);
// Decodes one frame from a buffer; sets consumed. Typed errors on any
// malformation; never reads past the buffer.
WireMessage decode_frame(std::span<const std::uint8_t> data, std::size_t& consumed);
void send_frame(ByteStream& stream, const WireMessage& m);
WireMessage read_frame(ByteStream& stream);

enum class WireRole : std::uint8_t { initiator, responder };
inline std::uint8_t role_byte(WireRole r) { return r == WireRole::initiator ? 0x49 : 0x52; }

enum class SessionPhase : std::uint8_t { hello, params, transmit, confirm, done, failed };

// Phase tracker; any out-of-order frame fails the session permanently.
struct SessionState {
    WireRole role = WireRole::initiator;
    SessionPhase phase = SessionPhase::hello;
    std::uint8_t platform = 0;
    Bytes transcript_bytes; // every frame both sent and received, in order
};

struct ExchangeOptions {
    // Responder adopts initiator-sent params instead of requiring byte
    // equality with its own.
    bool adopt_params = false;
    ContractionBudget budget;
};

struct ExchangeOutcome {
    SharedKey key;
    PublicParams params; // possibly adopted
    Transmission sent;
    Transmission received;
    SessionState state;
};

// Runs the full exchange over the stream. Throws WireError with a distinct
// code per failure class; an ERROR frame is sent to the peer when possible.
ExchangeOutcome run_exchange(ByteStream& stream, WireRole role, const PublicParams& params,
                             const PrivateKey& priv, const ExchangeOptions& options = {});

// In-memory duplex pipe (two connected endpoints), for tests and local runs.
std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> memory_duplex();

// TCP transports.
class TcpListener {
public:
    explicit TcpListener(std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    std::uint16_t port() const { return port_; }
    std::unique_ptr<ByteStream> accept_one();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

std::unique_ptr<ByteStream> tcp_connect(const std::string& host, std::uint16_t port);

} // namespace aag
