#include "aag/wire.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

namespace aag {

void read_exact(ByteStream& stream, std::span<std::uint8_t> out) {
    std::size_t got = 0;
    while (got < out.size()) {
        std::size_t n = stream.read_some(out.data() + got, out.size() - got);
        if (n == 0) throw WireError(WireCode::truncated, "stream closed mid-message");
        got += n;
    }
}

Bytes encode_frame(const WireMessage& m) {
    if (m.payload.size() > kMaxPayload)
        throw WireError(WireCode::frame_too_large, "payload exceeds 16 MiB cap");
    Bytes out;
    put_u32(out, static_cast<std::uint32_t>(m.payload.size()));
    put_u8(out, m.type);
    out.insert(out.end(), m.payload.begin(), m.payload.end());
    return out;
}

WireMessage decode_frame(std::span<const std::uint8_t> data, std::size_t& consumed) {
    if (data.size() < 5) throw WireError(WireCode::truncated, "frame header truncated");
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = len << 8 | data[i];
    if (len > kMaxPayload) throw WireError(WireCode::frame_too_large, "frame over cap");
    if (data.size() < 5 + static_cast<std::size_t>(len))
        throw WireError(WireCode::truncated, "frame payload truncated");
    WireMessage m;
    m.type = data[4];
    m.payload.assign(data.begin() + 5, data.begin() + 5 + len);
    consumed = 5 + len;
    return m;
}

void send_frame(ByteStream& stream, const WireMessage& m) {
    stream.write_all(encode_frame(m));
}

WireMessage read_frame(ByteStream& stream) {
    std::uint8_t header[5];
    read_exact(stream, header);
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = len << 8 | header[i];
    if (len > kMaxPayload) throw WireError(WireCode::frame_too_large, "frame over cap");
    WireMessage m;
    m.type = header[4];
    m.payload.resize(len);
    read_exact(stream, m.payload);
    return m;
}

namespace {

[[noreturn]] void fail(ByteStream& stream, SessionState& state, WireCode code,
                       const std::string& what) {
    state.phase = SessionPhase::failed;
    try {
        WireMessage err;
        err.type = msg::error;
        err.payload.push_back(static_cast<std::uint8_t>(code));
        err.payload.insert(err.payload.end(), what.begin(), what.end());
        send_frame(stream, err);
    } catch (...) {
        // peer already gone; the local error below still reports the cause
    }
    throw WireError(code, what);
}

// Reads the next frame, enforcing the ping-pong ordering. An ERROR frame from
// the peer aborts with its code; any unexpected type fails the session.
WireMessage expect_frame(ByteStream& stream, SessionState& state, std::uint8_t expected_type) {
    WireMessage m;
    try {
        m = read_frame(stream);
    } catch (const WireError&) {
        state.phase = SessionPhase::failed;
        throw;
    }
    Bytes framed = encode_frame(m);
    state.transcript_bytes.insert(state.transcript_bytes.end(), framed.begin(), framed.end());
    if (m.type == msg::error) {
        state.phase = SessionPhase::failed;
        WireCode code = WireCode::peer_error;
        std::string text = "peer error";
        if (!m.payload.empty()) {
            code = static_cast<WireCode>(m.payload[0]);
            text = "peer reported: " + std::string(m.payload.begin() + 1, m.payload.end());
        }
        throw WireError(code, text);
    }
    if (m.type != expected_type)
        fail(stream, state, WireCode::out_of_order,
             "unexpected frame type " + std::to_string(m.type) + " in phase " +
                 std::to_string(static_cast<int>(state.phase)));
    return m;
}

void send_tracked(ByteStream& stream, SessionState& state, const WireMessage& m) {
    Bytes framed = encode_frame(m);
    state.transcript_bytes.insert(state.transcript_bytes.end(), framed.begin(), framed.end());
    stream.write_all(framed);
}

Bytes confirm_value(const Digest& key, WireRole role) {
    Bytes input(key.begin(), key.end());
    input.push_back(role_byte(role));
    Digest d = sha256(input);
    return Bytes(d.begin(), d.begin() + 8);
}

Transmission parse_transmit(const WireMessage& m, const PublicParams& params, Side sender,
                            const ContractionBudget& budget) {
    ByteReader r(m.payload);
    std::uint16_t count = r.u16();
    const std::size_t expected = params.generators(opposite(sender)).size();
    if (count != expected)
        throw WireError(WireCode::malformed, "transmission count does not match params");
    Transmission t;
    t.side = sender;
    try {
        for (std::uint16_t i = 0; i < count; ++i)
            t.elements.push_back(Element::read(params.platform, r, budget));
        r.expect_end();
    } catch (const ParseError& e) {
        throw WireError(WireCode::malformed, std::string("bad transmission: ") + e.what());
    }
    return t;
}

} // namespace

ExchangeOutcome run_exchange(ByteStream& stream, WireRole role, const PublicParams& params_in,
                             const PrivateKey& priv, const ExchangeOptions& options) {
    params_in.validate();
    SessionState state;
    state.role = role;
    state.platform = params_in.platform->id();
    const bool lead = role == WireRole::initiator;

    // stream magic, once per direction
    stream.write_all(kWireMagic);
    std::uint8_t peer_magic[4];
    read_exact(stream, peer_magic);
    if (std::memcmp(peer_magic, kWireMagic, 4) != 0)
        fail(stream, state, WireCode::bad_magic, "bad stream magic");

    // HELLO
    WireMessage hello{msg::hello, {kWireVersion, params_in.platform->id()}};
    auto check_hello = [&](const WireMessage& m) {
        if (m.payload.size() != 2)
            fail(stream, state, WireCode::malformed, "hello must carry version and platform id");
        if (m.payload[0] != kWireVersion)
            fail(stream, state, WireCode::version_mismatch, "wire version mismatch");
        if (m.payload[1] != params_in.platform->id())
            fail(stream, state, WireCode::platform_mismatch, "platform id mismatch");
    };
    if (lead) {
        send_tracked(stream, state, hello);
        check_hello(expect_frame(stream, state, msg::hello));
    } else {
        check_hello(expect_frame(stream, state, msg::hello));
        send_tracked(stream, state, hello);
    }
    state.phase = SessionPhase::params;

    // PARAMS: initiator proposes; responder echoes byte-equal (or adopted)
    PublicParams params = params_in;
    Bytes own_params = params_in.serialize();
    if (lead) {
        send_tracked(stream, state, WireMessage{msg::params, own_params});
        WireMessage echo = expect_frame(stream, state, msg::params);
        if (echo.payload != own_params)
            fail(stream, state, WireCode::params_mismatch, "responder params differ");
    } else {
        WireMessage offer = expect_frame(stream, state, msg::params);
        if (offer.payload != own_params) {
            if (!options.adopt_params)
                fail(stream, state, WireCode::params_mismatch,
                     "initiator params differ from pre-agreed params");
            try {
                params = PublicParams::deserialize(offer.payload, options.budget);
            } catch (const std::exception& e) {
                fail(stream, state, WireCode::malformed, std::string("bad params: ") + e.what());
            }
            if (params.platform->id() != params_in.platform->id())
                fail(stream, state, WireCode::platform_mismatch, "adopted params change platform");
            if (params.generators(priv.side).size() != params_in.generators(priv.side).size())
                fail(stream, state, WireCode::params_mismatch,
                     "adopted params do not fit the private key");
            own_params = offer.payload;
        }
        send_tracked(stream, state, WireMessage{msg::params, own_params});
    }
    state.phase = SessionPhase::transmit;

    // TRANSMIT
    Transmission sent = make_transmission(params, priv, options.budget);
    Bytes sent_payload;
    put_u16(sent_payload, static_cast<std::uint16_t>(sent.elements.size()));
    for (const Element& e : sent.elements) e.write(sent_payload);
    Transmission received;
    auto read_transmit = [&]() {
        WireMessage m = expect_frame(stream, state, msg::transmit);
        try {
            received = parse_transmit(m, params, opposite(priv.side), options.budget);
        } catch (const WireError& e) {
            fail(stream, state, e.code(), e.what());
        }
    };
    if (lead) {
        send_tracked(stream, state, WireMessage{msg::transmit, sent_payload});
        read_transmit();
    } else {
        read_transmit();
        send_tracked(stream, state, WireMessage{msg::transmit, sent_payload});
    }
    state.phase = SessionPhase::confirm;

    // derive + CONFIRM (role-bound truncated digest, detects divergence
    // without putting key bytes on the wire)
    SharedKey key = derive_shared(priv, received, params, options.budget);
    Bytes own_confirm = confirm_value(key.key_bytes, role);
    Bytes peer_expected = confirm_value(key.key_bytes, lead ? WireRole::responder
                                                            : WireRole::initiator);
    auto check_confirm = [&](const WireMessage& m) {
        if (m.payload.size() != 8)
            fail(stream, state, WireCode::malformed, "confirm must carry 8 bytes");
        if (m.payload != peer_expected)
            fail(stream, state, WireCode::confirm_mismatch,
                 "confirm mismatch: keys diverged");
    };
    if (lead) {
        send_tracked(stream, state, WireMessage{msg::confirm, own_confirm});
        check_confirm(expect_frame(stream, state, msg::confirm));
    } else {
        check_confirm(expect_frame(stream, state, msg::confirm));
        send_tracked(stream, state, WireMessage{msg::confirm, own_confirm});
    }
    state.phase = SessionPhase::done;

    return ExchangeOutcome{std::move(key), std::move(params), std::move(sent),
                           std::move(received), std::move(state)};
}

namespace {

// One direction of the in-memory pipe.
struct Pipe {
    std::mutex mutex;
    std::condition_variable cv;
    std::deque<std::uint8_t> data;
    bool closed = false;

    void write(std::span<const std::uint8_t> bytes) {
        std::lock_guard lock(mutex);
        if (closed) throw WireError(WireCode::io, "pipe closed");
        data.insert(data.end(), bytes.begin(), bytes.end());
        cv.notify_all();
    }

    std::size_t read(std::uint8_t* out, std::size_t max) {
        std::unique_lock lock(mutex);
        cv.wait(lock, [&] { return !data.empty() || closed; });
        std::size_t n = std::min(max, data.size());
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = data.front();
            data.pop_front();
        }
        return n;
    }

    void close() {
        std::lock_guard lock(mutex);
        closed = true;
        cv.notify_all();
    }
};

class MemoryStream : public ByteStream {
public:
    MemoryStream(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out)
        : in_(std::move(in)), out_(std::move(out)) {}
    ~MemoryStream() override {
        in_->close();
        out_->close();
    }
    std::size_t read_some(std::uint8_t* out, std::size_t max) override {
        return in_->read(out, max);
    }
    void write_all(std::span<const std::uint8_t> data) override { out_->write(data); }

private:
    std::shared_ptr<Pipe> in_;
    std::shared_ptr<Pipe> out_;
};

class FdStream : public ByteStream {
public:
    explicit FdStream(int fd) : fd_(fd) {}
    ~FdStream() override {
        if (fd_ >= 0) ::close(fd_);
    }
    std::size_t read_some(std::uint8_t* out, std::size_t max) override {
        ssize_t n = ::recv(fd_, out, max, 0);
        if (n < 0) throw WireError(WireCode::io, "socket read failed");
        return static_cast<std::size_t>(n);
    }
    void write_all(std::span<const std::uint8_t> data) override {
        std::size_t sent = 0;
        while (sent < data.size()) {
            ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
            if (n <= 0) throw WireError(WireCode::io, "socket write failed");
            sent += static_cast<std::size_t>(n);
        }
    }

private:
    int fd_;
};

} // namespace

std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> memory_duplex() {
    auto a_to_b = std::make_shared<Pipe>();
    auto b_to_a = std::make_shared<Pipe>();
    return {std::make_unique<MemoryStream>(b_to_a, a_to_b),
            std::make_unique<MemoryStream>(a_to_b, b_to_a)};
}

TcpListener::TcpListener(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw WireError(WireCode::io, "socket() failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw WireError(WireCode::io, "bind failed on port " + std::to_string(port));
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    if (::listen(fd_, 1) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw WireError(WireCode::io, "listen failed");
    }
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<ByteStream> TcpListener::accept_one() {
    int client = ::accept(fd_, nullptr, nullptr);
    if (client < 0) throw WireError(WireCode::io, "accept failed");
    return std::make_unique<FdStream>(client);
}

std::unique_ptr<ByteStream> tcp_connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &result) != 0)
        throw WireError(WireCode::io, "cannot resolve " + host);
    int fd = -1;
    for (addrinfo* ai = result; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0) throw WireError(WireCode::io, "cannot connect to " + host);
    return std::make_unique<FdStream>(fd);
}

} // namespace aag
