#include "aag/protocol.hpp"

#include <algorithm>

namespace aag {

void PublicParams::validate() const {
    if (!platform) throw PlatformError("params: no platform");
    if (alice_generators.empty() || bob_generators.empty())
        throw PlatformError("params: generator tuples must be nonempty");
    for (const auto* tuple : {&alice_generators, &bob_generators}) {
        for (const Element& g : *tuple) {
            if (g.platform()->id() != platform->id() ||
                g.platform()->wire_config() != platform->wire_config())
                throw PlatformError("params: generator from a different platform");
            if (g.is_identity())
                throw PlatformError("params: identity generators are not allowed");
        }
    }
}

Bytes PublicParams::serialize() const {
    Bytes out;
    put_u8(out, platform->id());
    put_u16(out, static_cast<std::uint16_t>(platform->wire_config().size()));
    out.insert(out.end(), platform->wire_config().begin(), platform->wire_config().end());
    put_u8(out, allow_inverses ? 0x01 : 0x00);
    put_u16(out, static_cast<std::uint16_t>(alice_generators.size()));
    put_u16(out, static_cast<std::uint16_t>(bob_generators.size()));
    for (const Element& g : alice_generators) g.write(out);
    for (const Element& g : bob_generators) g.write(out);
    return out;
}

PublicParams PublicParams::deserialize(std::span<const std::uint8_t> data,
                                       const ContractionBudget& budget) {
    ByteReader r(data);
    std::uint8_t id = r.u8();
    std::uint16_t config_len = r.u16();
    auto config = r.take(config_len);
    PublicParams params;
    params.platform = platform_from_wire(id, config);
    std::uint8_t flags = r.u8();
    if (flags > 1) throw ParseError(ParseCode::bad_count, "params: unknown flag bits");
    params.allow_inverses = flags & 0x01;
    std::uint16_t n = r.u16();
    std::uint16_t m = r.u16();
    if (n == 0 || m == 0 || n > 1024 || m > 1024)
        throw ParseError(ParseCode::bad_count, "params: generator count out of range");
    for (std::uint16_t i = 0; i < n; ++i)
        params.alice_generators.push_back(Element::read(params.platform, r, budget));
    for (std::uint16_t i = 0; i < m; ++i)
        params.bob_generators.push_back(Element::read(params.platform, r, budget));
    r.expect_end();
    params.validate();
    return params;
}

PrivateKey gen_private(const PublicParams& params, Side side, std::size_t length,
                       std::uint64_t seed) {
    if (length == 0) throw PlatformError("private word length must be positive");
    const std::size_t count = params.generators(side).size();
    SplitMix64 rng(seed);
    PrivateKey priv;
    priv.side = side;
    priv.index_word.reserve(length);
    while (priv.index_word.size() < length) {
        Gen g;
        if (params.allow_inverses) {
            std::uint64_t v = rng.below(2 * count);
            g = Gen{static_cast<State>(v >> 1), (v & 1) != 0};
        } else {
            g = Gen{static_cast<State>(rng.below(count)), false};
        }
        if (!priv.index_word.empty() && priv.index_word.back().state == g.state &&
            priv.index_word.back().inverse != g.inverse)
            continue; // would cancel; redraw
        priv.index_word.push_back(g);
    }
    return priv;
}

Element evaluate_private(const PublicParams& params, const PrivateKey& priv,
                         const ContractionBudget& budget) {
    const auto& gens = params.generators(priv.side);
    Element acc = Element::identity(params.platform);
    for (const Gen& g : priv.index_word) {
        if (g.state >= gens.size()) throw PlatformError("private index out of range");
        const Element& base = gens[g.state];
        acc = acc.mul(g.inverse ? base.inverse() : base, budget);
    }
    return acc;
}

Transmission transmission_from_element(const PublicParams& params, Side side,
                                       const Element& private_element,
                                       const ContractionBudget& budget) {
    Transmission t;
    t.side = side;
    const auto& peer = params.generators(opposite(side));
    t.elements.reserve(peer.size());
    Element inv = private_element.inverse();
    for (const Element& g : peer) {
        // Alice sends a^-1 b_i a, Bob sends b a_j b^-1
        Element conj = side == Side::alice ? inv.mul(g, budget).mul(private_element, budget)
                                           : private_element.mul(g, budget).mul(inv, budget);
        t.elements.push_back(std::move(conj));
    }
    return t;
}

Transmission make_transmission(const PublicParams& params, const PrivateKey& priv,
                               const ContractionBudget& budget) {
    return transmission_from_element(params, priv.side,
                                     evaluate_private(params, priv, budget), budget);
}

SharedKey derive_shared(const PrivateKey& priv, const Transmission& received,
                        const PublicParams& params, const ContractionBudget& budget) {
    if (received.side != opposite(priv.side))
        throw PlatformError("derive: transmission comes from the wrong side");
    if (received.elements.size() != params.generators(priv.side).size())
        throw PlatformError("derive: transmission length does not match generator tuple");
    // substitute the received conjugates into the private word
    Element assembled = Element::identity(params.platform);
    for (const Gen& g : priv.index_word) {
        if (g.state >= received.elements.size())
            throw PlatformError("derive: private index out of range");
        const Element& r = received.elements[g.state];
        assembled = assembled.mul(g.inverse ? r.inverse() : r, budget);
    }
    Element own = evaluate_private(params, priv, budget);
    // Alice: K = a^-1 (b a b^-1); Bob: K = (a^-1 b a) b^-1
    Element key = priv.side == Side::alice ? own.inverse().mul(assembled, budget)
                                           : assembled.mul(own.inverse(), budget);
    return SharedKey{key, key.key_digest()};
}

Bytes serialize_key(const SharedKey& key) {
    return Bytes(key.key_bytes.begin(), key.key_bytes.end());
}

Word random_generator_word(const Platform& platform, std::size_t length, SplitMix64& rng) {
    const std::size_t count = platform.generator_count();
    std::vector<Gen> letters;
    letters.reserve(length);
    while (letters.size() < length) {
        std::uint64_t v = rng.below(2 * count);
        Gen g{static_cast<State>(v >> 1), (v & 1) != 0};
        if (!letters.empty() && letters.back().state == g.state &&
            letters.back().inverse != g.inverse)
            continue;
        letters.push_back(g);
    }
    return platform.make_word(letters);
}

PublicParams random_params(PlatformPtr platform, std::size_t alice_count, std::size_t bob_count,
                           std::size_t generator_word_length, std::uint64_t seed,
                           bool allow_inverses, const ContractionBudget& budget) {
    SplitMix64 rng(seed);
    PublicParams params;
    params.platform = platform;
    params.allow_inverses = allow_inverses;
    auto draw = [&]() {
        for (;;) {
            Word w = random_generator_word(*platform, generator_word_length, rng);
            Element e = Element::from_word(platform, w, budget);
            if (!e.is_identity()) return e;
        }
    };
    for (std::size_t i = 0; i < alice_count; ++i) params.alice_generators.push_back(draw());
    for (std::size_t i = 0; i < bob_count; ++i) params.bob_generators.push_back(draw());
    params.validate();
    return params;
}

namespace {

constexpr std::uint8_t kTranscriptMagic[4] = {0x41, 0x41, 0x47, 0x54}; // "AAGT"
constexpr std::uint8_t kTranscriptVersion = 0x01;

void write_transmission(Bytes& out, const Transmission& t) {
    put_u8(out, static_cast<std::uint8_t>(t.side));
    put_u16(out, static_cast<std::uint16_t>(t.elements.size()));
    for (const Element& e : t.elements) e.write(out);
}

Transmission read_transmission(ByteReader& r, const PlatformPtr& platform, std::size_t expected,
                               const ContractionBudget& budget) {
    Transmission t;
    std::uint8_t side = r.u8();
    if (side > 1) throw ParseError(ParseCode::bad_count, "transcript: bad side byte");
    t.side = static_cast<Side>(side);
    std::uint16_t count = r.u16();
    if (count != expected)
        throw ParseError(ParseCode::bad_count, "transcript: transmission length mismatch");
    for (std::uint16_t i = 0; i < count; ++i)
        t.elements.push_back(Element::read(platform, r, budget));
    return t;
}

} // namespace

Bytes serialize_transcript(const Transcript& t) {
    Bytes out(std::begin(kTranscriptMagic), std::end(kTranscriptMagic));
    put_u8(out, kTranscriptVersion);
    Bytes params = t.params.serialize();
    put_u32(out, static_cast<std::uint32_t>(params.size()));
    out.insert(out.end(), params.begin(), params.end());
    write_transmission(out, t.alice_transmission);
    write_transmission(out, t.bob_transmission);
    out.insert(out.end(), t.alice_digest.begin(), t.alice_digest.end());
    out.insert(out.end(), t.bob_digest.begin(), t.bob_digest.end());
    return out;
}

Transcript deserialize_transcript(std::span<const std::uint8_t> data,
                                  const ContractionBudget& budget) {
    ByteReader r(data);
    auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kTranscriptMagic)))
        throw ParseError(ParseCode::bad_magic, "transcript: bad magic");
    if (r.u8() != kTranscriptVersion)
        throw ParseError(ParseCode::bad_version, "transcript: bad version");
    std::uint32_t params_len = r.u32();
    auto params_bytes = r.take(params_len);
    Transcript t{PublicParams::deserialize(params_bytes, budget), {}, {}, {}, {}};
    t.alice_transmission =
        read_transmission(r, t.params.platform, t.params.bob_generators.size(), budget);
    if (t.alice_transmission.side != Side::alice)
        throw ParseError(ParseCode::bad_count, "transcript: first transmission must be alice's");
    t.bob_transmission =
        read_transmission(r, t.params.platform, t.params.alice_generators.size(), budget);
    if (t.bob_transmission.side != Side::bob)
        throw ParseError(ParseCode::bad_count, "transcript: second transmission must be bob's");
    auto ad = r.take(32);
    auto bd = r.take(32);
    std::copy(ad.begin(), ad.end(), t.alice_digest.begin());
    std::copy(bd.begin(), bd.end(), t.bob_digest.begin());
    r.expect_end();
    return t;
}

LocalExchange run_local_exchange(const PublicParams& params, const PrivateKey& alice,
                                 const PrivateKey& bob, const ContractionBudget& budget) {
    if (alice.side != Side::alice || bob.side != Side::bob)
        throw PlatformError("local exchange: keys must cover both sides");
    LocalExchange ex{Transcript{params, {}, {}, {}, {}},
                     SharedKey{Element::identity(params.platform), {}},
                     SharedKey{Element::identity(params.platform), {}}};
    ex.transcript.alice_transmission = make_transmission(params, alice, budget);
    ex.transcript.bob_transmission = make_transmission(params, bob, budget);
    ex.alice_key = derive_shared(alice, ex.transcript.bob_transmission, params, budget);
    ex.bob_key = derive_shared(bob, ex.transcript.alice_transmission, params, budget);
    ex.transcript.alice_digest = ex.alice_key.key_bytes;
    ex.transcript.bob_digest = ex.bob_key.key_bytes;
    return ex;
}

} // namespace aag
