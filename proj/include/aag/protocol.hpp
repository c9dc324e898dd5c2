/* protocol.hpp -- commutator key agreement over a registered platform.
 *
 * Alice holds a private product a over the public tuple (a_1..a_n) and
 * publishes the conjugates a^-1 b_i a; Bob holds b over (b_1..b_m) and
 * publishes b a_j b^-1. Both sides then assemble the commutator
 * a^-1 b a b^-1, whose digest is the shared key.
 */
#pragma once

#include <cstdint>
#include <optional>

#include "aag/element.hpp"
#include "aag/rng.hpp"

namespace aag {

enum class Side : std::uint8_t { alice = 0, bob = 1 };

inline Side opposite(Side s) { return s == Side::alice ? Side::bob : Side::alice; }
inline const char* side_name(Side s) { return s == Side::alice ? "alice" : "bob"; }

// Public generator tuples. Identity generators are rejected: they contribute
// nothing and make instances trivially solvable.
struct PublicParams {
    PlatformPtr platform;
    std::vector<Element> alice_generators;
    std::vector<Element> bob_generators;
    // When false, private words use positive letters only.
    bool allow_inverses = true;

    const std::vector<Element>& generators(Side s) const {
        return s == Side::alice ? alice_generators : bob_generators;
    }
    void validate() const;
    Bytes serialize() const;
    static PublicParams deserialize(std::span<const std::uint8_t> data,
                                    const ContractionBudget& budget = {});
};

// One side's private word: signed indices into that side's generator tuple,
// free of adjacent cancellations.
struct PrivateKey {
    Side side = Side::alice;
    std::vector<Gen> index_word;
};

// The conjugate tuple one side publishes. Entries are canonical elements, so
// no spelling of the private word leaks.
struct Transmission {
    Side side = Side::alice; // sender
    std::vector<Element> elements;
};

struct SharedKey {
    Element element;
    Digest key_bytes;
};

// Deterministic private word from a seed: signed indices drawn uniformly via
// splitmix64, redrawing any letter that would cancel its predecessor.
PrivateKey gen_private(const PublicParams& params, Side side, std::size_t length,
                       std::uint64_t seed);

Element evaluate_private(const PublicParams& params, const PrivateKey& priv,
                         const ContractionBudget& budget = {});

Transmission make_transmission(const PublicParams& params, const PrivateKey& priv,
                               const ContractionBudget& budget = {});
// Same computation from an already-evaluated private element.
Transmission transmission_from_element(const PublicParams& params, Side side,
                                       const Element& private_element,
                                       const ContractionBudget& budget = {});

SharedKey derive_shared(const PrivateKey& priv, const Transmission& received,
                        const PublicParams& params, const ContractionBudget& budget = {});

// The 32-byte digest (SHA-256 over platform id byte then canonical key bytes).
Bytes serialize_key(const SharedKey& key);

// Random public tuples: reduced words of the requested length over the
// platform generators, resampled while they evaluate to the identity.
PublicParams random_params(PlatformPtr platform, std::size_t alice_count, std::size_t bob_count,
                           std::size_t generator_word_length, std::uint64_t seed,
                           bool allow_inverses = true, const ContractionBudget& budget = {});
Word random_generator_word(const Platform& platform, std::size_t length, SplitMix64& rng);

// Deterministic binary log of one full session; the golden-fixture format.
struct Transcript {
    PublicParams params;
    Transmission alice_transmission;
    Transmission bob_transmission;
    Digest alice_digest{};
    Digest bob_digest{};
};

Bytes serialize_transcript(const Transcript& t);
Transcript deserialize_transcript(std::span<const std::uint8_t> data,
                                  const ContractionBudget& budget = {});

// Both sides of a session in one process.
struct LocalExchange {
    Transcript transcript;
    SharedKey alice_key;
    SharedKey bob_key;
};
LocalExchange run_local_exchange(const PublicParams& params, const PrivateKey& alice,
                                 const PrivateKey& bob, const ContractionBudget& budget = {});

} // namespace aag
