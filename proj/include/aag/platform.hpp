/* platform.hpp -- concrete group platforms behind one uniform interface. */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aag/affine.hpp"
#include "aag/nucleus.hpp"
#include "aag/portrait.hpp"
#include "aag/words.hpp"

namespace aag {

enum class PlatformKind { automaton, affine };

// Wire-stable platform family ids.
namespace platform_id {
constexpr std::uint8_t grigorchuk = 0x01;
constexpr std::uint8_t g_omega = 0x02;
constexpr std::uint8_t basilica = 0x03;
constexpr std::uint8_t universal = 0x04;
constexpr std::uint8_t hanoi = 0x05;
constexpr std::uint8_t affine = 0x06;
} // namespace platform_id

// Eventually periodic direction sequence over {0,1,2}.
struct GOmegaSpec {
    std::string preperiod; // possibly empty, characters '0'..'2'
    std::string period;    // nonempty, characters '0'..'2'
};

// Tower configuration: discs[i] is the peg holding disc i, disc 0 smallest.
struct HanoiConfig {
    int pegs = 3;
    std::vector<Letter> discs;
};

// Immutable descriptor of one platform instance. Automaton platforms own the
// computational group (and a nucleus when contracting); the affine platform
// owns its generator transformations.
class Platform {
public:
    std::uint8_t id() const { return id_; }
    const std::string& name() const { return name_; }
    PlatformKind kind() const { return kind_; }
    bool contracting() const { return contracting_; }
    // Family parameters serialized for wire comparison (empty for the fixed
    // platforms).
    const Bytes& wire_config() const { return config_; }

    std::size_t generator_count() const;
    std::string generator_name(std::size_t index) const;

    const AutomatonGroup& group() const;
    const Nucleus& nucleus() const;

    std::size_t dimension() const { return dimension_; }
    const std::vector<AffineElement>& affine_generators() const;

    // Words over the platform's user-facing generators (signed indices).
    Word make_word(std::span<const Gen> generator_letters) const;
    Word parse_word(std::string_view text) const;
    std::string word_to_string(const Word& w) const;
    Word multiply(const Word& a, const Word& b) const;
    Word invert(const Word& w) const;
    bool word_is_trivial(const Word& w, const ContractionBudget& budget = {}) const;
    bool words_equal(const Word& a, const Word& b, const ContractionBudget& budget = {}) const;

    AffineElement evaluate_affine(const Word& w) const;

    static std::shared_ptr<const Platform> make_automaton(std::uint8_t id, std::string name,
                                                          AutomatonGroup group, bool contracting,
                                                          Bytes config,
                                                          const ContractionBudget& budget = {});
    static std::shared_ptr<const Platform> make_affine(std::vector<AffineElement> generators);

private:
    Platform() = default;

    std::uint8_t id_ = 0;
    std::string name_;
    PlatformKind kind_ = PlatformKind::automaton;
    bool contracting_ = false;
    Bytes config_;
    std::shared_ptr<const AutomatonGroup> group_;
    std::shared_ptr<const Nucleus> nucleus_;
    std::size_t dimension_ = 0;
    std::vector<AffineElement> affine_generators_;
};

using PlatformPtr = std::shared_ptr<const Platform>;

// The five-state binary automaton with states a,b,c,d,e.
PlatformPtr grigorchuk();
// Level-parametrized family; realized as a finite automaton whose b/c/d
// states carry the level phase of the eventually periodic sequence.
PlatformPtr g_omega(const GOmegaSpec& spec);
// Three states a,b,e over the binary alphabet; torsion-free, free reduction
// only.
PlatformPtr basilica();
// Five states over the six-letter alphabet {0,1}x{0,1,2}; the pair (x,y) is
// the letter 3x+y.
PlatformPtr universal();
// k(k-1)/2 peg-swap states over k letters; contracting (and nucleus-backed)
// for k = 3 only.
PlatformPtr hanoi(int pegs);
PlatformPtr affine_platform(std::vector<AffineElement> generators);
// The two 2x2 unipotent demo generators shipped as the affine sample.
PlatformPtr sanov_affine();

// Game-semantics oracle for the Hanoi action: move the smallest disc on peg
// i or j to the other one; a configuration with neither peg occupied is
// returned unchanged.
HanoiConfig hanoi_legal_move(const HanoiConfig& config, int i, int j);

// Registry helpers.
struct PlatformFamily {
    std::uint8_t id;
    std::string_view name;
};
const std::vector<PlatformFamily>& platform_families();
// Default instance by family name (g_omega -> (eps, "012"), hanoi -> 3 pegs,
// affine -> the demo generators).
PlatformPtr default_platform(std::string_view name);
PlatformPtr platform_from_wire(std::uint8_t id, std::span<const std::uint8_t> config);
// Key=value text config (see docs/formats.md for the grammar).
PlatformPtr load_platform_config(const std::string& text);

} // namespace aag
