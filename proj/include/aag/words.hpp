/* words.hpp -- generator words over an automaton and the contraction-based
 * word problem: action on strings, sections, reduction, triviality. */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aag/automaton.hpp"

namespace aag {

// Guards for the section-closure machinery. Exceeding either bound raises
// BudgetError; a wrong answer is never produced instead.
struct ContractionBudget {
    std::size_t max_closure = std::size_t{1} << 20;
    std::size_t max_depth = 64;
};

// One signed letter of a generator word: an automaton state, possibly
// inverted. Inverse states are virtual; their output/transition are derived
// from the state's own tables on the fly.
struct Gen {
    State state = 0;
    bool inverse = false;

    bool operator==(const Gen&) const = default;
};

// Freely (and platform-) reduced sequence of signed letters. The empty word
// is the identity. Words are plain values; all algebra lives on
// AutomatonGroup, which stamps words with its platform id.
class Word {
public:
    Word() = default;
    Word(std::uint8_t platform_id, std::vector<Gen> letters)
        : platform_id_(platform_id), letters_(std::move(letters)) {}

    std::uint8_t platform_id() const { return platform_id_; }
    const std::vector<Gen>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    // Packed byte key for hash maps (3 bytes per letter).
    std::string key() const;

    bool operator==(const Word&) const = default;
    bool operator<(const Word& other) const; // length, then lexicographic

private:
    std::uint8_t platform_id_ = 0;
    std::vector<Gen> letters_;
};

enum class RewriteRules : std::uint8_t {
    free_reduction, // cancel s s^-1 only
    involutions,    // every generator squares to the identity
    klein,          // involutions plus Klein-four triples (xy = z within a triple)
};

// Length-reducing rewriting applied after every concatenation. Identity-state
// letters are always dropped.
struct RewritePolicy {
    RewriteRules rules = RewriteRules::free_reduction;
    // For klein: groups of three states {x, y, z} with xy = yx = z cyclically.
    std::vector<std::array<State, 3>> triples;

    static RewritePolicy free_reduction() { return {}; }
    static RewritePolicy involutions() { return {RewriteRules::involutions, {}}; }
    static RewritePolicy klein(std::vector<std::array<State, 3>> triples) {
        return {RewriteRules::klein, std::move(triples)};
    }
};

// A Mealy automaton together with a rewriting policy and a designated list of
// user-facing generator states. This is the computational group: all word
// operations, the action on strings, and the triviality decision live here.
class AutomatonGroup {
public:
    AutomatonGroup(std::uint8_t platform_id, MealyAutomaton automaton, RewritePolicy policy,
                   std::vector<State> generator_states);

    std::uint8_t platform_id() const { return platform_id_; }
    const MealyAutomaton& automaton() const { return automaton_; }
    std::uint8_t alphabet_size() const { return automaton_.alphabet_size(); }
    const RewritePolicy& rewrite_policy() const { return policy_; }
    const std::vector<State>& generator_states() const { return generator_states_; }

    // Build a reduced, platform-stamped word.
    Word word(std::span<const Gen> letters) const;
    Word word(std::initializer_list<Gen> letters) const;
    Word identity_word() const { return Word(platform_id_, {}); }
    Word generator_word(std::size_t generator_index, bool inverse = false) const;

    Word reduce(const Word& w) const;
    Word multiply(const Word& a, const Word& b) const;
    Word invert(const Word& w) const;

    // Image of the string under the word's tree automorphism; the rightmost
    // letter acts first.
    std::vector<Letter> apply(const Word& w, std::span<const Letter> s) const;
    Perm root_perm(const Word& w) const;
    // Reduced word for the section at first-level vertex x:
    // apply(w, x . s) = root_perm(w)(x) . apply(section(w, x), s).
    Word section(const Word& w, Letter x) const;

    // Section-closure decision procedure: w acts as the identity on the whole
    // tree iff every word in the closure of {w} under first-level sections has
    // a trivial root permutation.
    bool is_trivial(const Word& w, const ContractionBudget& budget = {}) const;
    bool equal(const Word& a, const Word& b, const ContractionBudget& budget = {}) const;

    std::string to_string(const Word& w) const;
    // Accepts whitespace-separated generator names or a greedy concatenation;
    // a trailing ' or ^-1 marks an inverse letter.
    Word parse_word(std::string_view text) const;

private:
    void check_platform(const Word& w) const;
    void reduce_into(std::vector<Gen>& stack, Gen incoming) const;

    std::uint8_t platform_id_;
    MealyAutomaton automaton_;
    RewritePolicy policy_;
    std::vector<State> generator_states_;
    std::vector<bool> involution_;       // by state
    std::vector<std::int32_t> triple_of_; // by state, -1 if none
};

} // namespace aag
