/* attack.hpp -- brute-force simultaneous conjugacy search at desk scale. */
#pragma once

#include <optional>

#include "aag/protocol.hpp"

namespace aag {

// One side's search problem: find A in the span of that side's public
// generators with A^-1 b_i A = v_i (Alice orientation; mirrored for Bob),
// where v_i is the observed conjugate tuple.
struct AttackInstance {
    PublicParams params;
    Side side = Side::alice;
    std::vector<Element> targets;

    void validate() const;
};

enum class AttackStatus : std::uint8_t {
    found,            // solution returned, re-verified
    exhausted_length, // no solution among words of length <= max_length
    budget_exhausted, // node budget ran out mid-search
};

struct AttackResult {
    AttackStatus status = AttackStatus::exhausted_length;
    std::optional<std::vector<Gen>> solution; // indices into the side's tuple
    std::uint64_t nodes_explored = 0;
    double milliseconds = 0;
};

struct AttackOptions {
    unsigned threads = 1;
    // Skip equation tests for candidates whose element was already seen
    // (candidates are still enumerated and counted).
    bool dedup_elements = false;
    std::uint64_t max_nodes = std::uint64_t{1} << 22;
};

// Breadth-first enumeration of freely reduced signed words in
// length-then-lexicographic order; returns the first word satisfying every
// conjugacy equation. Deterministic for a fixed thread count.
AttackResult solve_simultaneous(const AttackInstance& instance, std::size_t max_length,
                                const ContractionBudget& budget = {},
                                const AttackOptions& options = {});

// With solutions for both sides in hand, A^-1 B A B^-1 reproduces the honest
// commutator; returns its key digest.
Digest recover_key(const std::vector<Gen>& alice_solution, const std::vector<Gen>& bob_solution,
                   const PublicParams& params, const ContractionBudget& budget = {});

// Single equation x u x^-1 = v searched over the given generator elements;
// used to compare single against simultaneous difficulty.
AttackResult single_conjugacy(const Element& u, const Element& v,
                              const std::vector<Element>& generators, std::size_t max_length,
                              const ContractionBudget& budget = {},
                              const AttackOptions& options = {});

// instance built from an honest transcript
AttackInstance instance_from_transcript(const Transcript& transcript, Side side);

} // namespace aag
