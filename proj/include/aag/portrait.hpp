/* portrait.hpp -- canonical decorated subtrees for contracting groups. */
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aag/bytes.hpp"
#include "aag/nucleus.hpp"
#include "aag/words.hpp"

namespace aag {

// A decorated subtree node: internal nodes carry the first-level permutation
// and k children; leaves carry a nucleus id.
struct PortraitNode {
    bool leaf = true;
    std::uint8_t leaf_id = 0;
    Perm perm;                          // internal only, size k
    std::vector<PortraitNode> children; // internal only, size k

    bool operator==(const PortraitNode&) const = default;

    std::size_t node_count() const;
    std::size_t depth() const; // leaf-only tree has depth 0
};

// Canonical portrait: every branch expands exactly until its section is a
// nucleus element, so equal group elements have bit-identical portraits.
struct Portrait {
    std::uint8_t platform_id = 0;
    std::uint8_t alphabet_size = 0;
    std::uint8_t nucleus_size = 0;
    PortraitNode root;

    bool operator==(const Portrait&) const = default;
};

// Fixed-depth view: permutations at internal nodes down to the requested
// depth, section words at the frontier. Display/debug only, never wire data.
struct DepthPortraitNode {
    Perm perm;
    std::vector<DepthPortraitNode> children;
    Word section; // set on frontier leaves only
    bool leaf = false;
};

DepthPortraitNode portrait(const AutomatonGroup& group, const Word& w, std::size_t depth);

Portrait canonical_portrait(const AutomatonGroup& group, const Nucleus& nucleus, const Word& w,
                            const ContractionBudget& budget = {});

Portrait portrait_multiply(const AutomatonGroup& group, const Nucleus& nucleus, const Portrait& a,
                           const Portrait& b, const ContractionBudget& budget = {});
Portrait portrait_invert(const AutomatonGroup& group, const Nucleus& nucleus, const Portrait& p);

// Wire layout: 'A' 'G', version 0x01, platform id, alphabet size, nucleus
// size, then a depth-first preorder node stream; internal node = 0x00 + k
// permutation images + k children in letter order, leaf = 0x01 + nucleus id.
Bytes serialize_portrait(const Portrait& p);
Portrait deserialize_portrait(std::span<const std::uint8_t> bytes, std::uint8_t platform_id,
                              std::uint8_t alphabet_size, const Nucleus& nucleus,
                              const ContractionBudget& budget = {});
// Self-delimiting variant for element streams; advances `reader`.
Portrait read_portrait(ByteReader& reader, std::uint8_t platform_id, std::uint8_t alphabet_size,
                       const Nucleus& nucleus, const ContractionBudget& budget = {});

} // namespace aag
