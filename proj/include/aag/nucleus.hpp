/* nucleus.hpp -- finite section-closed core of a contracting group. */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aag/words.hpp"

namespace aag {

// The finite set of elements into which all sections eventually fall.
// Elements are stored as reduced representative words, identity first, the
// rest ordered by (length, lexicographic); ids index this order and appear as
// portrait leaf labels on the wire.
struct Nucleus {
    std::vector<Word> elements;
    std::vector<Perm> root_perms;                        // by id
    std::vector<std::vector<std::uint8_t>> section_table; // [id][letter] -> id
    std::vector<std::uint8_t> inverse_table;              // [id] -> id
    // product_table[a][b] = id of elements[a]*elements[b], or -1 when the
    // product leaves the nucleus.
    std::vector<std::vector<std::int16_t>> product_table;
    // One-level signature (root perm + section ids) -> id; signatures are
    // injective over nucleus elements since perm and sections determine the
    // element.
    std::unordered_map<std::string, std::uint8_t> signature_index;

    std::size_t size() const { return elements.size(); }
    std::uint8_t identity_id() const { return 0; }

    static std::string signature(const Perm& perm, const std::vector<std::uint8_t>& child_ids);
    std::optional<std::uint8_t> find_signature(const Perm& perm,
                                               const std::vector<std::uint8_t>& child_ids) const;
};

// Closure of {identity, generators, inverses} under sections, inverses, and
// the limit elements of pairwise products (elements whose iterated sections
// cycle without entering the current set). Throws BudgetError when the
// candidate set outgrows the budget, which is the signature of a
// non-contracting automaton.
Nucleus compute_nucleus(const AutomatonGroup& group, const ContractionBudget& budget = {});

} // namespace aag
