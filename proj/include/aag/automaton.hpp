/* automaton.hpp -- invertible Mealy automata acting on the k-ary rooted tree. */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aag/errors.hpp"

namespace aag {

using State = std::uint16_t;
using Letter = std::uint8_t; // tree alphabet letter, 0..k-1

using Perm = std::vector<Letter>; // perm[x] = image of x

Perm identity_perm(std::uint8_t k);
bool is_identity_perm(const Perm& p);
Perm inverse_perm(const Perm& p);
// Composition with `second` applied first: result(x) = first(second(x)).
Perm compose_perm(const Perm& first, const Perm& second);

// Finite transition/output tables (state, letter) -> (state, letter).
// Each state's output row must be a bijection of the alphabet, and the
// distinguished identity state must fix every letter and stay put, so every
// state acts as an automorphism of the rooted tree.
class MealyAutomaton {
public:
    MealyAutomaton(std::uint8_t alphabet_size,
                   std::vector<std::string> state_names,
                   State identity_state,
                   std::vector<std::vector<State>> transition,
                   std::vector<std::vector<Letter>> output);

    std::uint8_t alphabet_size() const { return alphabet_size_; }
    std::size_t state_count() const { return state_names_.size(); }
    State identity_state() const { return identity_state_; }
    const std::string& state_name(State s) const { return state_names_[s]; }
    const std::vector<std::string>& state_names() const { return state_names_; }

    State transition(State s, Letter x) const { return transition_[s][x]; }
    Letter output(State s, Letter x) const { return output_[s][x]; }
    // The unique x with output(s, x) == y.
    Letter output_inverse(State s, Letter y) const { return output_inv_[s][y]; }

private:
    std::uint8_t alphabet_size_;
    std::vector<std::string> state_names_;
    State identity_state_;
    std::vector<std::vector<State>> transition_;
    std::vector<std::vector<Letter>> output_;
    std::vector<std::vector<Letter>> output_inv_;
};

} // namespace aag
