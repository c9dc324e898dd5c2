#include "aag/automaton.hpp"

namespace aag {

Perm identity_perm(std::uint8_t k) {
    Perm p(k);
    for (std::uint8_t x = 0; x < k; ++x) p[x] = x;
    return p;
}

bool is_identity_perm(const Perm& p) {
    for (std::size_t x = 0; x < p.size(); ++x)
        if (p[x] != x) return false;
    return true;
}

Perm inverse_perm(const Perm& p) {
    Perm inv(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) inv[p[x]] = static_cast<Letter>(x);
    return inv;
}

Perm compose_perm(const Perm& first, const Perm& second) {
    Perm out(second.size());
    for (std::size_t x = 0; x < second.size(); ++x) out[x] = first[second[x]];
    return out;
}

MealyAutomaton::MealyAutomaton(std::uint8_t alphabet_size,
                               std::vector<std::string> state_names,
                               State identity_state,
                               std::vector<std::vector<State>> transition,
                               std::vector<std::vector<Letter>> output)
    : alphabet_size_(alphabet_size),
      state_names_(std::move(state_names)),
      identity_state_(identity_state),
      transition_(std::move(transition)),
      output_(std::move(output)) {
    const std::size_t n = state_names_.size();
    if (alphabet_size_ < 2) throw PlatformError("alphabet size must be at least 2");
    if (n == 0) throw PlatformError("automaton needs at least one state");
    if (identity_state_ >= n) throw PlatformError("identity state out of range");
    if (transition_.size() != n || output_.size() != n)
        throw PlatformError("transition/output tables must cover every state");

    output_inv_.assign(n, std::vector<Letter>(alphabet_size_, 0));
    for (std::size_t s = 0; s < n; ++s) {
        if (transition_[s].size() != alphabet_size_ || output_[s].size() != alphabet_size_)
            throw PlatformError("table row for state '" + state_names_[s] +
                                "' must cover every letter");
        std::vector<bool> hit(alphabet_size_, false);
        for (Letter x = 0; x < alphabet_size_; ++x) {
            if (transition_[s][x] >= n)
                throw PlatformError("transition target out of range");
            Letter y = output_[s][x];
            if (y >= alphabet_size_ || hit[y])
                throw PlatformError("output row for state '" + state_names_[s] +
                                    "' is not a bijection");
            hit[y] = true;
            output_inv_[s][y] = x;
        }
    }
    for (Letter x = 0; x < alphabet_size_; ++x) {
        if (output_[identity_state_][x] != x || transition_[identity_state_][x] != identity_state_)
            throw PlatformError("identity state must fix letters and stay put");
    }
}

} // namespace aag
