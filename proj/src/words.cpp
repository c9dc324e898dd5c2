#include "aag/words.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace aag {

std::string Word::key() const {
    std::string k;
    k.reserve(letters_.size() * 3);
    for (const Gen& g : letters_) {
        k.push_back(static_cast<char>(g.state >> 8));
        k.push_back(static_cast<char>(g.state & 0xFF));
        k.push_back(g.inverse ? '\1' : '\0');
    }
    return k;
}

bool Word::operator<(const Word& other) const {
    if (letters_.size() != other.letters_.size())
        return letters_.size() < other.letters_.size();
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        const Gen &a = letters_[i], &b = other.letters_[i];
        if (a.state != b.state) return a.state < b.state;
        if (a.inverse != b.inverse) return !a.inverse;
    }
    return false;
}

AutomatonGroup::AutomatonGroup(std::uint8_t platform_id, MealyAutomaton automaton,
                               RewritePolicy policy, std::vector<State> generator_states)
    : platform_id_(platform_id),
      automaton_(std::move(automaton)),
      policy_(std::move(policy)),
      generator_states_(std::move(generator_states)) {
    const std::size_t n = automaton_.state_count();
    involution_.assign(n, policy_.rules != RewriteRules::free_reduction);
    triple_of_.assign(n, -1);
    for (std::size_t t = 0; t < policy_.triples.size(); ++t) {
        for (State s : policy_.triples[t]) {
            if (s >= n) throw PlatformError("rewrite triple state out of range");
            triple_of_[s] = static_cast<std::int32_t>(t);
        }
    }
    if (generator_states_.empty()) {
        for (State s = 0; s < n; ++s)
            if (s != automaton_.identity_state()) generator_states_.push_back(s);
    }
    for (State s : generator_states_)
        if (s >= n) throw PlatformError("generator state out of range");
}

void AutomatonGroup::check_platform(const Word& w) const {
    if (w.platform_id() != platform_id_)
        throw PlatformError("word belongs to a different platform");
}

void AutomatonGroup::reduce_into(std::vector<Gen>& stack, Gen incoming) const {
    if (incoming.state == automaton_.identity_state()) return;
    if (involution_[incoming.state]) incoming.inverse = false;
    stack.push_back(incoming);
    while (stack.size() >= 2) {
        const Gen a = stack[stack.size() - 2];
        const Gen b = stack[stack.size() - 1];
        if (a.state == b.state && a.inverse != b.inverse) {
            stack.pop_back();
            stack.pop_back();
            continue;
        }
        if (a.state == b.state && involution_[a.state]) {
            stack.pop_back();
            stack.pop_back();
            continue;
        }
        if (a.state != b.state && triple_of_[a.state] >= 0 &&
            triple_of_[a.state] == triple_of_[b.state]) {
            const auto& t = policy_.triples[static_cast<std::size_t>(triple_of_[a.state])];
            State third = t[0];
            for (State s : t)
                if (s != a.state && s != b.state) third = s;
            stack.pop_back();
            stack.pop_back();
            stack.push_back(Gen{third, false});
            continue;
        }
        break;
    }
}

Word AutomatonGroup::word(std::span<const Gen> letters) const {
    std::vector<Gen> stack;
    stack.reserve(letters.size());
    for (const Gen& g : letters) {
        if (g.state >= automaton_.state_count())
            throw PlatformError("letter state out of range");
        reduce_into(stack, g);
    }
    return Word(platform_id_, std::move(stack));
}

Word AutomatonGroup::word(std::initializer_list<Gen> letters) const {
    return word(std::span<const Gen>(letters.begin(), letters.size()));
}

Word AutomatonGroup::generator_word(std::size_t generator_index, bool inverse) const {
    if (generator_index >= generator_states_.size())
        throw PlatformError("generator index out of range");
    return word({Gen{generator_states_[generator_index], inverse}});
}

Word AutomatonGroup::reduce(const Word& w) const {
    check_platform(w);
    return word(w.letters());
}

Word AutomatonGroup::multiply(const Word& a, const Word& b) const {
    check_platform(a);
    check_platform(b);
    std::vector<Gen> stack;
    stack.reserve(a.size() + b.size());
    for (const Gen& g : a.letters()) reduce_into(stack, g);
    for (const Gen& g : b.letters()) reduce_into(stack, g);
    return Word(platform_id_, std::move(stack));
}

Word AutomatonGroup::invert(const Word& w) const {
    check_platform(w);
    std::vector<Gen> stack;
    stack.reserve(w.size());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
        reduce_into(stack, Gen{it->state, !it->inverse});
    return Word(platform_id_, std::move(stack));
}

namespace {

// One step of a (possibly inverted) state at letter y: the letter image and
// the signed section. For s^-1 the automaton is read backwards through the
// output bijection: s^-1 maps y to the x with output(s, x) = y, and its
// section there is the inverse of the section of s at x.
struct Step {
    Letter image;
    Gen section;
};

Step step(const MealyAutomaton& m, Gen g, Letter y) {
    if (!g.inverse) return {m.output(g.state, y), Gen{m.transition(g.state, y), false}};
    Letter x = m.output_inverse(g.state, y);
    return {x, Gen{m.transition(g.state, x), true}};
}

} // namespace

std::vector<Letter> AutomatonGroup::apply(const Word& w, std::span<const Letter> s) const {
    check_platform(w);
    for (Letter x : s)
        if (x >= automaton_.alphabet_size()) throw PlatformError("letter out of range");
    std::vector<Letter> cur(s.begin(), s.end());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
        Gen g = *it;
        for (Letter& x : cur) {
            Step st = step(automaton_, g, x);
            x = st.image;
            g = st.section;
        }
    }
    return cur;
}

Perm AutomatonGroup::root_perm(const Word& w) const {
    check_platform(w);
    Perm p(automaton_.alphabet_size());
    for (Letter x = 0; x < automaton_.alphabet_size(); ++x) {
        Letter y = x;
        for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
            y = step(automaton_, *it, y).image;
        p[x] = y;
    }
    return p;
}

Word AutomatonGroup::section(const Word& w, Letter x) const {
    check_platform(w);
    if (x >= automaton_.alphabet_size()) throw PlatformError("letter out of range");
    // (gh)_x = g_{h(x)} h_x with the rightmost letter acting first, so thread
    // the letter from the right and collect sections in place.
    std::vector<Gen> sections(w.size());
    Letter y = x;
    for (std::size_t i = w.size(); i-- > 0;) {
        Step st = step(automaton_, w.letters()[i], y);
        sections[i] = st.section;
        y = st.image;
    }
    return word(sections);
}

bool AutomatonGroup::is_trivial(const Word& w, const ContractionBudget& budget) const {
    check_platform(w);
    Word start = reduce(w);
    std::unordered_set<std::string> seen;
    std::deque<std::pair<Word, std::size_t>> queue;
    seen.insert(start.key());
    queue.emplace_back(std::move(start), 0);
    while (!queue.empty()) {
        auto [u, depth] = std::move(queue.front());
        queue.pop_front();
        if (!is_identity_perm(root_perm(u))) return false;
        if (depth >= budget.max_depth)
            throw BudgetError("is_trivial: max recursion depth exceeded");
        for (Letter x = 0; x < automaton_.alphabet_size(); ++x) {
            Word s = section(u, x);
            if (seen.insert(s.key()).second) {
                if (seen.size() > budget.max_closure)
                    throw BudgetError("is_trivial: max closure size exceeded");
                queue.emplace_back(std::move(s), depth + 1);
            }
        }
    }
    return true;
}

bool AutomatonGroup::equal(const Word& a, const Word& b, const ContractionBudget& budget) const {
    return is_trivial(multiply(a, invert(b)), budget);
}

std::string AutomatonGroup::to_string(const Word& w) const {
    if (w.empty()) return "e";
    std::string out;
    for (const Gen& g : w.letters()) {
        if (!out.empty()) out.push_back(' ');
        out += automaton_.state_name(g.state);
        if (g.inverse) out.push_back('\'');
    }
    return out;
}

Word AutomatonGroup::parse_word(std::string_view text) const {
    std::vector<Gen> letters;
    std::size_t i = 0;
    auto match_name = [&](std::size_t pos) -> std::optional<State> {
        // longest state-name match at pos
        std::optional<State> best;
        std::size_t best_len = 0;
        for (State s = 0; s < automaton_.state_count(); ++s) {
            const std::string& name = automaton_.state_name(s);
            if (name.size() > best_len && text.substr(pos, name.size()) == name) {
                best = s;
                best_len = name.size();
            }
        }
        return best;
    };
    while (i < text.size()) {
        if (text[i] == ' ' || text[i] == '\t' || text[i] == '*' || text[i] == '.') {
            ++i;
            continue;
        }
        auto s = match_name(i);
        if (!s) throw PlatformError("unknown generator at '" + std::string(text.substr(i)) + "'");
        i += automaton_.state_name(*s).size();
        bool inv = false;
        if (i < text.size() && text[i] == '\'') {
            inv = true;
            ++i;
        } else if (text.substr(i, 3) == "^-1") {
            inv = true;
            i += 3;
        }
        letters.push_back(Gen{*s, inv});
    }
    return word(letters);
}

} // namespace aag
