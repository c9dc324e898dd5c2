/* oracles.hpp -- test-only reference implementations, independent of the
 * library's section/closure machinery. The transducer here reads the raw
 * automaton tables directly and shares no code with Word::section or
 * is_trivial. */
#pragma once

#include <vector>

#include "aag/element.hpp"
#include "aag/platform.hpp"
#include "aag/protocol.hpp"

namespace oracle {

using namespace aag;

// A word's action as a run-time transducer: one (state, inverted) pair per
// letter, advanced letter by letter straight off the tables.
struct Transducer {
    const MealyAutomaton* automaton;
    std::vector<Gen> machines; // leftmost letter last in application order

    static Transducer of(const AutomatonGroup& group, const Word& w) {
        return Transducer{&group.automaton(), w.letters()};
    }

    // Applies one tree letter; returns the output letter and advances.
    Letter advance(Letter x) {
        // rightmost machine acts first
        for (std::size_t i = machines.size(); i-- > 0;) {
            Gen& g = machines[i];
            if (!g.inverse) {
                Letter y = automaton->output(g.state, x);
                g.state = automaton->transition(g.state, x);
                x = y;
            } else {
                Letter y = automaton->output_inverse(g.state, x);
                g.state = automaton->transition(g.state, y);
                x = y;
            }
        }
        return x;
    }
};

inline std::vector<Letter> apply_reference(const AutomatonGroup& group, const Word& w,
                                           std::span<const Letter> s) {
    Transducer t = Transducer::of(group, w);
    std::vector<Letter> out;
    out.reserve(s.size());
    for (Letter x : s) out.push_back(t.advance(x));
    return out;
}

// Exhaustively compares two actions on all strings of length <= depth by
// walking the string tree with threaded transducers; exits early at the first
// difference. Cross-platform comparisons pass distinct groups.
inline bool actions_agree(const AutomatonGroup& ga, const Word& wa, const AutomatonGroup& gb,
                          const Word& wb, std::size_t depth,
                          std::vector<Letter>* witness = nullptr) {
    if (ga.alphabet_size() != gb.alphabet_size()) return false;
    struct Frame {
        Transducer a, b;
    };
    std::vector<Letter> path;
    auto walk = [&](auto&& self, const Frame& f, std::size_t remaining) -> bool {
        if (remaining == 0) return true;
        for (Letter x = 0; x < ga.alphabet_size(); ++x) {
            Frame next = f;
            Letter ya = next.a.advance(x);
            Letter yb = next.b.advance(x);
            path.push_back(x);
            if (ya != yb) {
                if (witness) *witness = path;
                return false;
            }
            if (!self(self, next, remaining - 1)) return false;
            path.pop_back();
        }
        return true;
    };
    Frame root{Transducer::of(ga, wa), Transducer::of(gb, wb)};
    return walk(walk, root, depth);
}

inline bool actions_agree(const AutomatonGroup& g, const Word& a, const Word& b,
                          std::size_t depth, std::vector<Letter>* witness = nullptr) {
    return actions_agree(g, a, g, b, depth, witness);
}

inline bool acts_trivially(const AutomatonGroup& g, const Word& w, std::size_t depth) {
    return actions_agree(g, w, g.identity_word(), depth);
}

// All strings over {0..k-1} of the exact given length, lexicographic.
inline std::vector<std::vector<Letter>> all_strings(std::uint8_t k, std::size_t length) {
    std::vector<std::vector<Letter>> out{{}};
    for (std::size_t i = 0; i < length; ++i) {
        std::vector<std::vector<Letter>> next;
        next.reserve(out.size() * k);
        for (const auto& s : out)
            for (Letter x = 0; x < k; ++x) {
                auto t = s;
                t.push_back(x);
                next.push_back(std::move(t));
            }
        out = std::move(next);
    }
    return out;
}

inline std::vector<Letter> random_string(std::uint8_t k, std::size_t length, SplitMix64& rng) {
    std::vector<Letter> s(length);
    for (auto& x : s) x = static_cast<Letter>(rng.below(k));
    return s;
}

// --- known deep relations (trivial words the rewriting cannot see) ---

// (ad)^4 and (ac)^8 on the five-state binary platform
inline Word grigorchuk_relator(const Platform& p, int which) {
    const char* text = which == 0 ? "adadadad" : "acacacacacacacac";
    return p.parse_word(text);
}

// shortest nontrivial-length relator of the basilica platform, found by
// exhaustive search over reduced words (length 8)
inline Word basilica_relator(const Platform& p) { return p.parse_word("a b a b' a' b a' b'"); }

// Inserts a trivial relator at a random position: a different spelling of the
// same element that survives reduction.
inline Word respell(const Platform& p, const Word& w, SplitMix64& rng) {
    Word relator = p.name() == "basilica" ? basilica_relator(p)
                                          : grigorchuk_relator(p, static_cast<int>(rng.below(2)));
    const auto& g = p.group();
    std::size_t cut = rng.below(w.size() + 1);
    std::vector<Gen> head(w.letters().begin(), w.letters().begin() + cut);
    std::vector<Gen> tail(w.letters().begin() + cut, w.letters().end());
    Word out = g.multiply(g.multiply(Word(w.platform_id(), head), relator),
                          Word(w.platform_id(), tail));
    return out;
}

// --- independent big-integer matrix arithmetic ---

inline std::vector<BigInt> naive_mat_vec(const IntMatrix& m, const std::vector<BigInt>& v) {
    std::vector<BigInt> out;
    for (std::size_t i = 0; i < m.n; ++i) {
        BigInt acc = 0;
        for (std::size_t j = 0; j < m.n; ++j) acc = acc + m.a[i * m.n + j] * v[j];
        out.push_back(acc);
    }
    return out;
}

inline IntMatrix naive_mat_mul(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix out;
    out.n = x.n;
    out.a.assign(x.n * x.n, 0);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j) {
            BigInt acc = 0;
            for (std::size_t t = 0; t < x.n; ++t) acc = acc + x.a[i * x.n + t] * y.a[t * x.n + j];
            out.a[i * x.n + j] = acc;
        }
    return out;
}

inline AffineElement naive_compose(const AffineElement& f, const AffineElement& s) {
    AffineElement out;
    out.matrix = naive_mat_mul(f.matrix, s.matrix);
    out.translation = naive_mat_vec(f.matrix, s.translation);
    for (std::size_t i = 0; i < out.translation.size(); ++i)
        out.translation[i] = out.translation[i] + f.translation[i];
    return out;
}

// 2x2 inverse by the closed form, for the Sanov oracle
inline AffineElement naive_invert2(const AffineElement& g) {
    const BigInt &a = g.matrix.a[0], &b = g.matrix.a[1], &c = g.matrix.a[2], &d = g.matrix.a[3];
    BigInt det = a * d - b * c;
    AffineElement out;
    out.matrix.n = 2;
    out.matrix.a = {d * det, -b * det, -c * det, a * det}; // det is +-1, so 1/det = det
    out.translation = naive_mat_vec(out.matrix, g.translation);
    out.translation[0] = -out.translation[0];
    out.translation[1] = -out.translation[1];
    return out;
}

inline const std::vector<std::string>& contracting_platform_names() {
    static const std::vector<std::string> names = {"grigorchuk", "g_omega", "basilica",
                                                   "universal", "hanoi"};
    return names;
}

} // namespace oracle
