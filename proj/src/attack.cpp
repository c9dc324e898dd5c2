#include "aag/attack.hpp"

#include <chrono>
#include <deque>
#include <functional>
#include <thread>
#include <unordered_set>

namespace aag {

void AttackInstance::validate() const {
    params.validate();
    if (targets.size() != params.generators(opposite(side)).size())
        throw PlatformError("attack: target tuple length does not match peer generators");
    for (const Element& t : targets)
        if (t.platform()->id() != params.platform->id())
            throw PlatformError("attack: target from a different platform");
}

namespace {

Element evaluate_index_word(const PublicParams& params, Side side, std::span<const Gen> word,
                            const ContractionBudget& budget) {
    const auto& gens = params.generators(side);
    Element acc = Element::identity(params.platform);
    for (const Gen& g : word) {
        if (g.state >= gens.size()) throw PlatformError("attack: index out of range");
        acc = acc.mul(g.inverse ? gens[g.state].inverse() : gens[g.state], budget);
    }
    return acc;
}

// Candidate words are enumerated breadth-first over signed letters ordered
// (0,+), (0,-), (1,+), (1,-), ...; FIFO order is exactly
// length-then-lexicographic. Letters that would freely cancel the last one
// are never generated.
struct Searcher {
    PlatformPtr platform;
    const std::vector<Element>* bases = nullptr;
    bool signed_letters = true;
    std::size_t max_length = 0;
    std::uint64_t node_cap = 0;
    bool dedup = false;
    ContractionBudget budget;
    // test returns true when the candidate solves every equation
    std::function<bool(const Element&)> test;

    struct Node {
        std::vector<Gen> word;
        Element elem;
    };

    std::size_t letter_count() const {
        return bases->size() * (signed_letters ? 2 : 1);
    }
    Gen letter(std::size_t l) const {
        return signed_letters ? Gen{static_cast<State>(l >> 1), (l & 1) != 0}
                              : Gen{static_cast<State>(l), false};
    }

    // Explores the subtrees rooted at first letters with l % stride == offset.
    AttackResult run_worker(std::size_t offset, std::size_t stride) const {
        AttackResult result;
        result.status = AttackStatus::exhausted_length;
        if (max_length == 0) return result;
        std::unordered_set<std::string> seen;
        std::deque<Node> queue;
        auto consider = [&](Node&& node) -> bool {
            ++result.nodes_explored;
            bool fresh = true;
            if (dedup) {
                Bytes b = node.elem.bytes();
                fresh = seen.insert(std::string(b.begin(), b.end())).second;
            }
            if (fresh && test(node.elem)) {
                result.solution = node.word;
                result.status = AttackStatus::found;
                return true;
            }
            if (node.word.size() < max_length) queue.push_back(std::move(node));
            return false;
        };
        for (std::size_t l = offset; l < letter_count(); l += stride) {
            Gen g = letter(l);
            Node node{{g}, g.inverse ? (*bases)[g.state].inverse() : (*bases)[g.state]};
            if (result.nodes_explored >= node_cap) {
                result.status = AttackStatus::budget_exhausted;
                return result;
            }
            if (consider(std::move(node))) return result;
        }
        while (!queue.empty()) {
            Node parent = std::move(queue.front());
            queue.pop_front();
            for (std::size_t l = 0; l < letter_count(); ++l) {
                Gen g = letter(l);
                const Gen& last = parent.word.back();
                if (signed_letters && last.state == g.state && last.inverse != g.inverse)
                    continue; // free cancellation
                if (result.nodes_explored >= node_cap) {
                    result.status = AttackStatus::budget_exhausted;
                    return result;
                }
                std::vector<Gen> word = parent.word;
                word.push_back(g);
                Node child{std::move(word),
                           parent.elem.mul(
                               g.inverse ? (*bases)[g.state].inverse() : (*bases)[g.state],
                               budget)};
                if (consider(std::move(child))) return result;
            }
        }
        return result;
    }

    AttackResult run(unsigned threads) const {
        auto start = std::chrono::steady_clock::now();
        AttackResult combined;
        combined.status = AttackStatus::exhausted_length;
        // the empty word first (conjugation by the identity)
        combined.nodes_explored = 1;
        if (test(Element::identity(platform))) {
            combined.status = AttackStatus::found;
            combined.solution = std::vector<Gen>{};
        } else {
            std::size_t stride = std::max<std::size_t>(1, std::min<std::size_t>(threads, letter_count()));
            std::vector<AttackResult> partial(stride);
            if (stride == 1) {
                partial[0] = run_worker(0, 1);
            } else {
                std::vector<std::thread> pool;
                std::vector<std::exception_ptr> errors(stride);
                for (std::size_t w = 0; w < stride; ++w) {
                    pool.emplace_back([&, w] {
                        try {
                            partial[w] = run_worker(w, stride);
                        } catch (...) {
                            errors[w] = std::current_exception();
                        }
                    });
                }
                for (auto& t : pool) t.join();
                for (auto& e : errors)
                    if (e) std::rethrow_exception(e);
            }
            // keep the length-lex least solution over all workers
            for (const AttackResult& r : partial) {
                combined.nodes_explored += r.nodes_explored;
                if (r.status == AttackStatus::budget_exhausted &&
                    combined.status != AttackStatus::found)
                    combined.status = AttackStatus::budget_exhausted;
                if (r.solution) {
                    bool better = !combined.solution;
                    if (!better) {
                        Word a(0, *r.solution), b(0, *combined.solution);
                        better = a < b;
                    }
                    if (better) {
                        combined.solution = r.solution;
                        combined.status = AttackStatus::found;
                    }
                }
            }
        }
        auto stop = std::chrono::steady_clock::now();
        combined.milliseconds =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
                .count();
        return combined;
    }
};

} // namespace

AttackResult solve_simultaneous(const AttackInstance& instance, std::size_t max_length,
                                const ContractionBudget& budget, const AttackOptions& options) {
    instance.validate();
    const auto& own = instance.params.generators(instance.side);
    const auto& peer = instance.params.generators(opposite(instance.side));

    Searcher s;
    s.platform = instance.params.platform;
    s.bases = &own;
    s.signed_letters = instance.params.allow_inverses;
    s.max_length = max_length;
    s.node_cap = std::max<std::uint64_t>(1, options.max_nodes / std::max(1u, options.threads));
    s.dedup = options.dedup_elements;
    s.budget = budget;
    Side side = instance.side;
    const auto* targets = &instance.targets;
    s.test = [&, side, targets](const Element& cand) {
        Element inv = cand.inverse();
        for (std::size_t i = 0; i < targets->size(); ++i) {
            // Alice system: A^-1 b_i A = v_i; Bob system: B a_j B^-1 = w_j
            Element lhs = side == Side::alice
                              ? inv.mul(peer[i], budget).mul(cand, budget)
                              : cand.mul(peer[i], budget).mul(inv, budget);
            if (!(lhs == (*targets)[i])) return false;
        }
        return true;
    };

    AttackResult result = s.run(options.threads);
    if (result.solution) {
        // re-verify from scratch before surfacing
        Element cand = evaluate_index_word(instance.params, instance.side, *result.solution, budget);
        Element inv = cand.inverse();
        for (std::size_t i = 0; i < instance.targets.size(); ++i) {
            Element lhs = instance.side == Side::alice
                              ? inv.mul(peer[i], budget).mul(cand, budget)
                              : cand.mul(peer[i], budget).mul(inv, budget);
            if (!(lhs == instance.targets[i]))
                throw PlatformError("attack: candidate failed re-verification");
        }
    }
    return result;
}

Digest recover_key(const std::vector<Gen>& alice_solution, const std::vector<Gen>& bob_solution,
                   const PublicParams& params, const ContractionBudget& budget) {
    Element a = evaluate_index_word(params, Side::alice, alice_solution, budget);
    Element b = evaluate_index_word(params, Side::bob, bob_solution, budget);
    Element key = a.inverse().mul(b, budget).mul(a, budget).mul(b.inverse(), budget);
    return key.key_digest();
}

AttackResult single_conjugacy(const Element& u, const Element& v,
                              const std::vector<Element>& generators, std::size_t max_length,
                              const ContractionBudget& budget, const AttackOptions& options) {
    if (generators.empty()) throw PlatformError("single conjugacy: no generators");
    Searcher s;
    s.platform = u.platform();
    s.bases = &generators;
    s.signed_letters = true;
    s.max_length = max_length;
    s.node_cap = std::max<std::uint64_t>(1, options.max_nodes / std::max(1u, options.threads));
    s.dedup = options.dedup_elements;
    s.budget = budget;
    s.test = [&](const Element& cand) {
        // x u x^-1 = v
        return cand.mul(u, budget).mul(cand.inverse(), budget) == v;
    };
    return s.run(options.threads);
}

AttackInstance instance_from_transcript(const Transcript& transcript, Side side) {
    AttackInstance inst;
    inst.params = transcript.params;
    inst.side = side;
    inst.targets = side == Side::alice ? transcript.alice_transmission.elements
                                       : transcript.bob_transmission.elements;
    return inst;
}

} // namespace aag
