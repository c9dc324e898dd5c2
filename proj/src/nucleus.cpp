#include "aag/nucleus.hpp"

#include <algorithm>
#include <map>

namespace aag {

std::string Nucleus::signature(const Perm& perm, const std::vector<std::uint8_t>& child_ids) {
    std::string sig;
    sig.reserve(perm.size() + child_ids.size() + 1);
    for (Letter y : perm) sig.push_back(static_cast<char>(y));
    sig.push_back('|');
    for (std::uint8_t id : child_ids) sig.push_back(static_cast<char>(id));
    return sig;
}

std::optional<std::uint8_t> Nucleus::find_signature(
    const Perm& perm, const std::vector<std::uint8_t>& child_ids) const {
    auto it = signature_index.find(signature(perm, child_ids));
    if (it == signature_index.end()) return std::nullopt;
    return it->second;
}

namespace {

// Working candidate set with element-level (not word-level) deduplication.
class CandidateSet {
public:
    CandidateSet(const AutomatonGroup& group, const ContractionBudget& budget)
        : group_(group), budget_(budget) {}

    std::optional<std::size_t> find(const Word& w) const {
        auto it = by_key_.find(w.key());
        if (it != by_key_.end()) return it->second;
        for (std::size_t i = 0; i < members_.size(); ++i)
            if (group_.equal(w, members_[i], budget_)) return i;
        return std::nullopt;
    }

    bool insert(const Word& w) {
        if (find(w)) return false;
        if (members_.size() >= budget_.max_closure)
            throw BudgetError("nucleus: candidate set exceeded budget");
        by_key_.emplace(w.key(), members_.size());
        members_.push_back(w);
        return true;
    }

    const std::vector<Word>& members() const { return members_; }

private:
    const AutomatonGroup& group_;
    const ContractionBudget& budget_;
    std::vector<Word> members_;
    std::unordered_map<std::string, std::size_t> by_key_;
};

// Elements reachable from `start` by iterated sections that never settle into
// `set`: explore the section graph pruned at set members, then peel nodes all
// of whose edges lead into the set or to peeled nodes. What survives lies on
// or ahead of a cycle, i.e. the limit elements the set is missing.
std::vector<Word> unabsorbed_elements(const AutomatonGroup& group, const CandidateSet& set,
                                      const Word& start, const ContractionBudget& budget) {
    if (set.find(start)) return {};
    std::vector<Word> nodes{start};
    std::vector<std::vector<std::size_t>> edges; // indices into nodes
    std::unordered_map<std::string, std::size_t> index{{start.key(), 0}};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        edges.emplace_back();
        for (Letter x = 0; x < group.alphabet_size(); ++x) {
            Word s = group.section(nodes[i], x);
            if (set.find(s)) continue;
            auto it = index.find(s.key());
            std::size_t j;
            if (it != index.end()) {
                j = it->second;
            } else {
                // dedupe by element, not only by word key
                std::optional<std::size_t> found;
                for (std::size_t m = 0; m < nodes.size(); ++m) {
                    if (group.equal(s, nodes[m], budget)) {
                        found = m;
                        break;
                    }
                }
                if (found) {
                    j = *found;
                    index.emplace(s.key(), j);
                } else {
                    j = nodes.size();
                    if (j >= budget.max_closure)
                        throw BudgetError("nucleus: product section graph exceeded budget");
                    index.emplace(s.key(), j);
                    nodes.push_back(std::move(s));
                }
            }
            edges[i].push_back(j);
        }
    }
    // peel nodes whose every path dies into the set
    std::vector<bool> removed(nodes.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (removed[i]) continue;
            bool all_dead = true;
            for (std::size_t j : edges[i])
                if (!removed[j]) all_dead = false;
            if (all_dead) {
                removed[i] = true;
                changed = true;
            }
        }
    }
    std::vector<Word> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!removed[i]) out.push_back(nodes[i]);
    return out;
}

} // namespace

Nucleus compute_nucleus(const AutomatonGroup& group, const ContractionBudget& budget) {
    CandidateSet set(group, budget);
    set.insert(group.identity_word());
    for (std::size_t i = 0; i < group.generator_states().size(); ++i) {
        set.insert(group.generator_word(i, false));
        set.insert(group.generator_word(i, true));
    }

    bool grew = true;
    while (grew) {
        grew = false;
        // close under sections and inverses
        bool section_grew = true;
        while (section_grew) {
            section_grew = false;
            std::vector<Word> fresh;
            for (const Word& m : set.members()) {
                for (Letter x = 0; x < group.alphabet_size(); ++x) fresh.push_back(group.section(m, x));
                fresh.push_back(group.invert(m));
            }
            std::sort(fresh.begin(), fresh.end());
            for (const Word& w : fresh)
                if (set.insert(w)) section_grew = grew = true;
        }
        // absorb pairwise products: any limit elements their section graphs
        // reveal must join the set
        std::vector<Word> missing;
        const std::size_t count = set.members().size();
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = 0; j < count; ++j) {
                Word p = group.multiply(set.members()[i], set.members()[j]);
                for (Word& w : unabsorbed_elements(group, set, p, budget))
                    missing.push_back(std::move(w));
            }
        }
        std::sort(missing.begin(), missing.end());
        for (const Word& w : missing)
            if (set.insert(w)) grew = true;
    }

    // freeze ids: identity first, then (length, lex)
    std::vector<Word> elements = set.members();
    std::sort(elements.begin(), elements.end());
    if (!elements.empty() && !elements.front().empty())
        throw PlatformError("nucleus must contain the identity");
    if (elements.size() > 256)
        throw PlatformError("nucleus too large for one-byte leaf ids");

    Nucleus n;
    n.elements = std::move(elements);
    auto id_of = [&](const Word& w) -> std::uint8_t {
        for (std::size_t i = 0; i < n.elements.size(); ++i) {
            if (w == n.elements[i] || group.equal(w, n.elements[i], budget))
                return static_cast<std::uint8_t>(i);
        }
        throw PlatformError("nucleus closure inconsistent");
    };
    const std::size_t size = n.elements.size();
    n.root_perms.resize(size);
    n.section_table.assign(size, std::vector<std::uint8_t>(group.alphabet_size()));
    n.inverse_table.resize(size);
    n.product_table.assign(size, std::vector<std::int16_t>(size, -1));
    for (std::size_t i = 0; i < size; ++i) {
        n.root_perms[i] = group.root_perm(n.elements[i]);
        for (Letter x = 0; x < group.alphabet_size(); ++x)
            n.section_table[i][x] = id_of(group.section(n.elements[i], x));
        n.inverse_table[i] = id_of(group.invert(n.elements[i]));
    }
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            Word p = group.multiply(n.elements[i], n.elements[j]);
            auto pk = p.key();
            for (std::size_t m = 0; m < size; ++m) {
                if (pk == n.elements[m].key() || group.equal(p, n.elements[m], budget)) {
                    n.product_table[i][j] = static_cast<std::int16_t>(m);
                    break;
                }
            }
        }
    }
    for (std::size_t i = 0; i < size; ++i) {
        std::string sig = Nucleus::signature(n.root_perms[i], n.section_table[i]);
        auto [it, inserted] = n.signature_index.emplace(sig, static_cast<std::uint8_t>(i));
        if (!inserted) throw PlatformError("nucleus signatures collide");
    }
    return n;
}

} // namespace aag
