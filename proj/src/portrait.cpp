#include "aag/portrait.hpp"

#include <algorithm>
#include <unordered_map>

namespace aag {

std::size_t PortraitNode::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
}

std::size_t PortraitNode::depth() const {
    std::size_t d = 0;
    for (const auto& c : children) d = std::max(d, c.depth() + 1);
    return d;
}

DepthPortraitNode portrait(const AutomatonGroup& group, const Word& w, std::size_t depth) {
    DepthPortraitNode node;
    if (depth == 0) {
        node.leaf = true;
        node.section = group.reduce(w);
        return node;
    }
    node.perm = group.root_perm(w);
    node.children.reserve(group.alphabet_size());
    for (Letter x = 0; x < group.alphabet_size(); ++x)
        node.children.push_back(portrait(group, group.section(w, x), depth - 1));
    return node;
}

namespace {

class Canonicalizer {
public:
    Canonicalizer(const AutomatonGroup& group, const Nucleus& nucleus,
                  const ContractionBudget& budget)
        : group_(group), nucleus_(nucleus), budget_(budget) {
        for (std::size_t i = 0; i < nucleus_.size(); ++i)
            rep_ids_.emplace(nucleus_.elements[i].key(), static_cast<std::uint8_t>(i));
    }

    PortraitNode build(const Word& w, std::size_t depth) {
        Word r = group_.reduce(w);
        auto memo = nodes_.find(r.key());
        if (memo != nodes_.end()) return memo->second;
        PortraitNode node;
        if (auto id = membership(r)) {
            node.leaf = true;
            node.leaf_id = *id;
        } else {
            if (depth >= budget_.max_depth)
                throw BudgetError("canonical portrait: max depth exceeded");
            node.leaf = false;
            node.perm = group_.root_perm(r);
            node.children.reserve(group_.alphabet_size());
            for (Letter x = 0; x < group_.alphabet_size(); ++x)
                node.children.push_back(build(group_.section(r, x), depth + 1));
        }
        nodes_.emplace(r.key(), node);
        return node;
    }

private:
    std::optional<std::uint8_t> membership(const Word& r) {
        auto exact = rep_ids_.find(r.key());
        if (exact != rep_ids_.end()) return exact->second;
        auto memo = member_memo_.find(r.key());
        if (memo != member_memo_.end()) return memo->second;
        std::optional<std::uint8_t> result;
        for (std::size_t i = 0; i < nucleus_.size(); ++i) {
            if (group_.equal(r, nucleus_.elements[i], budget_)) {
                result = static_cast<std::uint8_t>(i);
                break;
            }
        }
        member_memo_.emplace(r.key(), result);
        return result;
    }

    const AutomatonGroup& group_;
    const Nucleus& nucleus_;
    const ContractionBudget& budget_;
    std::unordered_map<std::string, std::uint8_t> rep_ids_;
    std::unordered_map<std::string, std::optional<std::uint8_t>> member_memo_;
    std::unordered_map<std::string, PortraitNode> nodes_;
};

} // namespace

Portrait canonical_portrait(const AutomatonGroup& group, const Nucleus& nucleus, const Word& w,
                            const ContractionBudget& budget) {
    Portrait p;
    p.platform_id = group.platform_id();
    p.alphabet_size = group.alphabet_size();
    p.nucleus_size = static_cast<std::uint8_t>(nucleus.size());
    p.root = Canonicalizer(group, nucleus, budget).build(w, 0);
    return p;
}

namespace {

PortraitNode expand_leaf(const Nucleus& nucleus, std::uint8_t id, std::uint8_t k) {
    PortraitNode n;
    n.leaf = false;
    n.perm = nucleus.root_perms[id];
    n.children.reserve(k);
    for (Letter x = 0; x < k; ++x) {
        PortraitNode c;
        c.leaf = true;
        c.leaf_id = nucleus.section_table[id][x];
        n.children.push_back(std::move(c));
    }
    return n;
}

PortraitNode multiply_nodes(const Nucleus& nucleus, const PortraitNode& a, const PortraitNode& b,
                            std::uint8_t k, std::size_t depth, const ContractionBudget& budget) {
    if (a.leaf && b.leaf) {
        std::int16_t id = nucleus.product_table[a.leaf_id][b.leaf_id];
        if (id >= 0) {
            PortraitNode n;
            n.leaf = true;
            n.leaf_id = static_cast<std::uint8_t>(id);
            return n;
        }
    }
    if (depth >= budget.max_depth)
        throw BudgetError("portrait multiply: max depth exceeded");
    PortraitNode a_store, b_store;
    const PortraitNode* ap = &a;
    const PortraitNode* bp = &b;
    if (a.leaf) {
        a_store = expand_leaf(nucleus, a.leaf_id, k);
        ap = &a_store;
    }
    if (b.leaf) {
        b_store = expand_leaf(nucleus, b.leaf_id, k);
        bp = &b_store;
    }
    PortraitNode out;
    out.leaf = false;
    out.perm = compose_perm(ap->perm, bp->perm);
    out.children.resize(k);
    bool all_leaves = true;
    for (Letter x = 0; x < k; ++x) {
        // (gh)_x = g_{h(x)} h_x
        out.children[x] = multiply_nodes(nucleus, ap->children[bp->perm[x]], bp->children[x], k,
                                         depth + 1, budget);
        if (!out.children[x].leaf) all_leaves = false;
    }
    if (all_leaves) {
        std::vector<std::uint8_t> ids(k);
        for (Letter x = 0; x < k; ++x) ids[x] = out.children[x].leaf_id;
        if (auto id = nucleus.find_signature(out.perm, ids)) {
            PortraitNode n;
            n.leaf = true;
            n.leaf_id = *id;
            return n;
        }
    }
    return out;
}

PortraitNode invert_node(const Nucleus& nucleus, const PortraitNode& p) {
    if (p.leaf) {
        PortraitNode n;
        n.leaf = true;
        n.leaf_id = nucleus.inverse_table[p.leaf_id];
        return n;
    }
    // (g^-1)_x = (g_{g^-1(x)})^-1
    PortraitNode out;
    out.leaf = false;
    out.perm = inverse_perm(p.perm);
    out.children.resize(p.children.size());
    for (Letter x = 0; x < p.children.size(); ++x)
        out.children[x] = invert_node(nucleus, p.children[out.perm[x]]);
    return out;
}

void check_headers(const AutomatonGroup& group, const Portrait& p) {
    if (p.platform_id != group.platform_id() || p.alphabet_size != group.alphabet_size())
        throw PlatformError("portrait belongs to a different platform");
}

} // namespace

Portrait portrait_multiply(const AutomatonGroup& group, const Nucleus& nucleus, const Portrait& a,
                           const Portrait& b, const ContractionBudget& budget) {
    check_headers(group, a);
    check_headers(group, b);
    Portrait out;
    out.platform_id = a.platform_id;
    out.alphabet_size = a.alphabet_size;
    out.nucleus_size = a.nucleus_size;
    out.root = multiply_nodes(nucleus, a.root, b.root, a.alphabet_size, 0, budget);
    return out;
}

Portrait portrait_invert(const AutomatonGroup& group, const Nucleus& nucleus, const Portrait& p) {
    check_headers(group, p);
    Portrait out;
    out.platform_id = p.platform_id;
    out.alphabet_size = p.alphabet_size;
    out.nucleus_size = p.nucleus_size;
    out.root = invert_node(nucleus, p.root);
    return out;
}

namespace {

constexpr std::uint8_t kMagic0 = 0x41; // 'A'
constexpr std::uint8_t kMagic1 = 0x47; // 'G'
constexpr std::uint8_t kVersion = 0x01;
constexpr std::uint8_t kTagInternal = 0x00;
constexpr std::uint8_t kTagLeaf = 0x01;

void serialize_node(const PortraitNode& n, Bytes& out) {
    if (n.leaf) {
        put_u8(out, kTagLeaf);
        put_u8(out, n.leaf_id);
        return;
    }
    put_u8(out, kTagInternal);
    for (Letter y : n.perm) put_u8(out, y);
    for (const auto& c : n.children) serialize_node(c, out);
}

} // namespace

Bytes serialize_portrait(const Portrait& p) {
    Bytes out;
    put_u8(out, kMagic0);
    put_u8(out, kMagic1);
    put_u8(out, kVersion);
    put_u8(out, p.platform_id);
    put_u8(out, p.alphabet_size);
    put_u8(out, p.nucleus_size);
    serialize_node(p.root, out);
    return out;
}

Portrait read_portrait(ByteReader& r, std::uint8_t platform_id, std::uint8_t alphabet_size,
                       const Nucleus& nucleus, const ContractionBudget& budget) {
    if (r.u8() != kMagic0 || r.u8() != kMagic1)
        throw ParseError(ParseCode::bad_magic, "portrait: bad magic");
    if (r.u8() != kVersion) throw ParseError(ParseCode::bad_version, "portrait: bad version");
    if (r.u8() != platform_id)
        throw ParseError(ParseCode::platform_mismatch, "portrait: platform id mismatch");
    const std::uint8_t k = r.u8();
    if (k != alphabet_size) throw ParseError(ParseCode::bad_alphabet, "portrait: alphabet mismatch");
    if (r.u8() != nucleus.size())
        throw ParseError(ParseCode::bad_nucleus_size, "portrait: nucleus size mismatch");

    Portrait p;
    p.platform_id = platform_id;
    p.alphabet_size = k;
    p.nucleus_size = static_cast<std::uint8_t>(nucleus.size());

    // Iterative preorder parse; hostile inputs may be deep, so no recursion.
    struct Frame {
        PortraitNode node;
        std::uint8_t next_child = 0;
    };
    std::vector<Frame> stack;
    std::size_t nodes_read = 0;
    auto finish = [&](PortraitNode done) -> std::optional<PortraitNode> {
        for (;;) {
            if (stack.empty()) return done;
            Frame& top = stack.back();
            top.node.children.push_back(std::move(done));
            if (top.node.children.size() < k) return std::nullopt;
            // completed internal node: canonical portraits never contain an
            // internal node that denotes a nucleus element
            bool all_leaves = true;
            for (const auto& c : top.node.children)
                if (!c.leaf) all_leaves = false;
            if (all_leaves) {
                std::vector<std::uint8_t> ids;
                ids.reserve(k);
                for (const auto& c : top.node.children) ids.push_back(c.leaf_id);
                if (nucleus.find_signature(top.node.perm, ids))
                    throw ParseError(ParseCode::not_canonical,
                                     "portrait: internal node denotes a nucleus element");
            }
            done = std::move(top.node);
            stack.pop_back();
        }
    };
    for (;;) {
        if (++nodes_read > budget.max_closure)
            throw ParseError(ParseCode::limit_exceeded, "portrait: too many nodes");
        if (stack.size() > budget.max_depth)
            throw ParseError(ParseCode::limit_exceeded, "portrait: too deep");
        std::uint8_t tag = r.u8();
        if (tag == kTagLeaf) {
            std::uint8_t id = r.u8();
            if (id >= nucleus.size())
                throw ParseError(ParseCode::bad_leaf_id, "portrait: leaf id out of range");
            PortraitNode leaf;
            leaf.leaf = true;
            leaf.leaf_id = id;
            if (auto done = finish(std::move(leaf))) {
                p.root = std::move(*done);
                return p;
            }
        } else if (tag == kTagInternal) {
            Frame f;
            f.node.leaf = false;
            f.node.perm.resize(k);
            std::vector<bool> hit(k, false);
            for (Letter x = 0; x < k; ++x) {
                std::uint8_t y = r.u8();
                if (y >= k || hit[y])
                    throw ParseError(ParseCode::bad_permutation,
                                     "portrait: node permutation is not a bijection");
                hit[y] = true;
                f.node.perm[x] = y;
            }
            f.node.children.reserve(k);
            stack.push_back(std::move(f));
        } else {
            throw ParseError(ParseCode::bad_tag, "portrait: unknown node tag");
        }
    }
}

Portrait deserialize_portrait(std::span<const std::uint8_t> bytes, std::uint8_t platform_id,
                              std::uint8_t alphabet_size, const Nucleus& nucleus,
                              const ContractionBudget& budget) {
    ByteReader r(bytes);
    Portrait p = read_portrait(r, platform_id, alphabet_size, nucleus, budget);
    r.expect_end();
    return p;
}

} // namespace aag
