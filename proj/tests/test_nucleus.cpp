#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace aag;

namespace {

// every nucleus table entry recomputed from plain word arithmetic
void cross_check_tables(const Platform& p) {
    const auto& g = p.group();
    const Nucleus& n = p.nucleus();
    REQUIRE(n.size() >= 1);
    CHECK(n.elements[0].empty()); // identity first
    for (std::size_t i = 0; i < n.size(); ++i) {
        const Word& w = n.elements[i];
        CHECK(g.root_perm(w) == n.root_perms[i]);
        for (Letter x = 0; x < g.alphabet_size(); ++x)
            CHECK(g.equal(g.section(w, x), n.elements[n.section_table[i][x]]));
        CHECK(g.equal(g.invert(w), n.elements[n.inverse_table[i]]));
        for (std::size_t j = 0; j < n.size(); ++j) {
            Word prod = g.multiply(w, n.elements[j]);
            std::int16_t id = n.product_table[i][j];
            if (id >= 0) {
                CHECK(g.equal(prod, n.elements[static_cast<std::size_t>(id)]));
            } else {
                for (std::size_t m = 0; m < n.size(); ++m)
                    CHECK_FALSE(g.equal(prod, n.elements[m]));
            }
        }
    }
    // distinctness
    for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t j = i + 1; j < n.size(); ++j)
            CHECK_FALSE(g.equal(n.elements[i], n.elements[j]));
    // generators present
    for (std::size_t i = 0; i < p.generator_count(); ++i) {
        Word gw = g.generator_word(i);
        bool present = false;
        for (const Word& m : n.elements)
            if (g.equal(gw, m)) present = true;
        CHECK(present);
    }
}

} // namespace

TEST_CASE("grigorchuk nucleus is exactly {e,a,b,c,d}") {
    auto p = grigorchuk();
    const Nucleus& n = p->nucleus();
    REQUIRE(n.size() == 5);
    CHECK(n.elements[0] == p->parse_word("e"));
    CHECK(n.elements[1] == p->parse_word("a"));
    CHECK(n.elements[2] == p->parse_word("b"));
    CHECK(n.elements[3] == p->parse_word("c"));
    CHECK(n.elements[4] == p->parse_word("d"));
    cross_check_tables(*p);
}

TEST_CASE("identity-only automaton has nucleus {e}") {
    MealyAutomaton m(2, {"e"}, 0, {{0, 0}}, {{0, 1}});
    AutomatonGroup g(0, std::move(m), RewritePolicy::free_reduction(), {});
    Nucleus n = compute_nucleus(g);
    REQUIRE(n.size() == 1);
    CHECK(n.elements[0].empty());
    CHECK(n.product_table[0][0] == 0);
}

TEST_CASE("basilica nucleus") {
    auto p = basilica();
    const auto& g = p->group();
    const Nucleus& n = p->nucleus();
    // contains identity, both generators and their inverses
    for (const char* w : {"a", "b", "a'", "b'"}) {
        bool present = false;
        for (const Word& m : n.elements)
            if (g.equal(p->parse_word(w), m)) present = true;
        CHECK(present);
    }
    // regression constant: the closure adds the two mixed products
    CHECK(n.size() == 7);
    CHECK(g.equal(n.elements[5], p->parse_word("a b'")));
    CHECK(g.equal(n.elements[6], p->parse_word("b a'")));
    cross_check_tables(*p);
}

TEST_CASE("universal, hanoi and g_omega nuclei") {
    CHECK(universal()->nucleus().size() == 5);
    CHECK(hanoi(3)->nucleus().size() == 4);
    // for the periodic sequence 012 the level-shifted generator copies all
    // coincide with level-0 elements, so the closure stays at 5
    CHECK(g_omega({"", "012"})->nucleus().size() == 5);
    cross_check_tables(*universal());
    cross_check_tables(*hanoi(3));
    cross_check_tables(*g_omega({"", "012"}));
    cross_check_tables(*g_omega({"2", "01"}));
}

TEST_CASE("nucleus is section-closed and inverse-closed") {
    for (const auto& name : oracle::contracting_platform_names()) {
        auto p = default_platform(name);
        const Nucleus& n = p->nucleus();
        for (std::size_t i = 0; i < n.size(); ++i) {
            for (Letter x = 0; x < p->group().alphabet_size(); ++x)
                CHECK(n.section_table[i][x] < n.size());
            CHECK(n.inverse_table[i] < n.size());
        }
        CHECK(n.inverse_table[0] == 0);
    }
}

TEST_CASE("budget failures are reported, not mis-answered") {
    MealyAutomaton m(2, {"a", "b", "c", "d", "e"}, 4,
                     {{4, 4}, {0, 2}, {0, 3}, {4, 1}, {4, 4}},
                     {{1, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}});
    AutomatonGroup g(0, std::move(m), RewritePolicy::klein({{1, 2, 3}}), {0, 1, 2, 3});
    ContractionBudget tiny{3, 64};
    CHECK_THROWS_AS(compute_nucleus(g, tiny), BudgetError);
}

TEST_CASE("non-contracting platforms have no nucleus") {
    auto p = hanoi(4);
    CHECK_FALSE(p->contracting());
    CHECK_THROWS_AS(p->nucleus(), PlatformError);
    // the group itself still computes
    CHECK(p->group().is_trivial(p->parse_word("a01 a01")));
    CHECK_FALSE(p->group().is_trivial(p->parse_word("a01 a23")));
}
