#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace aag;

namespace {

std::string image(const Platform& p, const std::string& word, const std::string& s) {
    std::vector<Letter> in;
    for (char c : s) in.push_back(static_cast<Letter>(c - '0'));
    auto out = p.group().apply(p.parse_word(word), in);
    std::string text;
    for (Letter x : out) text.push_back(static_cast<char>('0' + x));
    return text;
}

State state_of(const Platform& p, const std::string& name) {
    const auto& m = p.group().automaton();
    for (State s = 0; s < m.state_count(); ++s)
        if (m.state_name(s) == name) return s;
    FAIL("no state ", name);
    return 0;
}

} // namespace

TEST_CASE("grigorchuk golden tables") {
    auto p = grigorchuk();
    const auto& m = p->group().automaton();
    const State a = state_of(*p, "a"), b = state_of(*p, "b"), c = state_of(*p, "c"),
                d = state_of(*p, "d"), e = state_of(*p, "e");
    // output: a swaps, b/c/d/e fix
    CHECK(m.output(a, 0) == 1);
    CHECK(m.output(a, 1) == 0);
    for (State s : {b, c, d, e})
        for (Letter x : {0, 1}) CHECK(m.output(s, x) == x);
    // transitions exactly as printed
    for (Letter x : {0, 1}) {
        CHECK(m.transition(a, x) == e);
        CHECK(m.transition(e, x) == e);
    }
    CHECK(m.transition(b, 0) == a);
    CHECK(m.transition(c, 0) == a);
    CHECK(m.transition(d, 0) == e);
    CHECK(m.transition(b, 1) == c);
    CHECK(m.transition(c, 1) == d);
    CHECK(m.transition(d, 1) == b);
    // relations
    for (const char* w : {"aa", "bb", "cc", "dd", "bcd"})
        CHECK(p->word_is_trivial(p->parse_word(w)));
}

TEST_CASE("basilica golden tables") {
    auto p = basilica();
    const auto& m = p->group().automaton();
    const State a = state_of(*p, "a"), b = state_of(*p, "b"), e = state_of(*p, "e");
    for (Letter x : {0, 1}) {
        CHECK(m.output(e, x) == x);
        CHECK(m.output(a, x) == x);
        CHECK(m.transition(e, x) == e);
    }
    CHECK(m.output(b, 0) == 1);
    CHECK(m.output(b, 1) == 0);
    CHECK(m.transition(a, 0) == e);
    CHECK(m.transition(b, 0) == e);
    CHECK(m.transition(a, 1) == b);
    CHECK(m.transition(b, 1) == a);
    // section("a", 1) = "b"
    CHECK(p->group().section(p->parse_word("a"), 1) == p->parse_word("b"));
    // a is nontrivial: it moves some string of length <= 4
    CHECK_FALSE(oracle::acts_trivially(p->group(), p->parse_word("a"), 4));
    CHECK_FALSE(p->word_is_trivial(p->parse_word("a")));
}

TEST_CASE("universal golden tables (letters (x,y) -> 3x+y)") {
    auto p = universal();
    const auto& m = p->group().automaton();
    const State a = state_of(*p, "a"), b = state_of(*p, "b"), c = state_of(*p, "c"),
                d = state_of(*p, "d"), e = state_of(*p, "e");
    auto L = [](int x, int y) { return static_cast<Letter>(3 * x + y); };
    for (int y = 0; y < 3; ++y) {
        // pi(a,(0,y)) = (1,y), pi(a,(1,y)) = (0,y)
        CHECK(m.output(a, L(0, y)) == L(1, y));
        CHECK(m.output(a, L(1, y)) == L(0, y));
        for (State s : {b, c, d, e})
            for (int x = 0; x < 2; ++x) CHECK(m.output(s, L(x, y)) == L(x, y));
        // tau at (1,y) keeps the state
        CHECK(m.transition(b, L(1, y)) == b);
        CHECK(m.transition(c, L(1, y)) == c);
        CHECK(m.transition(d, L(1, y)) == d);
        for (int x = 0; x < 2; ++x) {
            CHECK(m.transition(e, L(x, y)) == e);
            CHECK(m.transition(a, L(x, y)) == e);
        }
    }
    // the (0,y) column as printed, plus the one interpolated entry
    CHECK(m.transition(b, L(0, 0)) == a);
    CHECK(m.transition(b, L(0, 1)) == a);
    CHECK(m.transition(b, L(0, 2)) == e);
    CHECK(m.transition(c, L(0, 0)) == a); // absent from the printed display
    CHECK(m.transition(c, L(0, 1)) == e);
    CHECK(m.transition(c, L(0, 2)) == a);
    CHECK(m.transition(d, L(0, 0)) == e);
    CHECK(m.transition(d, L(0, 1)) == a);
    CHECK(m.transition(d, L(0, 2)) == a);
    for (const char* w : {"aa", "bb", "cc", "dd", "bcd"})
        CHECK(p->word_is_trivial(p->parse_word(w)));
}

TEST_CASE("hanoi golden tables and action") {
    auto p = hanoi(3);
    const auto& m = p->group().automaton();
    const State a01 = state_of(*p, "a01"), a02 = state_of(*p, "a02"), a12 = state_of(*p, "a12"),
                e = state_of(*p, "e");
    struct Row {
        State s;
        Letter i, j;
    };
    for (Row r : {Row{a01, 0, 1}, Row{a02, 0, 2}, Row{a12, 1, 2}}) {
        for (Letter x = 0; x < 3; ++x) {
            Letter expect_out = x == r.i ? r.j : x == r.j ? r.i : x;
            CHECK(m.output(r.s, x) == expect_out);
            CHECK(m.transition(r.s, x) == ((x == r.i || x == r.j) ? e : r.s));
        }
    }
    CHECK(image(*p, "a01", "012") == "112");
    CHECK(image(*p, "a01", "201") == "211");
    for (const char* w : {"a01 a01", "a02 a02", "a12 a12"})
        CHECK(p->word_is_trivial(p->parse_word(w)));
    CHECK_THROWS_AS(hanoi(2), PlatformError);
}

TEST_CASE("hanoi legal-move oracle") {
    auto cfg = [](const std::string& s) {
        HanoiConfig c;
        c.pegs = 3;
        for (char ch : s) c.discs.push_back(static_cast<Letter>(ch - '0'));
        return c;
    };
    auto str = [](const HanoiConfig& c) {
        std::string s;
        for (Letter x : c.discs) s.push_back(static_cast<char>('0' + x));
        return s;
    };
    CHECK(str(hanoi_legal_move(cfg("012"), 0, 1)) == "112");
    CHECK(str(hanoi_legal_move(cfg("222"), 0, 1)) == "222");
    CHECK(str(hanoi_legal_move(cfg("201"), 0, 1)) == "211");
    CHECK_THROWS_AS(hanoi_legal_move(cfg("012"), 1, 0), PlatformError);

    SUBCASE("automaton action equals game semantics, exhaustive n <= 5") {
        auto p = hanoi(3);
        const auto& g = p->group();
        struct Gen3 {
            const char* name;
            int i, j;
        };
        for (Gen3 gen : {Gen3{"a01", 0, 1}, Gen3{"a02", 0, 2}, Gen3{"a12", 1, 2}}) {
            Word w = p->parse_word(gen.name);
            for (std::size_t n = 1; n <= 5; ++n) {
                for (const auto& s : oracle::all_strings(3, n)) {
                    HanoiConfig c;
                    c.pegs = 3;
                    c.discs = s;
                    CHECK(g.apply(w, s) == hanoi_legal_move(c, gen.i, gen.j).discs);
                }
            }
        }
    }
}

TEST_CASE("hanoi with four pegs: constructible, flagged unusable for keys") {
    auto p = hanoi(4);
    CHECK(p->generator_count() == 6);
    CHECK_FALSE(p->contracting());
    CHECK(image(*p, "a23", "3210") == "2210");
}

TEST_CASE("g_omega") {
    SUBCASE("(eps, 012) reproduces the five-state platform") {
        auto go = g_omega({"", "012"});
        auto gr = grigorchuk();
        for (const char* gen : {"a", "b", "c", "d"}) {
            CHECK(oracle::actions_agree(go->group(), go->parse_word(gen), gr->group(),
                                        gr->parse_word(gen), 12));
        }
        SplitMix64 rng(77);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<Gen> letters;
            std::size_t len = 1 + rng.below(10);
            for (std::size_t i = 0; i < len; ++i)
                letters.push_back(Gen{static_cast<State>(rng.below(4)), false});
            Word wo = go->make_word(letters);
            Word wr = gr->make_word(letters);
            for (int s = 0; s < 20; ++s) {
                auto str = oracle::random_string(2, 12, rng);
                CHECK(go->group().apply(wo, str) == gr->group().apply(wr, str));
            }
        }
    }
    SUBCASE("identity word is trivial for assorted specs") {
        for (const GOmegaSpec& spec :
             {GOmegaSpec{"", "0"}, GOmegaSpec{"01", "2"}, GOmegaSpec{"", "01"}}) {
            auto p = g_omega(spec);
            CHECK(p->word_is_trivial(p->parse_word("")));
        }
    }
    SUBCASE("constant sequence 0: d has its section pattern pinned") {
        auto p = g_omega({"", "0"});
        const auto& g = p->group();
        Word d = p->parse_word("d");
        CHECK(g.section(d, 0).empty());       // always e
        CHECK(g.equal(g.section(d, 1), d));   // shifts to itself
        CHECK(p->word_is_trivial(p->parse_word("dd")));
        // with sections (e, d) and a trivial root the element is trivial outright
        CHECK(p->word_is_trivial(d));
    }
    SUBCASE("spec validation") {
        CHECK_THROWS_AS(g_omega({"", ""}), PlatformError);
        CHECK_THROWS_AS(g_omega({"3", "0"}), PlatformError);
        CHECK_THROWS_AS(g_omega({"", "04"}), PlatformError);
    }
}

TEST_CASE("involution suite") {
    for (const char* name : {"grigorchuk", "universal", "hanoi"}) {
        auto p = default_platform(name);
        for (std::size_t i = 0; i < p->generator_count(); ++i) {
            Word sq = p->multiply(p->make_word(std::vector<Gen>{Gen{static_cast<State>(i), false}}),
                                  p->make_word(std::vector<Gen>{Gen{static_cast<State>(i), false}}));
            CHECK(p->word_is_trivial(sq));
        }
    }
    auto bas = basilica();
    CHECK_FALSE(bas->words_equal(bas->parse_word("aa"), bas->parse_word("")));
    CHECK_FALSE(bas->words_equal(bas->parse_word("bb"), bas->parse_word("")));
}

TEST_CASE("affine platform") {
    auto p = sanov_affine();
    REQUIRE(p->dimension() == 2);
    const AffineElement& g0 = p->affine_generators()[0];
    const AffineElement& g1 = p->affine_generators()[1];

    SUBCASE("composition rule (u1 + M1 u2, M1 M2)") {
        AffineElement lhs;
        lhs.translation = {1, 0};
        lhs.matrix.n = 2;
        lhs.matrix.a = {1, 2, 0, 1};
        AffineElement rhs = AffineElement::identity(2);
        rhs.translation = {0, 1};
        AffineElement out = affine_compose(lhs, rhs);
        CHECK(out.translation == std::vector<BigInt>{3, 1});
        CHECK(out.matrix.a == std::vector<BigInt>{1, 2, 0, 1});
        CHECK(affine_compose(lhs, AffineElement::identity(2)) == lhs);
    }

    SUBCASE("inverse laws") {
        SplitMix64 rng(12);
        for (int trial = 0; trial < 30; ++trial) {
            Word w = random_generator_word(*p, 1 + rng.below(50), rng);
            AffineElement g = p->evaluate_affine(w);
            CHECK(affine_compose(g, affine_invert(g)).is_identity());
            CHECK(affine_compose(affine_invert(g), g).is_identity());
            CHECK(affine_invert(affine_compose(g, affine_invert(g))).is_identity());
            CHECK(affine_invert(g) == oracle::naive_invert2(g));
        }
    }

    SUBCASE("the generator pair does not commute") {
        Word comm = p->parse_word("g0 g1 g0' g1'");
        CHECK_FALSE(p->word_is_trivial(comm));
        AffineElement c = p->evaluate_affine(comm);
        CHECK(c.matrix.a == std::vector<BigInt>{21, -8, 8, -3});
    }

    SUBCASE("word problem") {
        CHECK(p->word_is_trivial(p->parse_word("")));
        SplitMix64 rng(13);
        for (int trial = 0; trial < 25; ++trial) {
            Word w = random_generator_word(*p, 1 + rng.below(50), rng);
            CHECK(p->word_is_trivial(p->multiply(w, p->invert(w))));
        }
    }

    SUBCASE("associativity against the independent oracle, length <= 100") {
        SplitMix64 rng(14);
        for (int trial = 0; trial < 10; ++trial) {
            Word w = random_generator_word(*p, 1 + rng.below(100), rng);
            AffineElement via_lib = p->evaluate_affine(w);
            AffineElement via_oracle = AffineElement::identity(2);
            for (const Gen& letter : w.letters()) {
                AffineElement base = letter.state == 0 ? g0 : g1;
                if (letter.inverse) base = oracle::naive_invert2(base);
                via_oracle = oracle::naive_compose(via_oracle, base);
            }
            CHECK(via_lib == via_oracle);
        }
    }

    SUBCASE("invalid generators rejected") {
        AffineElement bad = AffineElement::identity(2);
        bad.matrix.a = {2, 0, 0, 1}; // det 2
        CHECK_THROWS_AS(affine_platform({bad}), PlatformError);
        AffineElement g3 = AffineElement::identity(3);
        CHECK_THROWS_AS(affine_platform({g0, g3}), PlatformError);
    }
}

TEST_CASE("matrix helpers") {
    IntMatrix m;
    m.n = 3;
    m.a = {2, 0, 1, 0, 1, 0, 1, 0, 1}; // det 1
    CHECK(mat_det(m) == 1);
    IntMatrix inv = mat_inverse_unimodular(m);
    CHECK(mat_mul(m, inv) == IntMatrix::identity(3));
    CHECK(mat_mul(inv, m) == IntMatrix::identity(3));
    IntMatrix swap2;
    swap2.n = 2;
    swap2.a = {0, 1, 1, 0};
    CHECK(mat_det(swap2) == -1);
    CHECK(mat_inverse_unimodular(swap2) == swap2);
    IntMatrix singular;
    singular.n = 2;
    singular.a = {1, 2, 2, 4};
    CHECK(mat_det(singular) == 0);
    CHECK_THROWS_AS(mat_inverse_unimodular(singular), PlatformError);
}

TEST_CASE("registry and config") {
    SUBCASE("wire-stable ids") {
        CHECK(grigorchuk()->id() == 0x01);
        CHECK(g_omega({"", "012"})->id() == 0x02);
        CHECK(basilica()->id() == 0x03);
        CHECK(universal()->id() == 0x04);
        CHECK(hanoi(3)->id() == 0x05);
        CHECK(sanov_affine()->id() == 0x06);
        CHECK(platform_families().size() == 6);
    }
    SUBCASE("wire config round trip") {
        for (const PlatformFamily& fam : platform_families()) {
            PlatformPtr p = default_platform(fam.name);
            PlatformPtr back = platform_from_wire(p->id(), p->wire_config());
            CHECK(back->wire_config() == p->wire_config());
            CHECK(back->name() == p->name());
            CHECK(back->generator_count() == p->generator_count());
        }
    }
    SUBCASE("text config: g_omega") {
        auto p = load_platform_config("platform = g_omega\npreperiod = 01\nperiod = 2\n");
        CHECK(p->wire_config() == g_omega({"01", "2"})->wire_config());
    }
    SUBCASE("text config: affine sanov") {
        auto p = load_platform_config("# demo pair\n"
                                      "platform = affine\n"
                                      "dimension = 2\n"
                                      "generators = 2\n"
                                      "matrix.0 = 1 2 0 1\n"
                                      "translation.0 = 0 0\n"
                                      "matrix.1 = 1 0 2 1\n"
                                      "translation.1 = 0 0\n");
        CHECK(p->wire_config() == sanov_affine()->wire_config());
    }
    SUBCASE("text config: hanoi") {
        CHECK(load_platform_config("platform = hanoi\npegs = 4\n")->wire_config() ==
              hanoi(4)->wire_config());
    }
    SUBCASE("config errors") {
        CHECK_THROWS_AS(load_platform_config("platform = nosuch\n"), ConfigError);
        CHECK_THROWS_AS(load_platform_config("platform = g_omega\n"), ConfigError);
        CHECK_THROWS_AS(load_platform_config("platform = affine\ndimension = 2\ngenerators = 1\n"
                                             "matrix.0 = 1 2 0\ntranslation.0 = 0 0\n"),
                        ConfigError);
        CHECK_THROWS_AS(load_platform_config("nonsense line\n"), ConfigError);
    }
}
