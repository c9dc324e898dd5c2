#include "aag/platform.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace aag {

std::size_t Platform::generator_count() const {
    return kind_ == PlatformKind::automaton ? group_->generator_states().size()
                                            : affine_generators_.size();
}

std::string Platform::generator_name(std::size_t index) const {
    if (index >= generator_count()) throw PlatformError("generator index out of range");
    if (kind_ == PlatformKind::automaton)
        return group_->automaton().state_name(group_->generator_states()[index]);
    return "g" + std::to_string(index);
}

const AutomatonGroup& Platform::group() const {
    if (kind_ != PlatformKind::automaton)
        throw PlatformError("platform '" + name_ + "' is not an automaton platform");
    return *group_;
}

const Nucleus& Platform::nucleus() const {
    if (!nucleus_)
        throw PlatformError("platform '" + name_ + "' has no nucleus (not contracting)");
    return *nucleus_;
}

const std::vector<AffineElement>& Platform::affine_generators() const {
    if (kind_ != PlatformKind::affine)
        throw PlatformError("platform '" + name_ + "' is not an affine platform");
    return affine_generators_;
}

namespace {

// Free reduction for index words (the affine platform has no rewriting
// beyond cancelling adjacent inverses).
std::vector<Gen> free_reduce(std::span<const Gen> letters) {
    std::vector<Gen> stack;
    stack.reserve(letters.size());
    for (const Gen& g : letters) {
        if (!stack.empty() && stack.back().state == g.state && stack.back().inverse != g.inverse)
            stack.pop_back();
        else
            stack.push_back(g);
    }
    return stack;
}

} // namespace

Word Platform::make_word(std::span<const Gen> generator_letters) const {
    for (const Gen& g : generator_letters)
        if (g.state >= generator_count()) throw PlatformError("generator index out of range");
    if (kind_ == PlatformKind::automaton) {
        std::vector<Gen> states(generator_letters.size());
        for (std::size_t i = 0; i < generator_letters.size(); ++i)
            states[i] = Gen{group_->generator_states()[generator_letters[i].state],
                            generator_letters[i].inverse};
        return group_->word(states);
    }
    return Word(id_, free_reduce(generator_letters));
}

Word Platform::parse_word(std::string_view text) const {
    if (kind_ == PlatformKind::automaton) return group_->parse_word(text);
    std::vector<Gen> letters;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        bool inv = false;
        if (tok.size() >= 1 && tok.back() == '\'') {
            inv = true;
            tok.pop_back();
        } else if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            inv = true;
            tok.resize(tok.size() - 3);
        }
        std::size_t idx = 0;
        try {
            if (tok.size() < 2 || tok[0] != 'g') throw std::invalid_argument(tok);
            idx = std::stoul(tok.substr(1));
        } catch (const std::exception&) {
            throw PlatformError("unknown affine generator '" + tok + "'");
        }
        if (idx >= affine_generators_.size())
            throw PlatformError("affine generator index out of range");
        letters.push_back(Gen{static_cast<State>(idx), inv});
    }
    return Word(id_, free_reduce(letters));
}

std::string Platform::word_to_string(const Word& w) const {
    if (kind_ == PlatformKind::automaton) return group_->to_string(w);
    if (w.empty()) return "e";
    std::string out;
    for (const Gen& g : w.letters()) {
        if (!out.empty()) out.push_back(' ');
        out += "g" + std::to_string(g.state);
        if (g.inverse) out.push_back('\'');
    }
    return out;
}

Word Platform::multiply(const Word& a, const Word& b) const {
    if (kind_ == PlatformKind::automaton) return group_->multiply(a, b);
    if (a.platform_id() != id_ || b.platform_id() != id_)
        throw PlatformError("word belongs to a different platform");
    std::vector<Gen> all(a.letters());
    all.insert(all.end(), b.letters().begin(), b.letters().end());
    return Word(id_, free_reduce(all));
}

Word Platform::invert(const Word& w) const {
    if (kind_ == PlatformKind::automaton) return group_->invert(w);
    if (w.platform_id() != id_) throw PlatformError("word belongs to a different platform");
    std::vector<Gen> rev;
    rev.reserve(w.size());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
        rev.push_back(Gen{it->state, !it->inverse});
    return Word(id_, std::move(rev));
}

AffineElement Platform::evaluate_affine(const Word& w) const {
    if (kind_ != PlatformKind::affine) throw PlatformError("not an affine platform");
    AffineElement acc = AffineElement::identity(dimension_);
    for (const Gen& g : w.letters()) {
        const AffineElement& gen = affine_generators_[g.state];
        acc = affine_compose(acc, g.inverse ? affine_invert(gen) : gen);
    }
    return acc;
}

bool Platform::word_is_trivial(const Word& w, const ContractionBudget& budget) const {
    if (kind_ == PlatformKind::automaton) return group_->is_trivial(w, budget);
    return evaluate_affine(w).is_identity();
}

bool Platform::words_equal(const Word& a, const Word& b, const ContractionBudget& budget) const {
    if (kind_ == PlatformKind::automaton) return group_->equal(a, b, budget);
    return evaluate_affine(a) == evaluate_affine(b);
}

std::shared_ptr<const Platform> Platform::make_automaton(std::uint8_t id, std::string name,
                                                         AutomatonGroup group, bool contracting,
                                                         Bytes config,
                                                         const ContractionBudget& budget) {
    auto p = std::shared_ptr<Platform>(new Platform());
    p->id_ = id;
    p->name_ = std::move(name);
    p->kind_ = PlatformKind::automaton;
    p->contracting_ = contracting;
    p->config_ = std::move(config);
    p->group_ = std::make_shared<const AutomatonGroup>(std::move(group));
    if (contracting) p->nucleus_ = std::make_shared<const Nucleus>(compute_nucleus(*p->group_, budget));
    return p;
}

std::shared_ptr<const Platform> Platform::make_affine(std::vector<AffineElement> generators) {
    if (generators.empty()) throw PlatformError("affine platform needs at least one generator");
    const std::size_t n = generators[0].dimension();
    for (const AffineElement& g : generators) {
        if (g.dimension() != n || g.translation.size() != n)
            throw PlatformError("affine generators must share one dimension");
        BigInt det = mat_det(g.matrix);
        if (det != 1 && det != -1)
            throw PlatformError("affine generator matrix is not unimodular");
    }
    auto p = std::shared_ptr<Platform>(new Platform());
    p->id_ = platform_id::affine;
    p->name_ = "affine";
    p->kind_ = PlatformKind::affine;
    p->contracting_ = false;
    p->dimension_ = n;
    p->affine_generators_ = std::move(generators);
    Bytes config;
    put_u8(config, static_cast<std::uint8_t>(n));
    put_u16(config, static_cast<std::uint16_t>(p->affine_generators_.size()));
    for (const AffineElement& g : p->affine_generators_) write_affine(config, g);
    p->config_ = std::move(config);
    return p;
}

PlatformPtr grigorchuk() {
    // states a,b,c,d,e over {0,1}
    MealyAutomaton m(2, {"a", "b", "c", "d", "e"}, 4,
                     {{4, 4},  // a -> e,e
                      {0, 2},  // b -> a,c
                      {0, 3},  // c -> a,d
                      {4, 1},  // d -> e,b
                      {4, 4}}, // e
                     {{1, 0},  // a swaps
                      {0, 1},
                      {0, 1},
                      {0, 1},
                      {0, 1}});
    AutomatonGroup g(platform_id::grigorchuk, std::move(m), RewritePolicy::klein({{1, 2, 3}}),
                     {0, 1, 2, 3});
    return Platform::make_automaton(platform_id::grigorchuk, "grigorchuk", std::move(g), true, {});
}

namespace {

void check_gomega_spec(const GOmegaSpec& spec) {
    if (spec.period.empty()) throw PlatformError("g_omega: period must be nonempty");
    for (char c : spec.preperiod + spec.period)
        if (c < '0' || c > '2') throw PlatformError("g_omega: sequence letters must be 0, 1 or 2");
}

} // namespace

PlatformPtr g_omega(const GOmegaSpec& spec) {
    check_gomega_spec(spec);
    const std::size_t pre = spec.preperiod.size();
    const std::size_t phases = pre + spec.period.size();
    // states: a, then (b,c,d) per phase, then e
    const State a = 0;
    const State e = static_cast<State>(1 + 3 * phases);
    auto bcd = [&](std::size_t phase, int which) {
        return static_cast<State>(1 + 3 * phase + which);
    };
    std::vector<std::string> names{"a"};
    for (std::size_t p = 0; p < phases; ++p) {
        std::string suffix = p == 0 ? "" : std::to_string(p);
        names.push_back("b" + suffix);
        names.push_back("c" + suffix);
        names.push_back("d" + suffix);
    }
    names.push_back("e");

    std::vector<std::vector<State>> tr(names.size(), std::vector<State>(2, e));
    std::vector<std::vector<Letter>> out(names.size(), {0, 1});
    out[a] = {1, 0};
    // column maps: omega letter -> sections of (b,c,d) at 0
    auto column = [&](char w, int which) -> State {
        static const int table[3][3] = {{1, 1, 0},  // '0' -> (a,a,e)
                                        {1, 0, 1},  // '1' -> (a,e,a)
                                        {0, 1, 1}}; // '2' -> (e,a,a)
        return table[w - '0'][which] ? a : e;
    };
    std::vector<std::array<State, 3>> triples;
    for (std::size_t p = 0; p < phases; ++p) {
        char w = p < pre ? spec.preperiod[p] : spec.period[p - pre];
        std::size_t next = p + 1 < phases ? p + 1 : pre;
        for (int which = 0; which < 3; ++which) {
            tr[bcd(p, which)][0] = column(w, which);
            tr[bcd(p, which)][1] = bcd(next, which);
        }
        triples.push_back({bcd(p, 0), bcd(p, 1), bcd(p, 2)});
    }

    Bytes config;
    put_u8(config, static_cast<std::uint8_t>(pre));
    for (char c : spec.preperiod) put_u8(config, static_cast<std::uint8_t>(c - '0'));
    put_u8(config, static_cast<std::uint8_t>(spec.period.size()));
    for (char c : spec.period) put_u8(config, static_cast<std::uint8_t>(c - '0'));

    MealyAutomaton m(2, std::move(names), e, std::move(tr), std::move(out));
    AutomatonGroup g(platform_id::g_omega, std::move(m), RewritePolicy::klein(std::move(triples)),
                     {a, bcd(0, 0), bcd(0, 1), bcd(0, 2)});
    return Platform::make_automaton(platform_id::g_omega, "g_omega", std::move(g), true,
                                    std::move(config));
}

PlatformPtr basilica() {
    MealyAutomaton m(2, {"a", "b", "e"}, 2,
                     {{2, 1},  // a -> e,b
                      {2, 0},  // b -> e,a
                      {2, 2}},
                     {{0, 1}, {1, 0}, {0, 1}});
    AutomatonGroup g(platform_id::basilica, std::move(m), RewritePolicy::free_reduction(), {0, 1});
    return Platform::make_automaton(platform_id::basilica, "basilica", std::move(g), true, {});
}

PlatformPtr universal() {
    // letters (x,y) -> 3x+y; states a,b,c,d,e
    const State A = 0, B = 1, C = 2, D = 3, E = 4;
    std::vector<std::vector<State>> tr = {
        {E, E, E, E, E, E},  // a
        {A, A, E, B, B, B},  // b: (0,0)->a (0,1)->a (0,2)->e (1,y)->b
        {A, E, A, C, C, C},  // c: (0,0)->a (0,1)->e (0,2)->a (1,y)->c
        {E, A, A, D, D, D},  // d: (0,0)->e (0,1)->a (0,2)->a (1,y)->d
        {E, E, E, E, E, E},  // e
    };
    std::vector<std::vector<Letter>> out = {
        {3, 4, 5, 0, 1, 2}, // a: (x,y) -> (1-x,y)
        {0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 4, 5},
    };
    MealyAutomaton m(6, {"a", "b", "c", "d", "e"}, E, std::move(tr), std::move(out));
    AutomatonGroup g(platform_id::universal, std::move(m), RewritePolicy::klein({{B, C, D}}),
                     {A, B, C, D});
    return Platform::make_automaton(platform_id::universal, "universal", std::move(g), true, {});
}

PlatformPtr hanoi(int pegs) {
    if (pegs < 3) throw PlatformError("hanoi: need at least 3 pegs");
    if (pegs > 10) throw PlatformError("hanoi: at most 10 pegs supported");
    const auto k = static_cast<std::uint8_t>(pegs);
    std::vector<std::string> names;
    std::vector<std::pair<Letter, Letter>> swaps;
    for (Letter i = 0; i < k; ++i)
        for (Letter j = static_cast<Letter>(i + 1); j < k; ++j) {
            names.push_back("a" + std::to_string(i) + std::to_string(j));
            swaps.emplace_back(i, j);
        }
    const State e = static_cast<State>(names.size());
    names.push_back("e");
    std::vector<std::vector<State>> tr(names.size(), std::vector<State>(k, e));
    std::vector<std::vector<Letter>> out(names.size());
    for (std::size_t s = 0; s < swaps.size(); ++s) {
        auto [i, j] = swaps[s];
        out[s] = identity_perm(k);
        out[s][i] = j;
        out[s][j] = i;
        for (Letter x = 0; x < k; ++x)
            tr[s][x] = (x == i || x == j) ? e : static_cast<State>(s);
    }
    out[e] = identity_perm(k);
    std::vector<State> gens(swaps.size());
    for (std::size_t s = 0; s < gens.size(); ++s) gens[s] = static_cast<State>(s);

    Bytes config;
    put_u8(config, k);
    MealyAutomaton m(k, std::move(names), e, std::move(tr), std::move(out));
    AutomatonGroup g(platform_id::hanoi, std::move(m), RewritePolicy::involutions(),
                     std::move(gens));
    return Platform::make_automaton(platform_id::hanoi, "hanoi", std::move(g), pegs == 3,
                                    std::move(config));
}

PlatformPtr affine_platform(std::vector<AffineElement> generators) {
    return Platform::make_affine(std::move(generators));
}

PlatformPtr sanov_affine() {
    AffineElement g0, g1;
    g0.translation = {0, 0};
    g0.matrix.n = 2;
    g0.matrix.a = {1, 2, 0, 1};
    g1.translation = {0, 0};
    g1.matrix.n = 2;
    g1.matrix.a = {1, 0, 2, 1};
    return affine_platform({g0, g1});
}

HanoiConfig hanoi_legal_move(const HanoiConfig& config, int i, int j) {
    if (i < 0 || j < 0 || i >= config.pegs || j >= config.pegs || i >= j)
        throw PlatformError("hanoi move: pegs must satisfy 0 <= i < j < k");
    for (Letter peg : config.discs)
        if (peg >= config.pegs) throw PlatformError("hanoi move: disc on invalid peg");
    HanoiConfig out = config;
    // disc indices run smallest-first, so the first disc found on peg i or j
    // is the top (smallest) of the two stacks
    for (std::size_t d = 0; d < out.discs.size(); ++d) {
        if (out.discs[d] == i) {
            out.discs[d] = static_cast<Letter>(j);
            return out;
        }
        if (out.discs[d] == j) {
            out.discs[d] = static_cast<Letter>(i);
            return out;
        }
    }
    return out; // neither peg occupied
}

const std::vector<PlatformFamily>& platform_families() {
    static const std::vector<PlatformFamily> families = {
        {platform_id::grigorchuk, "grigorchuk"}, {platform_id::g_omega, "g_omega"},
        {platform_id::basilica, "basilica"},     {platform_id::universal, "universal"},
        {platform_id::hanoi, "hanoi"},           {platform_id::affine, "affine"},
    };
    return families;
}

PlatformPtr default_platform(std::string_view name) {
    if (name == "grigorchuk") return grigorchuk();
    if (name == "g_omega") return g_omega({"", "012"});
    if (name == "basilica") return basilica();
    if (name == "universal") return universal();
    if (name == "hanoi") return hanoi(3);
    if (name == "affine") return sanov_affine();
    throw PlatformError("unknown platform '" + std::string(name) + "'");
}

PlatformPtr platform_from_wire(std::uint8_t id, std::span<const std::uint8_t> config) {
    switch (id) {
    case platform_id::grigorchuk:
    case platform_id::basilica:
    case platform_id::universal: {
        if (!config.empty()) throw ParseError(ParseCode::trailing_bytes, "unexpected config bytes");
        if (id == platform_id::grigorchuk) return grigorchuk();
        if (id == platform_id::basilica) return basilica();
        return universal();
    }
    case platform_id::g_omega: {
        ByteReader r(config);
        GOmegaSpec spec;
        std::uint8_t pre = r.u8();
        for (std::uint8_t i = 0; i < pre; ++i) {
            std::uint8_t c = r.u8();
            if (c > 2) throw ParseError(ParseCode::bad_integer, "g_omega letter out of range");
            spec.preperiod.push_back(static_cast<char>('0' + c));
        }
        std::uint8_t per = r.u8();
        for (std::uint8_t i = 0; i < per; ++i) {
            std::uint8_t c = r.u8();
            if (c > 2) throw ParseError(ParseCode::bad_integer, "g_omega letter out of range");
            spec.period.push_back(static_cast<char>('0' + c));
        }
        r.expect_end();
        return g_omega(spec);
    }
    case platform_id::hanoi: {
        ByteReader r(config);
        std::uint8_t k = r.u8();
        r.expect_end();
        return hanoi(k);
    }
    case platform_id::affine: {
        ByteReader r(config);
        std::uint8_t n = r.u8();
        std::uint16_t count = r.u16();
        if (count == 0) throw ParseError(ParseCode::bad_count, "affine: no generators");
        std::vector<AffineElement> gens;
        gens.reserve(count);
        for (std::uint16_t i = 0; i < count; ++i) {
            AffineElement g = read_affine(r);
            if (g.dimension() != n)
                throw ParseError(ParseCode::bad_count, "affine: generator dimension mismatch");
            gens.push_back(std::move(g));
        }
        r.expect_end();
        return affine_platform(std::move(gens));
    }
    default:
        throw ParseError(ParseCode::platform_mismatch,
                         "unknown platform id " + std::to_string(id));
    }
}

namespace {

std::string trim(std::string s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::vector<BigInt> parse_int_list(const std::string& value) {
    std::vector<BigInt> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) {
        try {
            out.emplace_back(tok);
        } catch (const std::exception&) {
            throw ConfigError("bad integer '" + tok + "'");
        }
    }
    return out;
}

} // namespace

PlatformPtr load_platform_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError("missing key '" + key + "'");
        return it->second;
    };
    auto get_num = [&](const std::string& key) -> long {
        try {
            return std::stol(get(key));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' must be an integer");
        }
    };
    const std::string& platform = get("platform");
    if (platform == "g_omega") {
        GOmegaSpec spec;
        if (kv.count("preperiod")) spec.preperiod = kv["preperiod"];
        spec.period = get("period");
        return g_omega(spec);
    }
    if (platform == "hanoi") return hanoi(static_cast<int>(get_num("pegs")));
    if (platform == "affine") {
        long n_raw = get_num("dimension");
        long count_raw = get_num("generators");
        if (n_raw <= 0 || count_raw <= 0)
            throw ConfigError("dimension and generators must be positive");
        std::size_t n = static_cast<std::size_t>(n_raw);
        std::size_t count = static_cast<std::size_t>(count_raw);
        std::vector<AffineElement> gens;
        for (std::size_t i = 0; i < count; ++i) {
            AffineElement g;
            auto mat = parse_int_list(get("matrix." + std::to_string(i)));
            if (mat.size() != n * n)
                throw ConfigError("matrix." + std::to_string(i) + " needs " +
                                  std::to_string(n * n) + " entries (row-major)");
            auto tra = parse_int_list(get("translation." + std::to_string(i)));
            if (tra.size() != n)
                throw ConfigError("translation." + std::to_string(i) + " needs " +
                                  std::to_string(n) + " entries");
            g.matrix.n = n;
            g.matrix.a = std::move(mat);
            g.translation = std::move(tra);
            gens.push_back(std::move(g));
        }
        return affine_platform(std::move(gens));
    }
    if (platform == "grigorchuk" || platform == "basilica" || platform == "universal")
        return default_platform(platform);
    throw ConfigError("unknown platform '" + platform + "'");
}

} // namespace aag
