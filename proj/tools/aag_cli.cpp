// aag -- command line front end: platform inspection, word evaluation, key
// generation, local and wire exchanges, the conjugacy-search harness and
// timing runs.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include "aag/attack.hpp"
#include "aag/element.hpp"
#include "aag/wire.hpp"

using namespace aag;

namespace {

// exit codes: 0 ok, 1 unexpected, 2 usage, 3 budget, 4 wire, 5 parse, 6 platform/config
constexpr int kExitBudget = 3;
constexpr int kExitWire = 4;
constexpr int kExitParse = 5;
constexpr int kExitPlatform = 6;

ContractionBudget parse_budget(const std::string& text) {
    ContractionBudget b;
    if (text.empty()) return b;
    try {
        auto colon = text.find(':');
        b.max_closure = std::stoull(text.substr(0, colon));
        if (colon != std::string::npos) b.max_depth = std::stoull(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ConfigError("budget must be MAX_CLOSURE[:MAX_DEPTH]");
    }
    if (b.max_closure == 0 || b.max_depth == 0)
        throw ConfigError("budget components must be positive");
    return b;
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

struct PlatformChoice {
    std::string name = "grigorchuk";
    std::string config_path;
    int pegs = 0;

    PlatformPtr resolve() const {
        if (!config_path.empty()) {
            Bytes text = read_file(config_path);
            return load_platform_config(std::string(text.begin(), text.end()));
        }
        if (name == "hanoi" && pegs != 0) return hanoi(pegs);
        return default_platform(name);
    }

    void add_options(CLI::App* cmd) {
        cmd->add_option("--platform", name,
                        "platform family: grigorchuk, g_omega, basilica, universal, hanoi, affine");
        cmd->add_option("--config", config_path, "key=value platform config file");
        cmd->add_option("--pegs", pegs, "peg count for hanoi");
    }
};

void warn_if_unsuitable(const Platform& platform) {
    if (platform.kind() == PlatformKind::automaton && !platform.contracting())
        std::cerr << "warning: platform '" << platform.name()
                  << "' is not flagged contracting; the word problem has no polynomial bound"
                  << " and key exchange is unavailable\n";
}

std::string hex_digest(const Digest& d) { return to_hex(std::span(d.data(), d.size())); }

// shared session setup used by exchange/attack/bench
struct SessionSpec {
    std::uint64_t params_seed = 1001;
    std::uint64_t seed_a = 1;
    std::uint64_t seed_b = 2;
    std::size_t n = 4, m = 4;
    std::size_t s = 10, t = 10;
    std::size_t gen_len = 5;
    bool positive_only = false;
    std::string params_path;

    void add_options(CLI::App* cmd, bool with_private_seeds) {
        cmd->add_option("--params", params_path, "read public params from a keygen file");
        cmd->add_option("--params-seed", params_seed, "seed for generated public params");
        cmd->add_option("--n", n, "alice generator count");
        cmd->add_option("--m", m, "bob generator count");
        cmd->add_option("--gen-len", gen_len, "word length of generated public elements");
        cmd->add_flag("--positive-only", positive_only, "private words without inverse letters");
        if (with_private_seeds) {
            cmd->add_option("--seed-a", seed_a, "alice private seed");
            cmd->add_option("--seed-b", seed_b, "bob private seed");
            cmd->add_option("--s", s, "alice private word length");
            cmd->add_option("--t", t, "bob private word length");
        }
    }

    PublicParams make_params(const PlatformChoice& choice, const ContractionBudget& budget) const {
        if (!params_path.empty())
            return PublicParams::deserialize(read_file(params_path), budget);
        PlatformPtr platform = choice.resolve();
        warn_if_unsuitable(*platform);
        return random_params(platform, n, m, gen_len, params_seed, !positive_only, budget);
    }
};

int cmd_platforms() {
    std::cout << "id  name        kind       k  generators  contracting  nucleus\n";
    for (const PlatformFamily& fam : platform_families()) {
        PlatformPtr p = default_platform(fam.name);
        char kind = p->kind() == PlatformKind::automaton ? 'A' : 'F';
        std::string k = p->kind() == PlatformKind::automaton
                            ? std::to_string(p->group().alphabet_size())
                            : "-";
        std::string nucleus =
            p->contracting() ? std::to_string(p->nucleus().size()) : "-";
        std::printf("%02x  %-10s  %-9s  %-2s %-11zu %-12s %s\n", p->id(), p->name().c_str(),
                    kind == 'A' ? "automaton" : "affine", k.c_str(), p->generator_count(),
                    p->contracting() ? "yes" : "no", nucleus.c_str());
    }
    std::cout << "\ndefaults: g_omega period 012, hanoi 3 pegs, affine 2x2 demo generators\n"
              << "hanoi with 4+ pegs is constructible but not contracting (no key use)\n";
    return 0;
}

int cmd_eval(const PlatformChoice& choice, const std::string& word_text,
             const std::string& apply_string, const ContractionBudget& budget) {
    PlatformPtr platform = choice.resolve();
    warn_if_unsuitable(*platform);
    Word w = platform->parse_word(word_text);
    std::cout << "platform: " << platform->name() << "\n";
    std::cout << "reduced: " << platform->word_to_string(w) << " (length " << w.size() << ")\n";
    if (platform->kind() == PlatformKind::affine) {
        const AffineElement g = platform->evaluate_affine(w);
        std::cout << "matrix:";
        for (std::size_t i = 0; i < g.dimension(); ++i) {
            std::cout << (i ? " ;" : "");
            for (std::size_t j = 0; j < g.dimension(); ++j)
                std::cout << " " << g.matrix.at(i, j).str();
        }
        std::cout << "\ntranslation:";
        for (const BigInt& u : g.translation) std::cout << " " << u.str();
        std::cout << "\n" << (g.is_identity() ? "trivial" : "nontrivial") << "\n";
        return 0;
    }
    bool trivial = platform->word_is_trivial(w, budget);
    std::cout << (trivial ? "trivial" : "nontrivial") << "\n";
    if (!apply_string.empty()) {
        std::vector<Letter> s;
        for (char c : apply_string) {
            if (c < '0' || c >= static_cast<char>('0' + platform->group().alphabet_size()))
                throw PlatformError("string letter out of range");
            s.push_back(static_cast<Letter>(c - '0'));
        }
        auto image = platform->group().apply(w, s);
        std::cout << "image: ";
        for (Letter x : image) std::cout << static_cast<char>('0' + x);
        std::cout << "\n";
    }
    if (platform->contracting()) {
        Element e = Element::from_word(platform, w, budget);
        const Portrait& p = e.portrait();
        Bytes bytes = e.bytes();
        std::cout << "portrait: depth " << p.root.depth() << ", " << p.root.node_count()
                  << " nodes, " << bytes.size() << " bytes\n";
        std::cout << "bytes: " << to_hex(bytes) << "\n";
    }
    return 0;
}

int cmd_keygen(const PlatformChoice& choice, const SessionSpec& spec, const std::string& out_path,
               const ContractionBudget& budget) {
    PlatformPtr platform = choice.resolve();
    warn_if_unsuitable(*platform);
    PublicParams params =
        random_params(platform, spec.n, spec.m, spec.gen_len, spec.params_seed,
                      !spec.positive_only, budget);
    Bytes bytes = params.serialize();
    write_file(out_path, bytes);
    std::cout << "platform: " << platform->name() << "\n"
              << "alice generators: " << params.alice_generators.size() << "\n"
              << "bob generators: " << params.bob_generators.size() << "\n"
              << "params bytes: " << bytes.size() << "\n"
              << "sha256: " << hex_digest(sha256(bytes)) << "\n"
              << "written to " << out_path << "\n";
    return 0;
}

int cmd_exchange_local(const PlatformChoice& choice, const SessionSpec& spec,
                       const std::string& transcript_path, const ContractionBudget& budget) {
    PublicParams params = spec.make_params(choice, budget);
    PrivateKey alice = gen_private(params, Side::alice, spec.s, spec.seed_a);
    PrivateKey bob = gen_private(params, Side::bob, spec.t, spec.seed_b);
    LocalExchange ex = run_local_exchange(params, alice, bob, budget);
    std::cout << "alice " << hex_digest(ex.alice_key.key_bytes) << "\n";
    std::cout << "bob   " << hex_digest(ex.bob_key.key_bytes) << "\n";
    bool match = ex.alice_key.key_bytes == ex.bob_key.key_bytes;
    std::cout << "match: " << (match ? "yes" : "no") << "\n";
    if (!transcript_path.empty()) {
        write_file(transcript_path, serialize_transcript(ex.transcript));
        std::cout << "transcript written to " << transcript_path << "\n";
    }
    return match ? 0 : 1;
}

int run_endpoint(ByteStream& stream, WireRole role, const PublicParams& params, Side side,
                 std::uint64_t priv_seed, std::size_t priv_len, bool adopt,
                 const ContractionBudget& budget) {
    PrivateKey priv = gen_private(params, side, priv_len, priv_seed);
    ExchangeOptions options;
    options.adopt_params = adopt;
    options.budget = budget;
    ExchangeOutcome out = run_exchange(stream, role, params, priv, options);
    std::cout << "role: " << (role == WireRole::initiator ? "initiator" : "responder")
              << ", side: " << side_name(side) << "\n";
    std::cout << "confirm: ok\n";
    std::cout << "key " << hex_digest(out.key.key_bytes) << "\n";
    return 0;
}

int cmd_attack(const PlatformChoice& choice, const SessionSpec& spec,
               const std::string& transcript_path, const std::string& side_text,
               std::size_t max_len, unsigned threads, bool dedup, bool json_out,
               const ContractionBudget& budget) {
    AttackOptions options;
    options.threads = threads;
    options.dedup_elements = dedup;

    Transcript transcript;
    long long s_field = -1, t_field = -1;
    if (!transcript_path.empty()) {
        transcript = deserialize_transcript(read_file(transcript_path), budget);
    } else {
        PublicParams params = spec.make_params(choice, budget);
        PrivateKey alice = gen_private(params, Side::alice, spec.s, spec.seed_a);
        PrivateKey bob = gen_private(params, Side::bob, spec.t, spec.seed_b);
        transcript = run_local_exchange(params, alice, bob, budget).transcript;
        s_field = static_cast<long long>(spec.s);
        t_field = static_cast<long long>(spec.t);
    }
    const PublicParams& params = transcript.params;

    bool want_alice = side_text == "alice" || side_text == "both";
    bool want_bob = side_text == "bob" || side_text == "both";
    std::optional<AttackResult> res_a, res_b;
    auto run_side = [&](Side side) {
        AttackInstance inst = instance_from_transcript(transcript, side);
        AttackResult r = solve_simultaneous(inst, max_len, budget, options);
        const char* status = r.status == AttackStatus::found ? "found"
                             : r.status == AttackStatus::exhausted_length ? "exhausted"
                                                                          : "budget";
        std::cout << "side=" << side_name(side) << " status=" << status
                  << " nodes=" << r.nodes_explored << " ms=" << r.milliseconds;
        if (r.solution) {
            std::cout << " len=" << r.solution->size() << " solution=";
            if (r.solution->empty()) std::cout << "e";
            for (const Gen& g : *r.solution)
                std::cout << (g.state == r.solution->front().state && &g == &r.solution->front()
                                  ? ""
                                  : " ")
                          << "g" << g.state << (g.inverse ? "'" : "");
        }
        std::cout << "\n";
        return r;
    };
    if (want_alice) res_a = run_side(Side::alice);
    if (want_bob) res_b = run_side(Side::bob);

    bool recovered = false;
    if (res_a && res_b && res_a->solution && res_b->solution) {
        Digest d = recover_key(*res_a->solution, *res_b->solution, params, budget);
        recovered = d == transcript.alice_digest;
        std::cout << "recovered " << hex_digest(d) << "\n";
        std::cout << "honest    " << hex_digest(transcript.alice_digest) << "\n";
    }
    std::cout << "key recovered: " << (recovered ? "true" : "false") << "\n";

    if (json_out) {
        nlohmann::json j;
        j["platform"] = params.platform->name();
        j["n"] = params.alice_generators.size();
        j["m"] = params.bob_generators.size();
        j["s"] = s_field;
        j["t"] = t_field;
        j["L"] = max_len;
        j["found"] = (res_a && res_a->solution ? 1 : 0) + (res_b && res_b->solution ? 1 : 0);
        j["nodes"] = (res_a ? res_a->nodes_explored : 0) + (res_b ? res_b->nodes_explored : 0);
        j["milliseconds"] =
            (res_a ? res_a->milliseconds : 0.0) + (res_b ? res_b->milliseconds : 0.0);
        j["recovered"] = recovered;
        std::cout << j.dump() << "\n";
    }
    return 0;
}

// Products of conjugated relators of the binary five-state platform; these
// exercise the full closure (no early nontrivial-permutation exit).
Word random_trivial_grigorchuk_word(const Platform& platform, std::size_t target_length,
                                    SplitMix64& rng) {
    const auto& group = platform.group();
    static const std::vector<std::vector<std::size_t>> relator_cycles = {
        {0, 3, 0, 3, 0, 3, 0, 3},                                         // (ad)^4
        {0, 2, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2},                 // (ac)^8
    };
    Word acc = group.identity_word();
    while (acc.size() < target_length) {
        const auto& rel = relator_cycles[rng.below(relator_cycles.size())];
        std::vector<Gen> letters;
        for (std::size_t idx : rel) letters.push_back(Gen{static_cast<State>(idx), false});
        Word relator = platform.make_word(letters);
        Word conj = random_generator_word(platform, rng.below(target_length / 4 + 1), rng);
        Word piece = group.multiply(group.multiply(conj, relator), group.invert(conj));
        acc = group.multiply(acc, piece);
    }
    return acc;
}

int cmd_bench(const PlatformChoice& choice, std::size_t sessions, std::uint64_t seed,
              const ContractionBudget& budget) {
    PlatformPtr platform = choice.resolve();
    using clock = std::chrono::steady_clock;

    if (platform->name() == "grigorchuk") {
        std::cout << "word problem scaling (trivial words, full closure):\n";
        std::cout << "length  median_ms\n";
        SplitMix64 rng(seed);
        std::vector<double> logs_n, logs_t;
        for (std::size_t len : {50, 100, 200, 400}) {
            std::vector<double> times;
            std::size_t actual = 0;
            for (int trial = 0; trial < 3; ++trial) {
                Word w = random_trivial_grigorchuk_word(*platform, len, rng);
                actual = std::max(actual, w.size());
                ContractionBudget loose{64 * w.size() * w.size() + 1024, 64};
                auto t0 = clock::now();
                bool ok = platform->word_is_trivial(w, loose);
                auto t1 = clock::now();
                if (!ok) throw PlatformError("bench: trivial word misclassified");
                times.push_back(
                    std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                        .count());
            }
            std::sort(times.begin(), times.end());
            double median = times[times.size() / 2];
            std::printf("%6zu  %9.3f\n", actual, median);
            logs_n.push_back(std::log(static_cast<double>(actual)));
            logs_t.push_back(std::log(std::max(median, 1e-6)));
        }
        double n = static_cast<double>(logs_n.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < logs_n.size(); ++i) {
            sx += logs_n[i];
            sy += logs_t[i];
            sxx += logs_n[i] * logs_n[i];
            sxy += logs_n[i] * logs_t[i];
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        std::printf("log-log slope: %.2f\n\n", slope);
    }

    if (!platform->contracting() && platform->kind() == PlatformKind::automaton) {
        warn_if_unsuitable(*platform);
        return 0;
    }
    std::cout << "session timing (" << sessions << " sessions, n=m=4, s=t=10):\n";
    auto t0 = clock::now();
    for (std::size_t i = 0; i < sessions; ++i) {
        PublicParams params = random_params(platform, 4, 4, 5, seed + i, true, budget);
        PrivateKey alice = gen_private(params, Side::alice, 10, seed + 2 * i + 1);
        PrivateKey bob = gen_private(params, Side::bob, 10, seed + 2 * i + 2);
        LocalExchange ex = run_local_exchange(params, alice, bob, budget);
        if (ex.alice_key.key_bytes != ex.bob_key.key_bytes)
            throw PlatformError("bench: key disagreement");
    }
    auto t1 = clock::now();
    double total =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count();
    std::printf("total %.1f ms, %.1f ms/session\n", total, total / sessions);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"automaton-group key agreement toolkit"};
    app.require_subcommand(1);
    std::string budget_text;
    app.add_option("--budget", budget_text,
                   "contraction budget as MAX_CLOSURE[:MAX_DEPTH]")
        ->envname("AAG_BUDGET");

    PlatformChoice choice;
    SessionSpec spec;

    auto* c_platforms = app.add_subcommand("platforms", "list registered platforms");

    auto* c_eval = app.add_subcommand("eval", "reduce a word, decide triviality, show portrait");
    std::string eval_platform, eval_word, eval_apply;
    c_eval->add_option("platform", eval_platform, "platform name")->required();
    c_eval->add_option("word", eval_word, "generator word, e.g. bcd or \"a01 a01\"")->required();
    c_eval->add_option("--apply", eval_apply, "also apply the word to this string");
    std::string eval_config;
    int eval_pegs = 0;
    c_eval->add_option("--config", eval_config, "key=value platform config file");
    c_eval->add_option("--pegs", eval_pegs, "peg count for hanoi");

    auto* c_keygen = app.add_subcommand("keygen", "generate and store public parameters");
    std::string keygen_out = "params.bin";
    choice.add_options(c_keygen);
    spec.add_options(c_keygen, false);
    c_keygen->add_option("--seed", spec.params_seed, "seed for the public generators");
    c_keygen->add_option("--out", keygen_out, "output file");

    auto* c_exchange = app.add_subcommand("exchange", "run a key exchange");
    bool local = false;
    std::string transcript_path;
    c_exchange->add_flag("--local", local, "simulate both sides in-process");
    c_exchange->add_option("--transcript", transcript_path, "write the session transcript");
    choice.add_options(c_exchange);
    spec.add_options(c_exchange, true);

    auto* c_host = app.add_subcommand("host", "wait for a peer and respond to an exchange");
    std::uint16_t port = 4242;
    std::string host_side = "alice", peer_host = "127.0.0.1";
    std::uint64_t priv_seed = 1;
    std::size_t priv_len = 10;
    bool adopt = false;
    c_host->add_option("--port", port, "tcp port");
    c_host->add_option("--side", host_side, "alice or bob")->check(CLI::IsMember({"alice", "bob"}));
    c_host->add_option("--priv-seed", priv_seed, "private key seed");
    c_host->add_option("--len", priv_len, "private word length");
    c_host->add_flag("--adopt-params", adopt, "accept initiator-chosen params");
    choice.add_options(c_host);
    spec.add_options(c_host, false);

    auto* c_join = app.add_subcommand("join", "connect to a host and initiate an exchange");
    c_join->add_option("--host", peer_host, "host to connect to");
    c_join->add_option("--port", port, "tcp port");
    c_join->add_option("--side", host_side, "alice or bob")->check(CLI::IsMember({"alice", "bob"}));
    c_join->add_option("--priv-seed", priv_seed, "private key seed");
    c_join->add_option("--len", priv_len, "private word length");
    choice.add_options(c_join);
    spec.add_options(c_join, false);

    auto* c_attack = app.add_subcommand("attack", "run the simultaneous conjugacy search");
    bool from_seeds = false;
    std::string attack_transcript, attack_side = "both";
    std::size_t max_len = 4;
    unsigned threads = 1;
    bool dedup = false, json_out = false;
    c_attack->add_flag("--from-seeds", from_seeds, "build the instance from seeds");
    c_attack->add_option("--transcript", attack_transcript, "build the instance from a transcript");
    c_attack->add_option("--side", attack_side, "alice, bob or both")
        ->check(CLI::IsMember({"alice", "bob", "both"}));
    c_attack->add_option("--max-len", max_len, "search words up to this length");
    c_attack->add_option("--threads", threads, "parallel workers (first-letter partition)");
    c_attack->add_flag("--dedup", dedup, "memoize candidate elements");
    c_attack->add_flag("--json", json_out, "also print a machine-readable record");
    choice.add_options(c_attack);
    spec.add_options(c_attack, true);

    auto* c_bench = app.add_subcommand("bench", "word-problem and session timing");
    std::size_t sessions = 5;
    std::uint64_t bench_seed = 7;
    c_bench->add_option("--sessions", sessions, "sessions to time");
    c_bench->add_option("--seed", bench_seed, "seed");
    choice.add_options(c_bench);

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough(); // global options like --budget may follow the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ContractionBudget budget = parse_budget(budget_text);
        if (c_platforms->parsed()) return cmd_platforms();
        if (c_eval->parsed()) {
            PlatformChoice ec;
            ec.name = eval_platform;
            ec.config_path = eval_config;
            ec.pegs = eval_pegs;
            return cmd_eval(ec, eval_word, eval_apply, budget);
        }
        if (c_keygen->parsed()) return cmd_keygen(choice, spec, keygen_out, budget);
        if (c_exchange->parsed()) {
            if (!local)
                throw ConfigError("exchange requires --local; use host/join for the wire");
            return cmd_exchange_local(choice, spec, transcript_path, budget);
        }
        if (c_host->parsed()) {
            PublicParams params = spec.make_params(choice, budget);
            Side side = host_side == "alice" ? Side::alice : Side::bob;
            TcpListener listener(port);
            std::cout << "listening on port " << listener.port() << "\n";
            auto stream = listener.accept_one();
            return run_endpoint(*stream, WireRole::responder, params, side, priv_seed, priv_len,
                                adopt, budget);
        }
        if (c_join->parsed()) {
            PublicParams params = spec.make_params(choice, budget);
            Side side = host_side == "alice" ? Side::alice : Side::bob;
            auto stream = tcp_connect(peer_host, port);
            return run_endpoint(*stream, WireRole::initiator, params, side, priv_seed, priv_len,
                                false, budget);
        }
        if (c_attack->parsed()) {
            if (!from_seeds && attack_transcript.empty())
                throw ConfigError("attack needs --from-seeds or --transcript");
            return cmd_attack(choice, spec, attack_transcript, attack_side, max_len, threads,
                              dedup, json_out, budget);
        }
        if (c_bench->parsed()) return cmd_bench(choice, sessions, bench_seed, budget);
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const WireError& e) {
        std::cerr << "wire error: " << e.what() << "\n";
        return kExitWire;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitPlatform;
    } catch (const PlatformError& e) {
        std::cerr << "platform error: " << e.what() << "\n";
        return kExitPlatform;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
